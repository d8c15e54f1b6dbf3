"""Sparse multivariate polynomials over Q(i).

A polynomial is a map from exponent tuples to :class:`GaussianRational`
coefficients. Exponent tuples are plain ``tuple[int, ...]`` and play the role
of monomials throughout the package.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping, Sequence

from .errors import ParseError
from .gaussian import GaussianRational, ONE, ZERO

Monomial = tuple

MAX_EXPONENT = 1 << 20


def total_degree(m: Monomial) -> int:
    return sum(m)


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


@dataclass(frozen=True)
class MonomialOrder:
    """Graded reverse lexicographic or lexicographic order.

    ``perm`` lists variable indices from most to least significant; ``None``
    means ``z1 > z2 > ... > zn``.
    """

    kind: str = "grevlex"
    perm: tuple | None = None

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex"):
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def key(self, m: Monomial):
        if self.perm is not None:
            m = tuple(m[i] for i in self.perm)
        if self.kind == "lex":
            return m
        return (sum(m), tuple(-x for x in reversed(m)))


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


class MultiPoly:
    """Immutable sparse polynomial in ``nvars`` variables with Q(i) coefficients."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping | Iterable = ()):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict = {}
        for m, c in items:
            m = tuple(int(e) for e in m)
            if len(m) != nvars:
                raise ValueError(f"monomial {m} has wrong length for {nvars} variables")
            if any(e < 0 for e in m):
                raise ValueError(f"negative exponent in {m}")
            c = GaussianRational.coerce(c)
            s = clean.get(m)
            c = c if s is None else s + c
            if c:
                clean[m] = c
            elif s is not None:
                del clean[m]
        self.nvars = nvars
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "MultiPoly":
        p = object.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c=1) -> "MultiPoly":
        c = GaussianRational.coerce(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "MultiPoly":
        """The coordinate ``z_{index+1}`` (``index`` is 0-based)."""
        if not 0 <= index < nvars:
            raise IndexError(f"variable index {index} out of range for {nvars} variables")
        m = [0] * nvars
        m[index] = 1
        return cls._raw(nvars, {tuple(m): ONE})

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1) -> "MultiPoly":
        return cls(len(exps), {tuple(exps): c})

    # -- inspection ---------------------------------------------------------

    def terms(self):
        return self._terms.items()

    def monomials(self):
        return self._terms.keys()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and (0,) * self.nvars in self._terms)

    def coefficient_of(self, m: Sequence[int]) -> GaussianRational:
        m = tuple(m)
        if len(m) != self.nvars:
            raise ValueError(f"monomial {m} has wrong length for {self.nvars} variables")
        return self._terms.get(m, ZERO)

    def constant_term(self) -> GaussianRational:
        return self._terms.get((0,) * self.nvars, ZERO)

    def total_degree(self) -> int:
        """Largest total degree of a term; ``-1`` for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def degree_in(self, var: int) -> int:
        return max((m[var] for m in self._terms), default=-1)

    def leading_term(self, order: MonomialOrder = GREVLEX):
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self._terms, key=order.key)
        return m, self._terms[m]

    def sorted_terms(self, order: MonomialOrder = GREVLEX):
        return sorted(self._terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "MultiPoly"):
        if other.nvars != self.nvars:
            raise ValueError(f"variable-count mismatch: {self.nvars} vs {other.nvars}")

    def _lift(self, other) -> "MultiPoly | None":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, GaussianRational)):
            return MultiPoly.constant(self.nvars, other)
        return None

    def __add__(self, other) -> "MultiPoly":
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if len(other._terms) > len(self._terms):
            big, small = other, self
        else:
            big, small = self, other
        out = dict(big._terms)
        for m, c in small._terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return MultiPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw(self.nvars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "MultiPoly":
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> "MultiPoly":
        c = GaussianRational.coerce(c)
        if not c:
            return MultiPoly.zero(self.nvars)
        return MultiPoly._raw(self.nvars, {m: v * c for m, v in self._terms.items()})

    def mul_term(self, mono: Monomial, c) -> "MultiPoly":
        """Multiply by the single term ``c * z^mono``."""
        c = GaussianRational.coerce(c)
        if not c:
            return MultiPoly.zero(self.nvars)
        return MultiPoly._raw(
            self.nvars,
            {tuple(x + y for x, y in zip(m, mono)): v * c for m, v in self._terms.items()},
        )

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                v = ca * cb
                s = out.get(m)
                out[m] = v if s is None else s + v
        return MultiPoly._raw(self.nvars, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other) -> "MultiPoly":
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.scale(GaussianRational.coerce(other).inverse())
        return NotImplemented

    def __pow__(self, e: int) -> "MultiPoly":
        if not isinstance(e, int) or e < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = MultiPoly.constant(self.nvars, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def exact_divide(self, d: "MultiPoly", order: MonomialOrder = GREVLEX) -> "MultiPoly":
        """Return ``q`` with ``self == q * d``; raise ``ValueError`` if ``d`` does not divide."""
        self._check(d)
        if not d:
            raise ZeroDivisionError("polynomial division by zero")
        lm, lc = d.leading_term(order)
        inv = lc.inverse()
        rem = self
        q: dict = {}
        while rem:
            m, c = rem.leading_term(order)
            if not divides(lm, m):
                raise ValueError("inexact polynomial division")
            t = mono_div(m, lm)
            qc = c * inv
            q[t] = qc
            rem = rem - d.mul_term(t, qc)
        return MultiPoly._raw(self.nvars, q)

    # -- calculus and evaluation -------------------------------------------

    def differentiate(self, var: int) -> "MultiPoly":
        if not 0 <= var < self.nvars:
            raise IndexError(f"variable index {var} out of range for {self.nvars} variables")
        out = {}
        for m, c in self._terms.items():
            e = m[var]
            if e:
                dm = m[:var] + (e - 1,) + m[var + 1:]
                out[dm] = c * e
        return MultiPoly._raw(self.nvars, out)

    def derivative(self, orders: Sequence[int]) -> "MultiPoly":
        """Iterated partial derivative ``d^|orders| / dz^orders``."""
        p = self
        for var, k in enumerate(orders):
            for _ in range(k):
                p = p.differentiate(var)
        return p

    def evaluate(self, point: Sequence) -> GaussianRational:
        point = [GaussianRational.coerce(x) for x in point]
        if len(point) != self.nvars:
            raise ValueError("point has wrong dimension")
        total = ZERO
        for m, c in self._terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = v * x ** e
            total = total + v
        return total

    def translate(self, offset: Sequence) -> "MultiPoly":
        """Return ``p(z + offset)``."""
        offset = [GaussianRational.coerce(x) for x in offset]
        if not any(offset):
            return self
        shifted = [
            MultiPoly.variable(self.nvars, i) + MultiPoly.constant(self.nvars, a)
            for i, a in enumerate(offset)
        ]
        return self.compose(shifted)

    def compose(self, subs: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute ``z_i -> subs[i]``; all ``subs`` share one variable count."""
        if len(subs) != self.nvars:
            raise ValueError("need one substitution per variable")
        nv = subs[0].nvars if subs else 0
        powers: list[dict] = [{0: MultiPoly.constant(nv, 1)} for _ in subs]

        def power(i, e):
            cache = powers[i]
            if e not in cache:
                cache[e] = power(i, e - 1) * subs[i]
            return cache[e]

        total = MultiPoly.zero(nv)
        for m, c in self._terms.items():
            t = MultiPoly.constant(nv, c)
            for i, e in enumerate(m):
                if e:
                    t = t * power(i, e)
            total = total + t
        return total

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction, GaussianRational)):
            c = GaussianRational.coerce(other)
            if not c:
                return not self._terms
            return self._terms == {(0,) * self.nvars: c}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # -- text and JSON ------------------------------------------------------

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"MultiPoly({self.nvars}, {format_poly(self)!r})"

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "terms": [
                {"exps": list(m), **c.to_json()} for m, c in self.sorted_terms(GREVLEX)
            ],
        }

    @classmethod
    def from_json(cls, obj) -> "MultiPoly":
        nvars = int(obj["nvars"])
        terms = []
        for t in obj.get("terms", []):
            terms.append((tuple(t["exps"]), GaussianRational.from_json(t)))
        return cls(nvars, terms)


# -- functional surface ------------------------------------------------------


def poly_add(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    p._check(q)
    return p + q


def poly_mul(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    p._check(q)
    return p * q


def differentiate(p: MultiPoly, var: int) -> MultiPoly:
    return p.differentiate(var)


def coefficient_of(p: MultiPoly, m: Sequence[int]) -> GaussianRational:
    return p.coefficient_of(m)


def taylor_coefficient(p: MultiPoly, m: Sequence[int]) -> GaussianRational:
    """``(1/m!) d^m p / dz^m`` at the origin, computed by differentiation.

    Equal to :func:`coefficient_of`; kept as the slow reference path.
    """
    d = p.derivative(m).constant_term()
    scale = 1
    for e in m:
        scale *= factorial(e)
    return d / scale


# -- printing ----------------------------------------------------------------


def _mono_str(m: Monomial) -> str:
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(f"z{i + 1}")
        elif e > 1:
            parts.append(f"z{i + 1}^{e}")
    return "*".join(parts)


def _coeff_str(q: Fraction, imag: bool, has_mono: bool) -> str:
    q = abs(q)
    if q.denominator == 1:
        num = str(q.numerator)
    else:
        num = f"({q.numerator}/{q.denominator})"
    if imag:
        return "i" if q == 1 else num + "i"
    if q == 1 and has_mono:
        return ""
    return num


def format_poly(p: MultiPoly) -> str:
    """Canonical text: terms in descending grevlex order, real part before imaginary."""
    pieces: list[tuple[bool, str]] = []
    for m, c in p.sorted_terms(GREVLEX):
        ms = _mono_str(m)
        for q, imag in ((c.re, False), (c.im, True)):
            if not q:
                continue
            cs = _coeff_str(q, imag, bool(ms))
            body = "*".join(s for s in (cs, ms) if s)
            pieces.append((q < 0, body))
    if not pieces:
        return "0"
    out = ("-" if pieces[0][0] else "") + pieces[0][1]
    for neg, body in pieces[1:]:
        out += (" - " if neg else " + ") + body
    return out


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>z\d+)|(?P<i>i)|(?P<op>[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    toks = []
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text: str, nvars: int):
        self.text = text
        self.nvars = nvars
        self.toks = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def take(self):
        t = self.toks[self.k]
        self.k += 1
        return t

    def expect(self, value):
        kind, v, pos = self.take()
        if v != value:
            raise ParseError(f"expected {value!r}, found {v or 'end of input'!r}", pos)

    def parse(self) -> MultiPoly:
        total = MultiPoly.zero(self.nvars)
        sign = 1
        kind, v, _ = self.peek()
        if v in "+-" and kind == "op":
            self.take()
            sign = -1 if v == "-" else 1
        while True:
            term = self.term()
            total = total + (term if sign > 0 else -term)
            kind, v, pos = self.peek()
            if kind == "end":
                return total
            if kind == "op" and v in "+-":
                self.take()
                sign = -1 if v == "-" else 1
                continue
            raise ParseError(f"unexpected {v!r}", pos)

    def term(self) -> MultiPoly:
        coeff = GaussianRational(1)
        exps = [0] * self.nvars
        while True:
            c, var = self.factor()
            if c is not None:
                coeff = coeff * c
            if var is not None:
                exps[var[0]] += var[1]
                if exps[var[0]] > MAX_EXPONENT:
                    raise ParseError("exponent overflow", var[2])
            kind, v, _ = self.peek()
            if kind == "op" and v == "*":
                self.take()
                continue
            return MultiPoly(self.nvars, {tuple(exps): coeff})

    def _maybe_i(self, q: Fraction) -> GaussianRational:
        kind, _, _ = self.peek()
        if kind == "i":
            self.take()
            return GaussianRational(0, q)
        return GaussianRational(q)

    def factor(self):
        kind, v, pos = self.take()
        if kind == "num":
            q = Fraction(int(v))
            nk, nv, _ = self.peek()
            if nk == "op" and nv == "/":
                self.take()
                dk, dv, dpos = self.take()
                if dk != "num":
                    raise ParseError("expected denominator", dpos)
                if int(dv) == 0:
                    raise ParseError("zero denominator", dpos)
                q = q / int(dv)
            return self._maybe_i(q), None
        if kind == "i":
            return GaussianRational(0, 1), None
        if kind == "op" and v == "(":
            neg = False
            sk, sv, _ = self.peek()
            if sk == "op" and sv in "+-":
                self.take()
                neg = sv == "-"
            nk, nv, npos = self.take()
            if nk != "num":
                raise ParseError("expected number after '('", npos)
            q = Fraction(int(nv))
            sk, sv, _ = self.peek()
            if sk == "op" and sv == "/":
                self.take()
                dk, dv, dpos = self.take()
                if dk != "num":
                    raise ParseError("expected denominator", dpos)
                if int(dv) == 0:
                    raise ParseError("zero denominator", dpos)
                q = q / int(dv)
            self.expect(")")
            return self._maybe_i(-q if neg else q), None
        if kind == "var":
            idx = int(v[1:])
            if not 1 <= idx <= self.nvars:
                raise ParseError(f"unknown variable {v!r} (nvars={self.nvars})", pos)
            e = 1
            nk, nv, _ = self.peek()
            if nk == "op" and nv == "^":
                self.take()
                ek, ev, epos = self.take()
                if ek != "num":
                    raise ParseError("expected exponent", epos)
                e = int(ev)
                if e > MAX_EXPONENT:
                    raise ParseError("exponent overflow", epos)
            return None, (idx - 1, e, pos)
        raise ParseError(f"unexpected {v or 'end of input'!r}", pos)


def parse_poly(text: str, nvars: int) -> MultiPoly:
    """Parse the polynomial text grammar, e.g. ``"(3/2)*z1*z2 + i*z3"``."""
    return _Parser(text, nvars).parse()


def as_poly(obj, nvars: int | None = None) -> MultiPoly:
    """Accept a :class:`MultiPoly`, polynomial text, or the JSON object form."""
    if isinstance(obj, MultiPoly):
        return obj
    if isinstance(obj, dict):
        return MultiPoly.from_json(obj)
    if isinstance(obj, (str, int)):
        if nvars is None:
            raise ValueError("nvars is required to parse polynomial text")
        return parse_poly(str(obj), nvars)
    raise TypeError(f"cannot interpret {obj!r} as a polynomial")


def infer_nvars(texts: Iterable[str]) -> int:
    """Largest variable index mentioned in any of ``texts`` (at least 1)."""
    best = 1
    for t in texts:
        for m in re.finditer(r"z(\d+)", t):
            best = max(best, int(m.group(1)))
    return best
