"""Polynomial matrices and conjugation-invariant polynomials evaluated on them."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import ParseError
from .gaussian import GaussianRational
from .polynomial import MultiPoly, as_poly

LEIBNIZ_MAX_DIM = 6


@dataclass(frozen=True)
class PolyMatrix:
    """Square matrix of :class:`MultiPoly` entries sharing one variable count."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        dim = len(rows)
        if dim == 0:
            raise ValueError("matrix must be at least 1x1")
        if any(len(r) != dim for r in rows):
            raise ValueError("matrix must be square")
        nv = {e.nvars for r in rows for e in r}
        if len(nv) != 1:
            raise ValueError("matrix entries disagree on nvars")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_entries(cls, entries, nvars: int | None = None) -> "PolyMatrix":
        """Build from nested lists of polynomials, polynomial text or scalars."""
        def conv(e):
            if isinstance(e, MultiPoly):
                return e
            if isinstance(e, str):
                return as_poly(e, nvars)
            return MultiPoly.constant(nvars, e)

        return cls(tuple(tuple(conv(e) for e in row) for row in entries))

    @classmethod
    def identity(cls, dim: int, nvars: int) -> "PolyMatrix":
        one, zero = MultiPoly.constant(nvars, 1), MultiPoly.zero(nvars)
        return cls(tuple(tuple(one if i == j else zero for j in range(dim)) for i in range(dim)))

    @classmethod
    def zeros(cls, dim: int, nvars: int) -> "PolyMatrix":
        zero = MultiPoly.zero(nvars)
        return cls(tuple((zero,) * dim for _ in range(dim)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def nvars(self) -> int:
        return self.rows[0][0].nvars

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        n = self.dim
        if other.dim != n:
            raise ValueError("dimension mismatch")
        zero = MultiPoly.zero(self.nvars)
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                s = zero
                for k in range(n):
                    a, b = self.rows[i][k], other.rows[k][j]
                    if a and b:
                        s = s + a * b
                row.append(s)
            out.append(tuple(row))
        return PolyMatrix(tuple(out))

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        )

    def scale(self, c) -> "PolyMatrix":
        return PolyMatrix(tuple(tuple(e.scale(c) for e in r) for r in self.rows))

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix(tuple(tuple(fn(e) for e in r) for r in self.rows))

    def trace(self) -> MultiPoly:
        t = MultiPoly.zero(self.nvars)
        for i in range(self.dim):
            t = t + self.rows[i][i]
        return t

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.rows) + "]"

    def to_json(self) -> list:
        return [[e.to_json() for e in r] for r in self.rows]


# -- determinants --------------------------------------------------------------


def det_leibniz(M: PolyMatrix) -> MultiPoly:
    """Laplace expansion along rows with minors memoized by column set."""
    n = M.dim
    rows = M.rows
    memo: dict = {}

    def minor(r: int, cols: tuple) -> MultiPoly:
        # determinant of rows r..n-1 restricted to `cols`
        if r == n:
            return MultiPoly.constant(M.nvars, 1)
        key = (r, cols)
        if key in memo:
            return memo[key]
        total = MultiPoly.zero(M.nvars)
        for pos, c in enumerate(cols):
            a = rows[r][c]
            if not a:
                continue
            sub = minor(r + 1, cols[:pos] + cols[pos + 1:])
            if not sub:
                continue
            term = a * sub
            total = total - term if pos & 1 else total + term
        memo[key] = total
        return total

    return minor(0, tuple(range(n)))


def det_bareiss(M: PolyMatrix) -> MultiPoly:
    """Fraction-free Gaussian elimination; every division is exact."""
    n = M.dim
    a = [list(r) for r in M.rows]
    sign = 1
    prev = MultiPoly.constant(M.nvars, 1)
    for k in range(n - 1):
        if not a[k][k]:
            swap = next((r for r in range(k + 1, n) if a[r][k]), None)
            if swap is None:
                return MultiPoly.zero(M.nvars)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        p = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = p * a[i][j] - a[i][k] * a[k][j]
                a[i][j] = num.exact_divide(prev) if prev != 1 else num
            a[i][k] = MultiPoly.zero(M.nvars)
        prev = p
    d = a[n - 1][n - 1]
    return d if sign > 0 else -d


def det(M: PolyMatrix) -> MultiPoly:
    if M.dim <= LEIBNIZ_MAX_DIM:
        return det_leibniz(M)
    return det_bareiss(M)


def trace_power(M: PolyMatrix, j: int) -> MultiPoly:
    """``Tr(M^j)`` for ``j >= 1``."""
    if j < 1:
        raise ValueError("trace power needs j >= 1")
    P = M
    for _ in range(j - 1):
        P = P @ M
    return P.trace()


def trace_powers(M: PolyMatrix, jmax: int) -> list:
    """``[Tr(M^1), ..., Tr(M^jmax)]``."""
    out = []
    P = M
    for j in range(1, jmax + 1):
        if j > 1:
            P = P @ M
        out.append(P.trace())
    return out


def char_poly_coeffs(M: PolyMatrix) -> list:
    """Coefficients ``[c_1, ..., c_n]`` of ``det(tI + M) = sum c_j t^(n-j)``.

    Faddeev-LeVerrier on ``A = -M``; the only divisions are by the integers
    ``1..n``. ``c_j`` is the j-th elementary symmetric function of the
    eigenvalues of ``M`` and ``c_n == det(M)``.
    """
    n = M.dim
    A = M.scale(-1)
    ident = PolyMatrix.identity(n, M.nvars)
    N = ident
    coeffs = []
    for k in range(1, n + 1):
        AN = A @ N
        a_k = AN.trace().scale(Fraction(-1, k))
        coeffs.append(a_k)
        if k < n:
            N = AN + ident.map(lambda e: e * a_k)
    return coeffs


# -- invariant polynomials -----------------------------------------------------

TRACE = "trace"
CHERN = "chern"


@dataclass(frozen=True)
class InvariantPolySpec:
    """Weighted-homogeneous polynomial in trace-power or Chern generators.

    ``terms`` is a tuple of ``(gens, coeff)`` where ``gens`` is a tuple of
    ``(j, power)`` pairs and ``coeff`` a :class:`Fraction`. Generator ``g_j``
    means ``Tr(A^j)`` in the trace basis and ``c_j(A)`` in the Chern basis;
    it carries weight ``j``.
    """

    basis: str
    terms: tuple
    degree: int
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if self.basis not in (TRACE, CHERN):
            raise ValueError(f"unknown generator basis {self.basis!r}")
        norm = []
        for gens, coeff in self.terms:
            merged: dict = {}
            for j, p in gens:
                if j < 1 or p < 0:
                    raise ValueError(f"bad generator factor ({j}, {p})")
                if p:
                    merged[j] = merged.get(j, 0) + p
            gens = tuple(sorted(merged.items()))
            w = sum(j * p for j, p in gens)
            if w != self.degree:
                raise ValueError(
                    f"term {gens} has weighted degree {w}, expected {self.degree}"
                )
            norm.append((gens, Fraction(coeff)))
        object.__setattr__(self, "terms", tuple(norm))

    @classmethod
    def monomial(cls, basis: str, gens, coeff=1, label: str = "") -> "InvariantPolySpec":
        gens = tuple(gens)
        return cls(basis, ((gens, Fraction(coeff)),), sum(j * p for j, p in gens), label)

    def max_generator(self) -> int:
        return max((j for gens, _ in self.terms for j, _ in gens), default=0)

    def to_json(self) -> dict:
        return {
            "basis": self.basis,
            "degree": self.degree,
            "terms": [
                {"gens": [list(g) for g in gens], "coeff": [c.numerator, c.denominator]}
                for gens, c in self.terms
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "InvariantPolySpec":
        basis = {"trace": TRACE, "trace_powers": TRACE, "chern": CHERN,
                 "chern_generators": CHERN}[obj["basis"]]
        terms = []
        for t in obj["terms"]:
            c = t.get("coeff", [1, 1])
            c = Fraction(*c) if isinstance(c, list) else Fraction(c)
            terms.append((tuple(tuple(g) for g in t["gens"]), c))
        return cls(basis, tuple(terms), int(obj["degree"]), obj.get("label", ""))

    def __str__(self) -> str:
        return self.label or repr(self.to_json())


def det_spec(n: int) -> InvariantPolySpec:
    return InvariantPolySpec.monomial(CHERN, [(n, 1)], label="det")


def trace_power_spec(m: int) -> InvariantPolySpec:
    """``[Tr A]^m``."""
    return InvariantPolySpec.monomial(TRACE, [(1, m)], label=f"tr^{m}")


def trace_of_power_spec(m: int) -> InvariantPolySpec:
    """``Tr(A^m)``."""
    return InvariantPolySpec.monomial(TRACE, [(m, 1)], label=f"tr(A^{m})")


def trace_det_spec(n: int) -> InvariantPolySpec:
    return InvariantPolySpec.monomial(CHERN, [(1, 1), (n, 1)], label="tr*det")


_FACTOR = re.compile(
    r"\s*(?:(?P<trp>tr\(A\^(?P<trj>\d+)\))|(?P<tr>\[?tr\]?)|(?P<det>det)|c(?P<c>\d+))"
    r"(?:\s*\^\s*(?P<pow>\d+))?\s*"
)


def parse_phi(text: str, n: int) -> InvariantPolySpec:
    """Parse a named invariant polynomial for ``n x n`` matrices.

    Accepts products such as ``det``, ``tr^3``, ``tr(A^3)``, ``tr*det``,
    ``c1^2*c2`` or the JSON object form. ``Tr(A^j)`` factors cannot be mixed
    with Chern factors; a bare ``tr`` is ``c1`` in either basis.
    """
    text = text.strip()
    if text.startswith("{"):
        return InvariantPolySpec.from_json(json.loads(text))
    factors = []
    pos = 0
    for chunk in text.split("*"):
        m = _FACTOR.fullmatch(chunk)
        if not m:
            raise ParseError(f"cannot parse invariant factor {chunk.strip()!r}", pos)
        p = int(m.group("pow") or 1)
        if m.group("trp"):
            factors.append(("trp", int(m.group("trj")), p))
        elif m.group("tr"):
            factors.append(("tr", 1, p))
        elif m.group("det"):
            factors.append(("c", n, p))
        else:
            j = int(m.group("c"))
            if not 1 <= j <= n:
                raise ParseError(f"Chern generator c{j} out of range for n={n}", pos)
            factors.append(("c", j, p))
        pos += len(chunk) + 1
    kinds = {f[0] for f in factors}
    if "trp" in kinds and "c" in kinds:
        raise ParseError(f"{text!r} mixes Tr(A^j) with Chern generators")
    basis = CHERN if "c" in kinds else TRACE
    return InvariantPolySpec.monomial(basis, [(j, p) for _, j, p in factors], label=text)


def eval_invariant(spec: InvariantPolySpec, M: PolyMatrix) -> MultiPoly:
    """Substitute the generators of ``spec`` evaluated on ``M`` and expand exactly."""
    jmax = spec.max_generator()
    if spec.basis == TRACE:
        gens = trace_powers(M, jmax) if jmax else []
    else:
        if jmax > M.dim:
            # c_j vanishes identically beyond the matrix size
            gens = char_poly_coeffs(M) + [MultiPoly.zero(M.nvars)] * (jmax - M.dim)
        else:
            gens = char_poly_coeffs(M)
    total = MultiPoly.zero(M.nvars)
    power_cache: dict = {}
    for factors, coeff in spec.terms:
        t = MultiPoly.constant(M.nvars, coeff)
        for j, p in factors:
            key = (j, p)
            if key not in power_cache:
                power_cache[key] = gens[j - 1] ** p
            t = t * power_cache[key]
        total = total + t
    return total


def constant_matrix(entries: Sequence[Sequence], nvars: int = 0) -> PolyMatrix:
    return PolyMatrix.from_entries(entries, nvars)


def inverse_constant(M: PolyMatrix) -> PolyMatrix:
    """Exact inverse of a matrix with constant entries, by Gauss-Jordan elimination."""
    if any(not e.is_constant() for row in M.rows for e in row):
        raise ValueError("inverse_constant needs constant entries")
    n, nv = M.dim, M.nvars
    a = [[e.constant_term() for e in row] + [GaussianRational(int(i == j)) for j in range(n)]
         for i, row in enumerate(M.rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col].inverse()
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return PolyMatrix.from_entries([row[n:] for row in a], nv)
