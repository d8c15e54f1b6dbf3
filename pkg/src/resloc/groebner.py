"""Gröbner bases with cofactor tracking and ideal-membership certificates.

Every basis element carries its expression over the original generators, so
a reduction to zero yields an explicit identity ``p = sum_j q_j f_j``. That
is what a certificate ``z_i^(alpha_i+1) = sum_j B_ij f_j`` needs.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from .errors import InvalidCertificate, NotIsolatedOrCapTooLow, ResourceLimitError
from .matrix import PolyMatrix
from .polynomial import (
    GREVLEX,
    MonomialOrder,
    MultiPoly,
    divides,
    mono_div,
    mono_lcm,
)

log = logging.getLogger(__name__)

DEFAULT_MAX_EXPONENT = 64
DEFAULT_MAX_BASIS = 400
DEFAULT_MAX_DEGREE = 256


@dataclass(frozen=True)
class TrackedBasis:
    """Gröbner basis ``basis`` of ``<generators>`` with ``basis[k] = sum_j cofactors[k][j] * generators[j]``."""

    generators: tuple
    basis: tuple
    cofactors: tuple
    order: MonomialOrder = GREVLEX
    leading: tuple = field(default=(), compare=False)

    @property
    def nvars(self) -> int:
        return self.generators[0].nvars


@dataclass(frozen=True)
class MembershipCertificate:
    """Exponents ``alpha`` and matrix ``B`` with ``z_i^(alpha_i+1) = sum_j B[i][j] f_j``."""

    alpha: tuple
    B: PolyMatrix

    def to_json(self) -> dict:
        return {"alpha": list(self.alpha), "B": self.B.to_json()}

    @classmethod
    def from_json(cls, obj: dict, nvars: int | None = None) -> "MembershipCertificate":
        from .polynomial import as_poly

        n = nvars if nvars is not None else len(obj["alpha"])
        rows = tuple(tuple(as_poly(e, n) for e in row) for row in obj["B"])
        return cls(tuple(int(a) for a in obj["alpha"]), PolyMatrix(rows))


# -- reduction -----------------------------------------------------------------


def _zero_row(nv: int, m: int) -> list:
    z = MultiPoly.zero(nv)
    return [z] * m


def _combine(rows: Sequence[Sequence[MultiPoly]], weights: dict, nv: int, m: int) -> list:
    """``sum_k weights[k] * rows[k]`` where ``weights[k]`` maps monomial -> coefficient."""
    out = _zero_row(nv, m)
    for k, qterms in weights.items():
        if not qterms:
            continue
        q = MultiPoly._raw(nv, {t: c for t, c in qterms.items() if c})
        if not q:
            continue
        for j, cof in enumerate(rows[k]):
            if cof:
                out[j] = out[j] + q * cof
    return out


def _reduce(p: MultiPoly, basis: Sequence[MultiPoly], leading: Sequence, order: MonomialOrder,
            skip: int | None = None):
    """Full division of ``p`` by monic ``basis``.

    Returns ``(remainder, quotients)`` with ``quotients`` mapping basis index
    to a ``{monomial: coefficient}`` dict and ``p = sum q_k basis[k] + remainder``.
    """
    rem = dict(p._terms)
    out: dict = {}
    quot: dict = {}
    key = order.key
    while rem:
        m = max(rem, key=key)
        c = rem[m]
        for k, lm in enumerate(leading):
            if k == skip or not divides(lm, m):
                continue
            t = mono_div(m, lm)
            qk = quot.setdefault(k, {})
            qk[t] = qk.get(t, 0) + c
            for bm, bc in basis[k]._terms.items():
                mm = tuple(x + y for x, y in zip(bm, t))
                v = rem.get(mm)
                nv = -(bc * c) if v is None else v - bc * c
                if nv:
                    rem[mm] = nv
                else:
                    rem.pop(mm, None)
            break
        else:
            out[m] = c
            del rem[m]
    return MultiPoly._raw(p.nvars, out), quot


def _monic(p: MultiPoly, cof: list, order: MonomialOrder):
    lm, lc = p.leading_term(order)
    if lc == 1:
        return p, cof, lm
    inv = lc.inverse()
    return p.scale(inv), [c.scale(inv) for c in cof], lm


# -- Buchberger ----------------------------------------------------------------


def buchberger(f: Sequence[MultiPoly], order: MonomialOrder = GREVLEX, *,
               max_basis: int = DEFAULT_MAX_BASIS,
               max_degree: int = DEFAULT_MAX_DEGREE) -> TrackedBasis:
    """Reduced Gröbner basis of ``<f>`` with cofactors over ``f``.

    Pairs are pruned with the coprime-leading-monomial (product) criterion and
    the chain criterion. Raises :class:`ResourceLimitError` when the basis
    grows past ``max_basis`` elements or a leading monomial past ``max_degree``.
    """
    f = tuple(f)
    if not f:
        raise ValueError("need at least one generator")
    nv = f[0].nvars
    if any(g.nvars != nv for g in f):
        raise ValueError("generators disagree on nvars")
    if any(not g for g in f):
        raise ValueError("generators must be nonzero")
    m = len(f)
    one = MultiPoly.constant(nv, 1)

    G: list = []
    C: list = []
    L: list = []
    for j, g in enumerate(f):
        cof = _zero_row(nv, m)
        cof[j] = one
        g, cof, lm = _monic(g, cof, order)
        G.append(g)
        C.append(cof)
        L.append(lm)

    pairs = {(i, j) for j in range(len(G)) for i in range(j)}

    def pending(a, b):
        return (min(a, b), max(a, b)) in pairs

    while pairs:
        # sugar-free normal strategy: smallest lcm first
        i, j = min(pairs, key=lambda ij: order.key(mono_lcm(L[ij[0]], L[ij[1]])))
        pairs.discard((i, j))
        lcm = mono_lcm(L[i], L[j])
        if all(a == 0 or b == 0 for a, b in zip(L[i], L[j])):
            continue
        if any(
            k != i and k != j and divides(L[k], lcm) and not pending(i, k) and not pending(j, k)
            for k in range(len(G))
        ):
            continue
        ti, tj = mono_div(lcm, L[i]), mono_div(lcm, L[j])
        s = G[i].mul_term(ti, 1) - G[j].mul_term(tj, 1)
        scof = [a.mul_term(ti, 1) - b.mul_term(tj, 1) for a, b in zip(C[i], C[j])]
        r, quot = _reduce(s, G, L, order)
        if not r:
            continue
        sub = _combine(C, quot, nv, m)
        rcof = [a - b for a, b in zip(scof, sub)]
        r, rcof, lm = _monic(r, rcof, order)
        if sum(lm) > max_degree:
            raise ResourceLimitError(f"leading monomial degree {sum(lm)} exceeds cap {max_degree}")
        k = len(G)
        G.append(r)
        C.append(rcof)
        L.append(lm)
        if len(G) > max_basis:
            raise ResourceLimitError(f"Gröbner basis exceeded {max_basis} elements")
        pairs.update((a, k) for a in range(k))

    return _interreduce(f, G, C, L, order)


def _interreduce(f, G, C, L, order) -> TrackedBasis:
    nv, m = f[0].nvars, len(f)
    keep = [
        k for k in range(len(G))
        if not any(
            divides(L[o], L[k]) and (L[o] != L[k] or o < k)
            for o in range(len(G)) if o != k
        )
    ]
    G = [G[k] for k in keep]
    C = [C[k] for k in keep]
    L = [L[k] for k in keep]
    for k in range(len(G)):
        # leading terms stay fixed; only tails are reduced
        r, quot = _reduce(G[k], G, L, order, skip=k)
        if quot:
            sub = _combine(C, quot, nv, m)
            G[k] = r
            C[k] = [a - b for a, b in zip(C[k], sub)]
    idx = sorted(range(len(G)), key=lambda k: order.key(L[k]))
    return TrackedBasis(
        generators=tuple(f),
        basis=tuple(G[k] for k in idx),
        cofactors=tuple(tuple(C[k]) for k in idx),
        order=order,
        leading=tuple(L[k] for k in idx),
    )


def _leading(tb: TrackedBasis):
    return tb.leading or tuple(g.leading_term(tb.order)[0] for g in tb.basis)


def normal_form(p: MultiPoly, tb: TrackedBasis):
    """Reduce ``p`` by ``tb``.

    Returns ``(remainder, cofactors)`` with ``p = sum_j cofactors[j] * f_j + remainder``
    where ``f`` are the original generators. ``remainder == 0`` iff ``p`` lies in the ideal.
    """
    if p.nvars != tb.nvars:
        raise ValueError("variable-count mismatch")
    r, quot = _reduce(p, tb.basis, _leading(tb), tb.order)
    cof = _combine(tb.cofactors, quot, tb.nvars, len(tb.generators))
    return r, tuple(cof)


def s_polynomial(g: MultiPoly, h: MultiPoly, order: MonomialOrder = GREVLEX) -> MultiPoly:
    lg, cg = g.leading_term(order)
    lh, ch = h.leading_term(order)
    lcm = mono_lcm(lg, lh)
    return g.mul_term(mono_div(lcm, lg), cg.inverse()) - h.mul_term(mono_div(lcm, lh), ch.inverse())


def is_groebner(tb: TrackedBasis) -> bool:
    """Every S-polynomial of the basis reduces to zero."""
    L = _leading(tb)
    for j in range(len(tb.basis)):
        for i in range(j):
            s = s_polynomial(tb.basis[i], tb.basis[j], tb.order)
            r, _ = _reduce(s, tb.basis, L, tb.order)
            if r:
                return False
    return True


def cofactors_consistent(tb: TrackedBasis) -> bool:
    for g, row in zip(tb.basis, tb.cofactors):
        total = MultiPoly.zero(tb.nvars)
        for q, f in zip(row, tb.generators):
            total = total + q * f
        if total != g:
            return False
    return True


# -- certificates --------------------------------------------------------------


def find_certificate(f: Sequence[MultiPoly], max_exponent: int = DEFAULT_MAX_EXPONENT,
                     order: MonomialOrder = GREVLEX, tb: TrackedBasis | None = None
                     ) -> MembershipCertificate:
    """Smallest per-variable ``alpha`` with ``z_i^(alpha_i+1)`` in ``<f>``, plus ``B``.

    Powers are reduced incrementally: ``NF(z_i^m) = NF(z_i * NF(z_i^(m-1)))``.
    Raises :class:`NotIsolatedOrCapTooLow` if some power up to ``max_exponent``
    never reduces to zero.
    """
    f = tuple(f)
    n = len(f)
    if max_exponent < 1:
        raise ValueError("max_exponent must be >= 1")
    nv = f[0].nvars
    if nv != n:
        raise ValueError(f"need as many components ({n}) as variables ({nv})")
    if tb is None:
        tb = buchberger(f, order)
    if any(g.is_constant() for g in tb.basis):
        log.warning("ideal is the unit ideal; the origin is not a zero of f")
    alpha = []
    rows = []
    for i in range(n):
        zi = MultiPoly.variable(nv, i)
        acc = _zero_row(nv, n)
        cur = zi
        for m in range(1, max_exponent + 1):
            r, cof = normal_form(cur, tb)
            acc = [a + c for a, c in zip(acc, cof)]
            if not r:
                alpha.append(m - 1)
                rows.append(tuple(acc))
                break
            # z_i^(m+1) = z_i * (sum acc_j f_j) + z_i * r
            acc = [a * zi for a in acc]
            cur = r * zi
        else:
            raise NotIsolatedOrCapTooLow(
                f"z{i + 1}^m is not in the ideal for any m <= {max_exponent}"
            )
    cert = MembershipCertificate(tuple(alpha), PolyMatrix(tuple(rows)))
    if not verify_certificate(cert, f):
        raise InvalidCertificate("synthesized certificate failed verification")
    return cert


def verify_certificate(cert: MembershipCertificate, f: Sequence[MultiPoly]) -> bool:
    """Exact check of ``z_i^(alpha_i+1) == sum_j B_ij f_j`` for every ``i``."""
    f = tuple(f)
    n = len(f)
    if len(cert.alpha) != n or cert.B.dim != n or cert.B.nvars != f[0].nvars:
        return False
    nv = f[0].nvars
    for i in range(n):
        lhs = MultiPoly.variable(nv, i) ** (cert.alpha[i] + 1)
        rhs = MultiPoly.zero(nv)
        for j in range(n):
            b = cert.B[i, j]
            if b:
                rhs = rhs + b * f[j]
        if lhs != rhs:
            return False
    return True


def explicit_cpn_certificate(n: int) -> MembershipCertificate:
    """Hand-built certificate for the maximally degenerate field on CP^n.

    With ``k`` such that ``2^k < n+1 <= 2^(k+1)`` the exponents are
    ``alpha = (n, 2^k - 1, ..., 2^k - 1, 1)``. Rows come from

    * ``z1^(n+1) = -sum_j z1^(n-j) X_j``,
    * ``z_(j+1)^(2^k) = z1^(2^k) z_j^(2^k) + X_j prod_i (z_(j+1)^(2^i) + z1^(2^i) z_j^(2^i))``
      (factoring a difference of ``2^k``-th powers), applied recursively,
    * ``z_n^2 = z_n X_(n-1) - z_(n-1) X_n``.
    """
    if n < 2:
        raise ValueError("explicit certificate needs n >= 2")
    nv = n
    z = [MultiPoly.variable(nv, i) for i in range(nv)]
    zero = MultiPoly.zero(nv)
    k = n.bit_length() - 1
    K = 2 ** k

    row1 = [-(z[0] ** (n - 1 - j)) for j in range(n)]
    rows = [row1]
    if n > 2:
        # coefficient vector of z1^(2K) = z1^(2K-n-1) * z1^(n+1)
        shift = z[0] ** (2 * K - n - 1)
        prev = [shift * c for c in row1]  # expresses z1^K * z1^K
        for j in range(1, n - 1):
            # X_j (0-based j-1) times the factored difference of powers
            P = MultiPoly.constant(nv, 1)
            for i in range(k):
                e = 2 ** i
                P = P * (z[j] ** e + (z[0] ** e) * (z[j - 1] ** e))
            vec = list(prev)
            vec[j - 1] = vec[j - 1] + P
            rows.append(vec)
            prev = [(z[0] ** K) * c for c in vec]
    last = [zero] * n
    last[n - 2] = z[n - 1]
    last[n - 1] = -z[n - 2]
    rows.append(last)
    alpha = (n,) + (K - 1,) * (n - 2) + (1,)
    return MembershipCertificate(alpha, PolyMatrix(tuple(tuple(r) for r in rows)))
