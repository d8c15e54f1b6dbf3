"""Holomorphic vector fields on CP^n and localization of Futaki-Morita invariants.

A traceless ``(n+1) x (n+1)`` matrix ``A`` induces ``X = sum A_ij Z_j d/dZ_i``.
In the affine chart ``Z_c = 1`` it becomes a polynomial field of degree at
most two; each isolated zero contributes a Grothendieck residue of
``phi(DX) dz / (X_1 ... X_n)`` and

    binom(n+k, n) f_phi(X) = (-1)^k * sum of local residues

for ``phi`` of degree ``n + k``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Sequence

from .errors import NotDiagonalDistinct
from .gaussian import GaussianRational, ZERO
from .groebner import DEFAULT_MAX_EXPONENT, MembershipCertificate
from .matrix import (
    CHERN,
    InvariantPolySpec,
    PolyMatrix,
    det,
    eval_invariant,
    trace_of_power_spec,
    trace_power_spec,
)
from .polynomial import MultiPoly
from .residue import ResidueProblem, ResidueResult, jacobian, solve_residue

log = logging.getLogger(__name__)

NONDEGENERATE = "nondegenerate"
DEGENERATE = "degenerate"


@dataclass(frozen=True)
class ProjectiveVectorField:
    """Field on CP^n induced by a traceless matrix ``A`` with exact entries."""

    A: tuple

    def __post_init__(self):
        A = tuple(tuple(GaussianRational.coerce(x) for x in row) for row in self.A)
        size = len(A)
        if size < 2 or any(len(r) != size for r in A):
            raise ValueError("A must be square of size n+1 >= 2")
        tr = sum((A[i][i] for i in range(size)), ZERO)
        if tr:
            raise ValueError(f"A must be traceless (trace is {tr})")
        object.__setattr__(self, "A", A)

    @classmethod
    def traceless_part(cls, A) -> "ProjectiveVectorField":
        """Drop the scalar part of ``A``; it induces the zero field on CP^n."""
        A = [[GaussianRational.coerce(x) for x in row] for row in A]
        size = len(A)
        shift = sum((A[i][i] for i in range(size)), ZERO) / size
        return cls(tuple(
            tuple(x - shift if i == j else x for j, x in enumerate(row)) for i, row in enumerate(A)
        ))

    @classmethod
    def diagonal(cls, entries: Sequence) -> "ProjectiveVectorField":
        size = len(entries)
        return cls(tuple(
            tuple(entries[i] if i == j else 0 for j in range(size)) for i in range(size)
        ))

    @property
    def n(self) -> int:
        return len(self.A) - 1

    def is_diagonal(self) -> bool:
        return all(not x for i, row in enumerate(self.A) for j, x in enumerate(row) if i != j)

    def scaled(self, c) -> "ProjectiveVectorField":
        c = GaussianRational.coerce(c)
        return ProjectiveVectorField(tuple(tuple(x * c for x in row) for row in self.A))


@dataclass(frozen=True)
class ZeroPoint:
    chart: int
    coords: tuple
    kind: str = NONDEGENERATE

    def homogeneous(self) -> tuple:
        pt = list(self.coords)
        pt.insert(self.chart, GaussianRational(1))
        return tuple(pt)


@dataclass(frozen=True)
class ChartField:
    """Polynomial components ``X_1..X_n`` of a field in the affine chart ``Z_chart = 1``.

    ``zeros`` holds declared zero coordinates in this chart.
    """

    chart: int
    components: tuple
    zeros: tuple = ()

    def __post_init__(self):
        comps = tuple(self.components)
        n = len(comps)
        if n == 0 or any(c.nvars != n for c in comps):
            raise ValueError("a chart field on CP^n needs n components in n variables")
        zeros = tuple(tuple(GaussianRational.coerce(x) for x in z) for z in self.zeros)
        if any(len(z) != n for z in zeros):
            raise ValueError("zero coordinates have the wrong dimension")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "zeros", zeros)

    @property
    def n(self) -> int:
        return len(self.components)

    def with_zeros(self, zeros: Iterable) -> "ChartField":
        return ChartField(self.chart, self.components, tuple(zeros))


@dataclass(frozen=True)
class LocalContribution:
    point: ZeroPoint
    result: ResidueResult

    @property
    def value(self) -> GaussianRational:
        return self.result.value


@dataclass(frozen=True)
class FMResult:
    """``f_phi`` together with the undivided residue sum and per-zero breakdown."""

    f_phi: GaussianRational
    residue_sum: GaussianRational
    n: int
    k: int
    phi: InvariantPolySpec
    per_zero: tuple = field(default=())


# -- chart fields ----------------------------------------------------------------


def induced_chart_field(V: ProjectiveVectorField, chart: int) -> ChartField:
    """Affine components ``X_k = (AZ)_{i_k} - z_k (AZ)_chart`` with ``Z_chart = 1``."""
    n = V.n
    if not 0 <= chart <= n:
        raise ValueError(f"chart index {chart} out of range 0..{n}")
    idx = [i for i in range(n + 1) if i != chart]
    # homogeneous coordinates as affine polynomials
    Z = []
    for i in range(n + 1):
        if i == chart:
            Z.append(MultiPoly.constant(n, 1))
        else:
            Z.append(MultiPoly.variable(n, idx.index(i)))
    AZ = []
    for i in range(n + 1):
        s = MultiPoly.zero(n)
        for j in range(n + 1):
            if V.A[i][j]:
                s = s + Z[j].scale(V.A[i][j])
        AZ.append(s)
    comps = tuple(AZ[i] - Z[i] * AZ[chart] for i in idx)
    return ChartField(chart, comps)


def jordan_matrix(n: int) -> tuple:
    """Nilpotent shift: ones directly above the diagonal, size ``n+1``."""
    return tuple(tuple(1 if j == i + 1 else 0 for j in range(n + 1)) for i in range(n + 1))


def max_degenerate_field(n: int) -> ChartField:
    """Chart-0 field ``sum_{j<n} (z_{j+1} - z1 z_j) d/dz_j - z1 z_n d/dz_n``.

    Its only zero on CP^n is ``[1:0:...:0]``, where ``DX`` is nilpotent.
    """
    if n < 2:
        raise ValueError("the maximally degenerate field is defined for n >= 2")
    F = induced_chart_field(ProjectiveVectorField(jordan_matrix(n)), 0)
    return F.with_zeros([(0,) * n])


def linearization(F: ChartField) -> PolyMatrix:
    return jacobian(F.components)


def _point_kind(F: ChartField, coords: Sequence) -> str:
    J = linearization(F)
    vals = J.map(lambda e: MultiPoly.constant(e.nvars, e.evaluate(coords)))
    return NONDEGENERATE if det(vals).constant_term() else DEGENERATE


def fixed_points_diagonalizable(V: ProjectiveVectorField) -> list:
    """The ``n+1`` coordinate points, each at the origin of its own chart."""
    diag = [V.A[i][i] for i in range(V.n + 1)]
    if not V.is_diagonal() or len(set(diag)) != len(diag):
        raise NotDiagonalDistinct("A must be diagonal with pairwise distinct entries")
    return [ZeroPoint(c, (ZERO,) * V.n, NONDEGENERATE) for c in range(V.n + 1)]


def zeros_with_charts(field_) -> list:
    """List of ``(ChartField, ZeroPoint)`` pairs covering every zero exactly once."""
    if isinstance(field_, ProjectiveVectorField):
        V = field_
        if V.A == tuple(tuple(GaussianRational(x) for x in r) for r in jordan_matrix(V.n)):
            F = induced_chart_field(V, 0)
            return [(F, ZeroPoint(0, (ZERO,) * V.n, DEGENERATE))]
        pts = fixed_points_diagonalizable(V)
        return [(induced_chart_field(V, p.chart), p) for p in pts]
    if isinstance(field_, ChartField):
        field_ = [field_]
    charts = {}
    for F in field_:
        if F.chart in charts:
            raise ValueError(f"chart {F.chart} declared twice")
        charts[F.chart] = F
    ns = {F.n for F in charts.values()}
    if len(ns) != 1:
        raise ValueError("chart fields disagree on n")
    seen: list = []
    out = []
    for c in sorted(charts):
        F = charts[c]
        for z in F.zeros:
            for comp in F.components:
                if comp.evaluate(z):
                    raise ValueError(f"declared zero {tuple(map(str, z))} is not a zero in chart {c}")
            hom = ZeroPoint(c, z).homogeneous()
            key = _projective_key(hom)
            if key in seen:
                continue
            seen.append(key)
            # lowest-index declared chart containing the point
            home = min(j for j in charts if hom[j])
            G = charts[home]
            coords = tuple(x / hom[home] for i, x in enumerate(hom) if i != home)
            out.append((G, ZeroPoint(home, coords, _point_kind(G, coords))))
    return out


def _projective_key(hom: Sequence[GaussianRational]) -> tuple:
    lead = next(x for x in hom if x)
    return tuple(x / lead for x in hom)


# -- localization ------------------------------------------------------------------


def local_residue(F: ChartField, p: ZeroPoint, phi: InvariantPolySpec,
                  cert: MembershipCertificate | None = None,
                  max_exponent: int = DEFAULT_MAX_EXPONENT) -> ResidueResult:
    """Residue of ``phi(DX) dz / (X_1...X_n)`` at ``p`` after moving ``p`` to the origin."""
    comps = tuple(c.translate(p.coords) for c in F.components)
    h = eval_invariant(phi, jacobian(comps))
    return solve_residue(ResidueProblem(h, comps), cert=cert, max_exponent=max_exponent)


def local_contribution(F: ChartField, p: ZeroPoint, phi: InvariantPolySpec,
                       max_exponent: int = DEFAULT_MAX_EXPONENT) -> GaussianRational:
    return local_residue(F, p, phi, max_exponent=max_exponent).value


def field_dimension(field_) -> int:
    if isinstance(field_, ProjectiveVectorField):
        return field_.n
    if isinstance(field_, ChartField):
        return field_.n
    return next(iter(field_)).n


def futaki_morita_detail(field_, phi: InvariantPolySpec,
                         max_exponent: int = DEFAULT_MAX_EXPONENT) -> FMResult:
    n = field_dimension(field_)
    k = phi.degree - n
    if k < 0:
        raise ValueError(
            f"invariant polynomial of degree {phi.degree} < n = {n}; the integral is not localized here"
        )
    contributions = []
    total = ZERO
    for F, p in zeros_with_charts(field_):
        r = local_residue(F, p, phi, max_exponent=max_exponent)
        contributions.append(LocalContribution(p, r))
        total = total + r.value
    f_phi = total * (-1) ** k / comb(n + k, n)
    return FMResult(f_phi, total, n, k, phi, tuple(contributions))


def futaki_morita(field_, phi: InvariantPolySpec,
                  max_exponent: int = DEFAULT_MAX_EXPONENT) -> GaussianRational:
    """``f_phi(X)`` summed over all zeros of the field."""
    return futaki_morita_detail(field_, phi, max_exponent).f_phi


def closed_form_max_degenerate(n: int, phi: InvariantPolySpec) -> GaussianRational:
    """Closed form for the maximally degenerate field, evaluated by differentiation.

    ``binom(n+k,n) f_phi = (-1)^(n+k)/n! * [d^n phi(DX)/dz1^n
    + sum_{j=2..n} d^(n+1)(phi(DX) z1^j)/dz1^n dz_j]`` at ``z = 0``.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    k = phi.degree - n
    if k < 0:
        raise ValueError("invariant polynomial degree must be at least n")
    h = eval_invariant(phi, linearization(max_degenerate_field(n)))
    z1 = MultiPoly.variable(n, 0)
    orders = [n] + [0] * (n - 1)
    total = h.derivative(orders).constant_term()
    for j in range(2, n + 1):
        o = list(orders)
        o[j - 1] = 1
        total = total + (h * z1 ** j).derivative(o).constant_term()
    value = total * Fraction((-1) ** (n + k), factorial(n))
    return value / comb(n + k, n)


def futaki(field_, max_exponent: int = DEFAULT_MAX_EXPONENT) -> tuple:
    """``f_phi`` for ``phi = Tr(A^(n+1))`` and for ``phi = [Tr A]^(n+1)``, in that order."""
    n = field_dimension(field_)
    a = futaki_morita(field_, trace_of_power_spec(n + 1), max_exponent)
    b = futaki_morita(field_, trace_power_spec(n + 1), max_exponent)
    if a != b:
        log.warning("Futaki variants disagree: Tr(A^%d) -> %s, [Tr A]^%d -> %s", n + 1, a, n + 1, b)
    return a, b


def partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def chern_spec(parts: Sequence[int]) -> InvariantPolySpec:
    counts: dict = {}
    for j in parts:
        counts[j] = counts.get(j, 0) + 1
    label = "*".join(f"c{j}" if p == 1 else f"c{j}^{p}" for j, p in sorted(counts.items()))
    return InvariantPolySpec.monomial(CHERN, sorted(counts.items()), label=label)


def chern_numbers(field_, max_exponent: int = DEFAULT_MAX_EXPONENT) -> dict:
    """All Chern numbers ``int c_lambda`` of CP^n, keyed by partition of ``n``."""
    n = field_dimension(field_)
    return {
        lam: futaki_morita(field_, chern_spec(lam), max_exponent)
        for lam in partitions(n)
    }


def random_diagonal_field(n: int, rng, bound: int = 9) -> ProjectiveVectorField:
    """Traceless diagonal field with distinct rational entries drawn from ``rng``."""
    while True:
        entries = [Fraction(rng.randint(-bound, bound), rng.randint(1, 4)) for _ in range(n)]
        entries.append(-sum(entries))
        if len(set(entries)) == len(entries):
            return ProjectiveVectorField.diagonal(entries)


__all__ = [
    "ChartField",
    "FMResult",
    "ProjectiveVectorField",
    "ZeroPoint",
    "chern_numbers",
    "fixed_points_diagonalizable",
    "futaki",
    "futaki_morita",
    "futaki_morita_detail",
    "induced_chart_field",
    "jordan_matrix",
    "linearization",
    "local_contribution",
    "max_degenerate_field",
    "closed_form_max_degenerate",
    "zeros_with_charts",
]
