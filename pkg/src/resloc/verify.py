"""Reproduction suite: exact localization identities on CP^n plus property sweeps."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

from .cpn import (
    futaki,
    futaki_morita,
    local_residue,
    max_degenerate_field,
    closed_form_max_degenerate,
    random_diagonal_field,
    zeros_with_charts,
)
from .gaussian import GaussianRational
from .groebner import (
    buchberger,
    cofactors_consistent,
    explicit_cpn_certificate,
    find_certificate,
    is_groebner,
)
from .matrix import (
    PolyMatrix,
    det_spec,
    eval_invariant,
    inverse_constant,
    parse_phi,
    trace_det_spec,
    trace_power_spec,
)
from .polynomial import MultiPoly, parse_poly
from .residue import ResidueProblem, jacobian, solve_residue


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}  {self.detail}".rstrip()


def standard_phis(n: int) -> list:
    """``det``, ``[tr]^n``, ``[tr]^(n+1)`` and ``tr*det`` on ``(n+1)``-dimensional CP^n."""
    return [det_spec(n), trace_power_spec(n), trace_power_spec(n + 1), trace_det_spec(n)]


# -- random data -------------------------------------------------------------------


def random_coefficient(rng: random.Random, bound: int = 5, complex_part: bool = True) -> GaussianRational:
    re = Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
    im = Fraction(rng.randint(-bound, bound), rng.randint(1, 3)) if complex_part and rng.random() < 0.4 else 0
    return GaussianRational(re, im)


def random_poly(nvars: int, rng: random.Random, max_terms: int = 5, max_degree: int = 3,
                complex_part: bool = True) -> MultiPoly:
    terms: dict = {}
    for _ in range(rng.randint(0, max_terms)):
        deg = rng.randint(0, max_degree)
        m = [0] * nvars
        for _ in range(deg):
            m[rng.randrange(nvars)] += 1
        c = random_coefficient(rng, complex_part=complex_part)
        terms[tuple(m)] = terms.get(tuple(m), GaussianRational(0)) + c
    return MultiPoly(nvars, terms)


def random_invertible(dim: int, rng: random.Random) -> PolyMatrix:
    while True:
        P = PolyMatrix.from_entries(
            [[random_coefficient(rng, 3) for _ in range(dim)] for _ in range(dim)], 0
        )
        try:
            inverse_constant(P)
        except ZeroDivisionError:
            continue
        return P


def _lift(M: PolyMatrix, nvars: int) -> PolyMatrix:
    return M.map(lambda e: MultiPoly.constant(nvars, e.constant_term()))


# -- individual checks -------------------------------------------------------------


def _exact(name: str, got, want) -> Check:
    return Check(name, got == want, f"got {got}, expected {want}")


def check_euler(ns) -> Iterator[Check]:
    for n in ns:
        yield _exact(f"euler n={n}", futaki_morita(max_degenerate_field(n), det_spec(n)), n + 1)


def check_top_chern(ns) -> Iterator[Check]:
    for n in ns:
        got = futaki_morita(max_degenerate_field(n), trace_power_spec(n))
        yield _exact(f"hyperplane^n n={n}", got, (n + 1) ** n)


def check_futaki(ns) -> Iterator[Check]:
    for n in ns:
        trace_of_power, power_of_trace = futaki(max_degenerate_field(n))
        yield Check(
            f"futaki n={n}",
            power_of_trace == 0 and trace_of_power == 0,
            f"[tr]^{n + 1} -> {power_of_trace}, tr(A^{n + 1}) -> {trace_of_power}",
        )


def check_trace_det(ns) -> Iterator[Check]:
    for n in ns:
        yield _exact(f"tr*det n={n}", futaki_morita(max_degenerate_field(n), trace_det_spec(n)), 0)


def check_path_agreement(ns) -> Iterator[Check]:
    for n in ns:
        F = max_degenerate_field(n)
        for phi in standard_phis(n):
            a, b = closed_form_max_degenerate(n, phi), futaki_morita(F, phi)
            yield Check(f"closed form vs certificate n={n} phi={phi.label}", a == b, f"{a} vs {b}")


def check_certificate_independence(ns) -> Iterator[Check]:
    for n in ns:
        ((F, p),) = zeros_with_charts(max_degenerate_field(n))
        explicit = explicit_cpn_certificate(n)
        synthesized = find_certificate(F.components)
        for phi in standard_phis(n):
            a = local_residue(F, p, phi, cert=synthesized)
            b = local_residue(F, p, phi, cert=explicit)
            yield Check(
                f"certificate independence n={n} phi={phi.label}",
                a.value == b.value,
                f"alpha {list(a.alpha)} -> {a.value}, alpha {list(b.alpha)} -> {b.value}",
            )


def check_bott(rng: random.Random, count: int = 20) -> Iterator[Check]:
    det2, tr2 = parse_phi("det", 2), parse_phi("tr^2", 2)
    bad = []
    for _ in range(count):
        V = random_diagonal_field(2, rng)
        got = (futaki_morita(V, det2), futaki_morita(V, tr2))
        if got != (3, 9):
            bad.append((V.A, got))
    yield Check(f"bott sums on {count} diagonal fields", not bad, f"{len(bad)} mismatches")


def check_oracle() -> Iterator[Check]:
    from .oracle import QuadratureSpec, bm_normalization, residue_numeric

    v1 = bm_normalization(1, QuadratureSpec(nodes_per_angle=2048))
    yield Check("bm normalization n=1", abs(v1 - 1) <= 1e-9, f"{v1!r}")
    v2 = bm_normalization(2, QuadratureSpec(nodes_per_angle=64))
    yield Check("bm normalization n=2", abs(v2 - 1) <= 1e-4, f"{v2!r}")
    F = max_degenerate_field(2)
    h = eval_invariant(det_spec(2), jacobian(F.components))
    r = residue_numeric(ResidueProblem(h, F.components), QuadratureSpec(nodes_per_angle=64))
    yield Check("bm residue of degenerate CP^2 zero", abs(r.value - 3) <= 1e-2,
                f"{r.value!r} (est. error {r.est_error:.2e})")


# property sweeps


_LINEARITY_DENOMINATORS = [
    ("z2-z1^2", "-z1*z2"),
    ("z1^2", "z2^3"),
    ("z1+z2", "z2-2*z1"),
    ("z1^2+z2^2", "z1*z2"),
    ("z1^3-z2", "z2^2"),
]


def check_residue_linearity(rng: random.Random, count: int = 100) -> Iterator[Check]:
    problems = []
    for pair in _LINEARITY_DENOMINATORS:
        f = tuple(parse_poly(t, 2) for t in pair)
        problems.append((f, find_certificate(f)))
    bad = 0
    for i in range(count):
        f, cert = problems[i % len(problems)]
        h1, h2 = random_poly(2, rng), random_poly(2, rng)
        a, b = random_coefficient(rng), random_coefficient(rng)

        def res(h):
            return solve_residue(ResidueProblem(h, f), cert=cert).value

        if res(h1.scale(a) + h2.scale(b)) != a * res(h1) + b * res(h2):
            bad += 1
    yield Check(f"residue linearity ({count} pairs)", bad == 0, f"{bad} failures")


def check_conjugation_invariance(rng: random.Random, count: int = 50) -> Iterator[Check]:
    phis = ["det", "tr^2", "tr(A^3)", "tr*det", "c1*c2"]
    bad = 0
    for i in range(count):
        dim = 2 + i % 3
        nv = 2
        M = PolyMatrix.from_entries(
            [[random_poly(nv, rng, 2, 1) for _ in range(dim)] for _ in range(dim)], nv
        )
        P = random_invertible(dim, rng)
        C = _lift(P, nv) @ M @ _lift(inverse_constant(P), nv)
        phi = parse_phi(phis[i % len(phis)], dim)
        if eval_invariant(phi, C) != eval_invariant(phi, M):
            bad += 1
    yield Check(f"conjugation invariance ({count} conjugations)", bad == 0, f"{bad} failures")


def random_ideal(rng: random.Random) -> list:
    """2 or 3 generators in 2 or 3 variables, no constant terms, degrees 1..3."""
    nv = rng.choice((2, 3))
    gens = []
    while len(gens) < rng.randint(2, 3):
        terms = {}
        for _ in range(rng.randint(2, 4)):
            m = [0] * nv
            for _ in range(rng.randint(1, 3)):
                m[rng.randrange(nv)] += 1
            terms[tuple(m)] = random_coefficient(rng, complex_part=False)
        g = MultiPoly(nv, terms)
        if g:
            gens.append(g)
    return gens


def check_groebner_identities(rng: random.Random, count: int = 20) -> Iterator[Check]:
    bad = 0
    for _ in range(count):
        tb = buchberger(random_ideal(rng))
        if not (cofactors_consistent(tb) and is_groebner(tb)):
            bad += 1
    yield Check(f"groebner cofactors and S-pairs ({count} ideals)", bad == 0, f"{bad} failures")


def check_round_trip(rng: random.Random, count: int = 200) -> Iterator[Check]:
    bad = 0
    for _ in range(count):
        nv = rng.randint(1, 4)
        p = random_poly(nv, rng, 6, 4)
        if parse_poly(str(p), nv) != p or MultiPoly.from_json(p.to_json()) != p:
            bad += 1
    yield Check(f"parse/print round trip ({count} polynomials)", bad == 0, f"{bad} failures")


# -- driver ------------------------------------------------------------------------


def suites(n_max: int = 5, with_oracle: bool = False, seed: int = 0) -> list:
    """``(criterion, label, thunk)`` triples; each thunk yields :class:`Check` lines."""
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    ns = range(2, n_max + 1)
    small = range(2, min(n_max, 4) + 1)
    rng = random.Random(seed)
    out: list = [
        (1, "Euler characteristic", lambda: check_euler(ns)),
        (2, "top power of the hyperplane class", lambda: check_top_chern(ns)),
        (3, "Futaki invariant vanishes", lambda: check_futaki(ns)),
        (4, "tr*det vanishes", lambda: check_trace_det(ns)),
        (5, "closed form agrees with certificate route", lambda: check_path_agreement(small)),
        (6, "certificate independence", lambda: check_certificate_independence(small)),
        (7, "Bott sums on random diagonal fields", lambda: check_bott(rng)),
    ]
    if with_oracle:
        out.append((8, "Bochner-Martinelli oracle", check_oracle))
    out.append((9, "property sweeps", lambda: _chain(
        check_residue_linearity(rng),
        check_conjugation_invariance(rng),
        check_groebner_identities(rng),
        check_round_trip(rng),
    )))
    return out


def _chain(*its):
    for it in its:
        yield from it


def run_checks(n_max: int = 5, with_oracle: bool = False, seed: int = 0,
               report: Callable[[int, Check], None] | None = None) -> list:
    """Run every suite and return ``(criterion, Check)`` pairs."""
    results = []
    for crit, _, thunk in suites(n_max, with_oracle, seed):
        for c in thunk():
            results.append((crit, c))
            if report:
                report(crit, c)
    return results
