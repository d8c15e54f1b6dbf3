"""Grothendieck residues of ``h dz / (f_1 ... f_n)`` at an isolated zero at the origin."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import DegenerateZero, InvalidCertificate
from .gaussian import GaussianRational
from .groebner import (
    DEFAULT_MAX_EXPONENT,
    MembershipCertificate,
    find_certificate,
    verify_certificate,
)
from .matrix import PolyMatrix, det
from .polynomial import MultiPoly


@dataclass(frozen=True)
class ResidueProblem:
    """Numerator ``h`` and denominator map ``f`` in ``n`` variables, zero at the origin."""

    h: MultiPoly
    f: tuple

    def __post_init__(self):
        f = tuple(self.f)
        object.__setattr__(self, "f", f)
        n = len(f)
        if n == 0:
            raise ValueError("need at least one denominator component")
        if self.h.nvars != n or any(g.nvars != n for g in f):
            raise ValueError(f"h and all {n} components of f must have {n} variables")

    @property
    def nvars(self) -> int:
        return len(self.f)


@dataclass(frozen=True)
class ResidueResult:
    value: GaussianRational
    method: str
    alpha: tuple
    certificate: MembershipCertificate | None = field(default=None, compare=False)


def jacobian(f: Sequence[MultiPoly]) -> PolyMatrix:
    """Entry ``(j, k)`` is ``d f_j / d z_k``."""
    n = f[0].nvars
    return PolyMatrix(tuple(tuple(fj.differentiate(k) for k in range(n)) for fj in f))


def jacobian_det_at_origin(f: Sequence[MultiPoly]) -> GaussianRational:
    J = jacobian(f).map(lambda e: MultiPoly.constant(e.nvars, e.constant_term()))
    return det(J).constant_term()


def residue_nondegenerate(prob: ResidueProblem) -> GaussianRational:
    """``h(0) / det Df(0)``; raises :class:`DegenerateZero` when the Jacobian is singular."""
    d = jacobian_det_at_origin(prob.f)
    if not d:
        raise DegenerateZero("Jacobian determinant vanishes at the origin")
    return prob.h.constant_term() / d


def residue_monomial(h: MultiPoly, alpha: Sequence[int]) -> GaussianRational:
    """Residue of ``h dz / prod z_i^(alpha_i+1)``: the ``z^alpha`` coefficient of ``h``."""
    return h.coefficient_of(alpha)


def residue_via_certificate(prob: ResidueProblem, cert: MembershipCertificate) -> GaussianRational:
    """Coefficient of ``z^alpha`` in ``h * det B``.

    This is the Taylor coefficient ``(1/alpha!) d^alpha (h det B) |_0``.
    """
    if not verify_certificate(cert, prob.f):
        raise InvalidCertificate("certificate does not satisfy z_i^(alpha_i+1) = sum_j B_ij f_j")
    return _coefficient_of_product(prob.h, det(cert.B), cert.alpha)


def _coefficient_of_product(a: MultiPoly, b: MultiPoly, target: Sequence[int]) -> GaussianRational:
    # only pairs of terms whose exponents sum to `target` contribute
    target = tuple(target)
    if len(a) > len(b):
        a, b = b, a
    total = GaussianRational(0)
    for m, c in a.terms():
        rest = tuple(t - e for t, e in zip(target, m))
        if min(rest, default=0) < 0:
            continue
        d = b.coefficient_of(rest)
        if d:
            total = total + c * d
    return total


def monomial_exponents(f: Sequence[MultiPoly]):
    """If ``f_i = c_i z_i^(m_i)`` for every ``i``, return ``([m_i], [c_i])``; else ``None``."""
    exps, coeffs = [], []
    for i, fi in enumerate(f):
        if len(fi) != 1:
            return None
        (m, c), = fi.terms()
        if any(e for k, e in enumerate(m) if k != i) or m[i] == 0:
            return None
        exps.append(m[i])
        coeffs.append(c)
    return exps, coeffs


def solve_residue(prob: ResidueProblem, cert: MembershipCertificate | None = None,
                  max_exponent: int = DEFAULT_MAX_EXPONENT) -> ResidueResult:
    """Pick the cheapest valid method and report which one was used.

    Order: invertible Jacobian at the origin, then pure-power monomial
    denominators, then a membership certificate (given or synthesized).
    """
    n = prob.nvars
    if any(fi.constant_term() for fi in prob.f):
        raise ValueError("the origin is not a zero of f")
    if cert is not None:
        return ResidueResult(residue_via_certificate(prob, cert), "certificate", cert.alpha, cert)
    d = jacobian_det_at_origin(prob.f)
    if d:
        return ResidueResult(prob.h.constant_term() / d, "nondegenerate", (0,) * n)
    mono = monomial_exponents(prob.f)
    if mono is not None:
        exps, coeffs = mono
        alpha = tuple(e - 1 for e in exps)
        scale = GaussianRational(1)
        for c in coeffs:
            scale = scale * c
        return ResidueResult(residue_monomial(prob.h, alpha) / scale, "monomial", alpha)
    cert = find_certificate(prob.f, max_exponent)
    return ResidueResult(residue_via_certificate(prob, cert), "certificate", cert.alpha, cert)


def residue(prob: ResidueProblem, max_exponent: int = DEFAULT_MAX_EXPONENT) -> GaussianRational:
    return solve_residue(prob, max_exponent=max_exponent).value
