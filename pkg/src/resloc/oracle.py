"""Numerical residues from the Bochner-Martinelli representative on a small sphere.

Only ``n = 1`` (circle) and ``n = 2`` (3-sphere) are supported; the grid
cost grows like ``nodes^(2n-1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial, pi
from typing import Sequence

import numpy as np

from .errors import SingularOnSphere
from .polynomial import MultiPoly
from .residue import ResidueProblem

SAFETY_FLOOR = 1e-10
DEFAULT_TOLERANCE = {1: 1e-6, 2: 1e-2}

# Orientation of the (theta, phi1, phi2) chart of S^3 relative to the boundary
# orientation of the ball; fixed so that the kernel integrates to +1.
_S3_ORIENTATION = -1.0


@dataclass(frozen=True)
class QuadratureSpec:
    """``tolerance=None`` picks the per-dimension default."""

    radius: float = 0.5
    nodes_per_angle: int = 64
    tolerance: float | None = None

    def __post_init__(self):
        if not self.radius > 0 or self.nodes_per_angle < 1:
            raise ValueError("radius and nodes_per_angle must be positive")
        if self.tolerance is not None and not self.tolerance > 0:
            raise ValueError("tolerance must be positive")

    def tolerance_for(self, n: int) -> float:
        return self.tolerance if self.tolerance is not None else DEFAULT_TOLERANCE[n]


@dataclass(frozen=True)
class NumericResidue:
    value: complex
    est_error: float
    tolerance: float = float("inf")

    @property
    def converged(self) -> bool:
        """Whether the coarse/fine grid difference is within tolerance."""
        return self.est_error <= self.tolerance

    def to_json(self) -> dict:
        return {
            "value_re": self.value.real,
            "value_im": self.value.imag,
            "est_error": self.est_error,
        }


def bm_constant(n: int) -> complex:
    """``(-1)^(n(n-1)/2) (n-1)! / (2 pi i)^n``."""
    return (-1) ** (n * (n - 1) // 2) * factorial(n - 1) / (2j * pi) ** n


def evaluate_numeric(p: MultiPoly, z: Sequence[np.ndarray]) -> np.ndarray:
    out = np.zeros(np.broadcast(*z).shape, dtype=complex)
    for m, c in p.terms():
        t = np.full(out.shape, complex(c))
        for zi, e in zip(z, m):
            if e:
                t = t * zi ** e
        out += t
    return out


def _circle(prob: ResidueProblem, radius: float, nodes: int, floor: float) -> complex:
    theta = 2 * pi * np.arange(nodes) / nodes
    z = radius * np.exp(1j * theta)
    f = evaluate_numeric(prob.f[0], [z])
    if np.min(np.abs(f)) < floor:
        raise SingularOnSphere("f nearly vanishes on the circle")
    h = evaluate_numeric(prob.h, [z])
    # (1 / 2 pi i) * integral of h dz / f with dz = i z dtheta
    integrand = h * z / f
    return complex(np.sum(integrand) / nodes)


def _sphere3(prob: ResidueProblem, radius: float, nodes: int, floor: float) -> complex:
    x, w = np.polynomial.legendre.leggauss(nodes)
    theta = (x + 1) * (pi / 4)
    wt = w * (pi / 4)
    phi = 2 * pi * np.arange(nodes) / nodes
    wp = 2 * pi / nodes
    T, P1, P2 = np.meshgrid(theta, phi, phi, indexing="ij")
    W = wt[:, None, None] * wp * wp
    c, s = np.cos(T), np.sin(T)
    e1, e2 = np.exp(1j * P1), np.exp(1j * P2)
    z1 = radius * c * e1
    z2 = radius * s * e2
    # partials of (z1, z2) along (theta, phi1, phi2)
    dz1 = (-radius * s * e1, 1j * z1, np.zeros_like(z1))
    dz2 = (radius * c * e2, np.zeros_like(z2), 1j * z2)
    pts = [z1, z2]

    f = [evaluate_numeric(fi, pts) for fi in prob.f]
    norm2 = np.abs(f[0]) ** 2 + np.abs(f[1]) ** 2
    if np.min(np.sqrt(norm2)) < floor:
        raise SingularOnSphere("f nearly vanishes on the sphere")
    df = [[evaluate_numeric(fi.differentiate(k), pts) for k in range(2)] for fi in prob.f]
    h = evaluate_numeric(prob.h, pts)

    def det3(a, b, cc):
        return (a[0] * (b[1] * cc[2] - b[2] * cc[1])
                - a[1] * (b[0] * cc[2] - b[2] * cc[0])
                + a[2] * (b[0] * cc[1] - b[1] * cc[0]))

    total = np.zeros_like(z1)
    for k, dzk in enumerate((dz1, dz2)):
        # coefficient of dzbar_k in  fbar_1 dfbar_2 - fbar_2 dfbar_1
        g = np.conj(f[0]) * np.conj(df[1][k]) - np.conj(f[1]) * np.conj(df[0][k])
        vol = det3(tuple(np.conj(d) for d in dzk), dz1, dz2)
        total = total + g * vol
    integrand = h * total / norm2 ** 2
    return complex(_S3_ORIENTATION * bm_constant(2) * np.sum(integrand * W))


def _integrate(prob: ResidueProblem, radius: float, nodes: int, floor: float) -> complex:
    if prob.nvars == 1:
        return _circle(prob, radius, nodes, floor)
    return _sphere3(prob, radius, nodes, floor)


def residue_numeric(prob: ResidueProblem, spec: QuadratureSpec = QuadratureSpec(),
                    floor: float = SAFETY_FLOOR) -> NumericResidue:
    """Quadrature of ``C_n h sum (-1)^(i-1) fbar_i dfbar_[i] ^ dz / |f|^(2n)`` over the sphere.

    ``est_error`` is the change against a grid with half as many nodes per angle.
    """
    if prob.nvars not in DEFAULT_TOLERANCE:
        raise ValueError("the Bochner-Martinelli oracle supports n <= 2 only")
    v = _integrate(prob, spec.radius, spec.nodes_per_angle, floor)
    coarse = max(1, spec.nodes_per_angle // 2)
    v_half = _integrate(prob, spec.radius, coarse, floor)
    return NumericResidue(v, abs(v - v_half), spec.tolerance_for(prob.nvars))


def bm_normalization(n: int, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Integral of the kernel ``beta(w, 0)`` over the sphere; tends to 1."""
    if n not in DEFAULT_TOLERANCE:
        raise ValueError("the Bochner-Martinelli oracle supports n <= 2 only")
    prob = ResidueProblem(
        MultiPoly.constant(n, 1), tuple(MultiPoly.variable(n, i) for i in range(n))
    )
    return residue_numeric(prob, spec).value.real
