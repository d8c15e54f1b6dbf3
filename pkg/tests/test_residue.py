import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from resloc.errors import DegenerateZero, InvalidCertificate, NotIsolatedOrCapTooLow
from resloc.gaussian import GaussianRational
from resloc.groebner import MembershipCertificate, explicit_cpn_certificate, find_certificate
from resloc.matrix import PolyMatrix, det
from resloc.polynomial import MultiPoly, parse_poly, taylor_coefficient
from resloc.residue import (
    ResidueProblem,
    residue,
    residue_monomial,
    residue_nondegenerate,
    residue_via_certificate,
    solve_residue,
)
from strategies import gaussians, polys


def P(text, n=2):
    return parse_poly(text, n)


F2 = (P("z2 - z1^2"), P("-z1*z2"))
B2 = PolyMatrix.from_entries([["-z1", "-1"], ["z2", "-z1"]], 2)
CERT2 = MembershipCertificate((2, 1), B2)
CERT2_FOUND = find_certificate(F2)


def raise_row(cert: MembershipCertificate, i: int) -> MembershipCertificate:
    """Multiply row ``i`` by ``z_i``: still a certificate, with ``alpha_i`` one larger."""
    n = len(cert.alpha)
    zi = MultiPoly.variable(n, i)
    rows = [list(r) for r in cert.B.rows]
    rows[i] = [zi * e for e in rows[i]]
    alpha = list(cert.alpha)
    alpha[i] += 1
    return MembershipCertificate(tuple(alpha), PolyMatrix(tuple(tuple(r) for r in rows)))


def test_nondegenerate_examples():
    assert residue_nondegenerate(ResidueProblem(P("5"), (P("2*z1"), P("3*z2")))) == Fraction(5, 6)
    assert residue_nondegenerate(ResidueProblem(P("1"), (P("z1"), P("z2")))) == 1
    assert residue_nondegenerate(ResidueProblem(P("z1"), (P("z1"), P("z2")))) == 0
    with pytest.raises(DegenerateZero):
        residue_nondegenerate(ResidueProblem(P("1"), F2))


def test_monomial_examples():
    assert residue_monomial(P("z1^2*z2"), (2, 1)) == 1
    assert residue_monomial(P("z1^3"), (2, 1)) == 0
    assert residue_monomial(P("2*z1^4 + 3*z1^2*z2 + z2^2"), (2, 1)) == 3


def test_certificate_examples():
    assert residue_via_certificate(ResidueProblem(P("2*z1^2 + z2"), F2), CERT2) == 3
    assert residue_via_certificate(ResidueProblem(P("9*z1^2"), F2), CERT2) == 9
    assert residue_via_certificate(ResidueProblem(P("-27*z1^3"), F2), CERT2) == 0


def test_invalid_certificate_rejected():
    bad = MembershipCertificate((2, 1), PolyMatrix.identity(2, 2))
    with pytest.raises(InvalidCertificate):
        residue_via_certificate(ResidueProblem(P("1"), F2), bad)


def test_dispatch():
    r = solve_residue(ResidueProblem(P("7"), (P("z1 + z2"), P("z2"))))
    assert (r.value, r.method) == (7, "nondegenerate")
    r = solve_residue(ResidueProblem(P("2*z1^2 + z2"), F2))
    assert (r.value, r.method, r.alpha) == (3, "certificate", (2, 1))
    r = solve_residue(ResidueProblem(P("z1"), (P("z1^2"), P("z2"))))
    assert (r.value, r.method, r.alpha) == (1, "monomial", (1, 0))
    r = solve_residue(ResidueProblem(P("z1*z2^2"), (P("3*z1^2"), P("-2*z2^3"))))
    assert r.value == Fraction(-1, 6)


def test_origin_must_be_a_zero():
    with pytest.raises(ValueError):
        residue(ResidueProblem(P("1"), (P("z1 + 1"), P("z2"))))


def test_problem_validates_variable_count():
    with pytest.raises(ValueError):
        ResidueProblem(P("1", 3), F2)


@settings(max_examples=100, deadline=None)
@given(polys(), polys(), gaussians, gaussians)
def test_linearity_in_numerator(h1, h2, a, b):
    def res(h):
        return residue_via_certificate(ResidueProblem(h, F2), CERT2_FOUND)

    assert res(h1.scale(a) + h2.scale(b)) == a * res(h1) + b * res(h2)


@settings(max_examples=40, deadline=None)
@given(polys(max_degree=4))
def test_coefficient_extraction_matches_derivative_formula(h):
    # (1/alpha!) d^alpha (h det B) at 0, computed by repeated differentiation
    slow = taylor_coefficient(h * det(B2), (2, 1))
    assert residue_via_certificate(ResidueProblem(h, F2), CERT2) == slow


@settings(max_examples=40, deadline=None)
@given(polys(max_degree=4))
def test_certificate_independence(h):
    prob = ResidueProblem(h, F2)
    base = residue_via_certificate(prob, CERT2)
    assert residue_via_certificate(prob, CERT2_FOUND) == base
    assert residue_via_certificate(prob, raise_row(raise_row(CERT2, 0), 1)) == base
    assert residue_via_certificate(prob, explicit_cpn_certificate(2)) == base


def test_certificate_route_agrees_with_nondegenerate():
    # f = L(z1 + e*z2^2, z2) with L invertible: the origin is the only zero
    rng = random.Random(2)
    checked = 0
    while checked < 25:
        a, b, c, d = (rng.randint(-4, 4) for _ in range(4))
        if a * d - b * c == 0:
            continue
        u = P("z1") + P("z2^2").scale(rng.randint(-3, 3))
        v = P("z2")
        f = (u.scale(a) + v.scale(b), u.scale(c) + v.scale(d))
        h = P("z1 - 2*z2^2") + rng.randint(-5, 5)
        prob = ResidueProblem(h, f)
        cert = find_certificate(f)
        assert residue_via_certificate(prob, cert) == residue_nondegenerate(prob)
        checked += 1


def test_constant_multiple_of_monomial_denominator():
    # scaling f_i by c_i divides the residue by prod c_i
    h = P("z1*z2 + 4*z1^2*z2^2")
    assert residue(ResidueProblem(h, (P("z1^2"), P("z2^2")))) == 1
    assert residue(ResidueProblem(h, (P("2*z1^2"), P("i*z2^2")))) == GaussianRational(0, Fraction(-1, 2))


def test_one_variable():
    h = parse_poly("z1^2 + 5", 1)
    assert residue(ResidueProblem(h, (parse_poly("3*z1^3", 1),))) == Fraction(1, 3)


def test_other_zeros_block_polynomial_certificates():
    # z^3 - z^4 also vanishes at z = 1, so no power of z lies in the global ideal
    f = (parse_poly("z1^3 - z1^4", 1),)
    with pytest.raises(NotIsolatedOrCapTooLow):
        residue(ResidueProblem(parse_poly("z1^2", 1), f))
