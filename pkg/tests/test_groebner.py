import random

import pytest
import sympy

from resloc.cpn import max_degenerate_field
from resloc.errors import NotIsolatedOrCapTooLow
from resloc.groebner import (
    MembershipCertificate,
    buchberger,
    cofactors_consistent,
    explicit_cpn_certificate,
    find_certificate,
    is_groebner,
    normal_form,
    verify_certificate,
)
from resloc.matrix import PolyMatrix, det, inverse_constant
from resloc.polynomial import LEX, MultiPoly, parse_poly
from resloc.verify import random_ideal


def P(text, n=2):
    return parse_poly(text, n)


def field2():
    return (P("z2 - z1^2"), P("-z1*z2"))


def to_sympy(p, xs):
    out = 0
    for m, c in p.terms():
        coeff = sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(
            c.im.numerator, c.im.denominator
        )
        out += coeff * sympy.Mul(*[x ** e for x, e in zip(xs, m)])
    return sympy.expand(out)


def sympy_basis(f, order="grevlex"):
    xs = sympy.symbols(f"z1:{f[0].nvars + 1}")
    G = sympy.groebner([to_sympy(g, xs) for g in f], *xs, order=order)
    return {sympy.expand(g) for g in G.exprs}, xs


def test_basis_of_coordinate_ideal():
    f = (P("z1"), P("z2"))
    tb = buchberger(f)
    assert set(tb.basis) == set(f)
    for g, cof in zip(tb.basis, tb.cofactors):
        assert sum((c * fj for c, fj in zip(cof, f)), MultiPoly.zero(2)) == g


def test_basis_of_single_generator():
    tb = buchberger([parse_poly("z1^2", 1)])
    assert tb.basis == (parse_poly("z1^2", 1),)


def test_degenerate_field_basis_matches_sympy():
    tb = buchberger(field2())
    want, xs = sympy_basis(field2())
    assert {to_sympy(g, xs) for g in tb.basis} == want
    leads = set(tb.leading)
    assert (0, 2) in leads and any(m[1] == 0 for m in leads)
    assert cofactors_consistent(tb) and is_groebner(tb)


def test_random_ideals_match_sympy():
    rng = random.Random(11)
    for _ in range(20):
        f = random_ideal(rng)
        tb = buchberger(f)
        want, xs = sympy_basis(f)
        assert {to_sympy(g, xs) for g in tb.basis} == want
        assert cofactors_consistent(tb)
        assert is_groebner(tb)


def test_lex_order_matches_sympy():
    f = field2()
    tb = buchberger(f, LEX)
    want, xs = sympy_basis(f, "lex")
    assert {to_sympy(g, xs) for g in tb.basis} == want


def test_normal_form_examples():
    f = field2()
    tb = buchberger(f)
    r, cof = normal_form(P("z1^3"), tb)
    assert not r
    assert cof == (P("-z1"), P("-1"))
    r, _ = normal_form(P("1"), buchberger((P("z1"), P("z2"))))
    assert r == P("1")
    for fj in f:
        assert not normal_form(fj, tb)[0]


def test_normal_form_cofactor_identity():
    rng = random.Random(5)
    tb = buchberger(field2())
    for _ in range(20):
        p = MultiPoly(2, {(rng.randint(0, 4), rng.randint(0, 3)): rng.randint(-5, 5) for _ in range(4)})
        r, cof = normal_form(p, tb)
        assert p - r == sum((c * fj for c, fj in zip(cof, tb.generators)), MultiPoly.zero(2))


def test_certificate_for_degenerate_field():
    f = field2()
    cert = find_certificate(f)
    assert cert.alpha == (2, 1)
    assert verify_certificate(cert, f)
    assert cert.B[0, 0] * f[0] + cert.B[0, 1] * f[1] == P("z1^3")
    assert cert.B[1, 0] * f[0] + cert.B[1, 1] * f[1] == P("z2^2")


def test_certificate_nondegenerate_is_inverse():
    f = (P("z1 + z2"), P("z2"))
    cert = find_certificate(f)
    assert cert.alpha == (0, 0)
    coeff = PolyMatrix.from_entries([[1, 1], [0, 1]], 2)
    assert cert.B == inverse_constant(coeff).map(lambda e: MultiPoly.constant(2, e.constant_term()))


def test_certificate_monomial_generators():
    f = (P("z1^2"), P("z2^3"))
    cert = find_certificate(f)
    assert cert.alpha == (1, 2)
    assert cert.B == PolyMatrix.identity(2, 2)


def test_verify_certificate_examples():
    B = PolyMatrix.from_entries([["-z1", "-1"], ["z2", "-z1"]], 2)
    assert verify_certificate(MembershipCertificate((2, 1), B), field2())
    I2 = PolyMatrix.identity(2, 2)
    assert verify_certificate(MembershipCertificate((0, 0), I2), (P("z1"), P("z2")))
    assert not verify_certificate(MembershipCertificate((0, 0), I2), (P("z1^2"), P("z2")))


def test_non_isolated_zero_hits_cap():
    f = (P("z1*z2"), P("z1^2"))
    with pytest.raises(NotIsolatedOrCapTooLow):
        find_certificate(f, max_exponent=32)
    # oracle: z2^m never reduces to zero modulo a sympy basis
    xs = sympy.symbols("z1 z2")
    G = sympy.groebner([xs[0] * xs[1], xs[0] ** 2], *xs, order="grevlex")
    assert all(G.reduce(xs[1] ** m)[1] != 0 for m in range(1, 33))


def test_cap_too_low():
    with pytest.raises(NotIsolatedOrCapTooLow):
        find_certificate((P("z1^5"), P("z2")), max_exponent=3)


def test_explicit_certificate_small_cases():
    c2 = explicit_cpn_certificate(2)
    assert c2.alpha == (2, 1)
    assert det(c2.B) == P("z1^2 + z2")
    c3 = explicit_cpn_certificate(3)
    assert c3.alpha == (3, 1, 1)
    assert det(c3.B) == -(P("z3 + z1*z2", 3) * P("z2 + z1^2", 3))


@pytest.mark.parametrize("n", range(2, 7))
def test_explicit_certificate_verifies(n):
    assert verify_certificate(explicit_cpn_certificate(n), max_degenerate_field(n).components)


def test_certificate_json_round_trip():
    cert = find_certificate(field2())
    again = MembershipCertificate.from_json(cert.to_json(), 2)
    assert again.alpha == cert.alpha and again.B == cert.B
