from fractions import Fraction
from math import factorial

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from resloc.errors import ParseError
from resloc.gaussian import GaussianRational, I, ONE, ZERO
from resloc.polynomial import (
    GREVLEX,
    LEX,
    MultiPoly,
    as_poly,
    coefficient_of,
    differentiate,
    infer_nvars,
    parse_poly,
    poly_add,
    poly_mul,
    taylor_coefficient,
)
from strategies import gaussians, polys


def P(text, n=2):
    return parse_poly(text, n)


# -- Gaussian rationals ---------------------------------------------------------------


def test_gaussian_arithmetic():
    a = GaussianRational(Fraction(1, 2), 3)
    assert a * a.inverse() == ONE
    assert a.conjugate() == GaussianRational(Fraction(1, 2), -3)
    assert a.norm2() == Fraction(1, 4) + 9
    assert I * I == -1
    assert GaussianRational(3) == 3
    assert str(GaussianRational.parse("1/2+3i")) == "1/2+3i"
    assert str(-I) == "-i"
    assert complex(a) == complex(0.5, 3)


def test_gaussian_json_round_trip():
    a = GaussianRational(Fraction(-7, 3), Fraction(5, 4))
    assert a.to_json() == {"re": [-7, 3], "im": [5, 4]}
    assert GaussianRational.from_json(a.to_json()) == a
    assert GaussianRational.from_json(str(a)) == a


def test_gaussian_rejects_float_complex():
    with pytest.raises((TypeError, ValueError)):
        GaussianRational.coerce(1.5 + 2j)


@given(gaussians, gaussians, gaussians)
def test_gaussian_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    if a:
        assert a * a.inverse() == ONE


# -- arithmetic examples ----------------------------------------------------------------


def test_add_examples():
    assert P("z1") + P("-z1") == MultiPoly.zero(2)
    assert P("z1^2") + P("z2") == P("z1^2 + z2")
    assert poly_add(P("2*z1^2 + z2"), P("z1^2")) == P("3*z1^2 + z2")


def test_mul_examples():
    assert poly_mul(P("2*z1^2 + z2"), P("z1^2 + z2")) == P("2*z1^4 + 3*z1^2*z2 + z2^2")
    p = P("(3/2)*z1*z2 - i*z2^3")
    assert p * MultiPoly.constant(2, 1) == p
    assert not (p * MultiPoly.zero(2))


def test_differentiate_examples():
    assert differentiate(P("z1^3"), 0) == P("3*z1^2")
    assert differentiate(P("2*z1^2 + z2"), 1) == P("1")
    assert differentiate(P("z2"), 0) == MultiPoly.zero(2)


def test_coefficient_examples():
    assert coefficient_of(P("2*z1^4 + 3*z1^2*z2 + z2^2"), (2, 1)) == 3
    assert coefficient_of(P("z2"), (1, 0)) == 0
    assert coefficient_of(P("9*z1^4 + 9*z1^2*z2"), (2, 1)) == 9


def test_taylor_coefficient_matches_coefficient():
    p = P("2*z1^4 + 3*z1^2*z2 + z2^2 - (1/3)*z1^2*z2^2")
    for m in [(2, 1), (4, 0), (0, 2), (2, 2), (1, 1)]:
        assert taylor_coefficient(p, m) == p.coefficient_of(m)


# -- parsing and printing -----------------------------------------------------------------


def test_parse_examples():
    x1 = P("z2 - z1^2")
    assert x1 == MultiPoly.variable(2, 1) - MultiPoly.variable(2, 0) ** 2
    assert P("0") == MultiPoly.zero(2)
    q = parse_poly("(3/2)*z1*z2 + i*z3", 3)
    assert len(q) == 2
    assert q.coefficient_of((1, 1, 0)) == Fraction(3, 2)
    assert q.coefficient_of((0, 0, 1)) == I


def test_canonical_printing_is_grevlex_descending():
    p = P("z2 + z1 + z1*z2 + 3 + z1^2")
    assert str(p) == "z1^2 + z1*z2 + z1 + z2 + 3"
    assert str(P("-(3/2)*z1 + 2*i*z2")) == "-(3/2)*z1 + 2i*z2"


@pytest.mark.parametrize(
    "text, position",
    [("z1^", 3), ("z1 +* z2", 4), ("z1^99999999", 3), ("z9", 0)],
)
def test_parse_errors_carry_position(text, position):
    with pytest.raises(ParseError) as info:
        parse_poly(text, 2)
    assert info.value.position == position


def test_infer_and_as_poly():
    assert infer_nvars(["z1 + z3", "z2"]) == 3
    p = P("z1*z2 - 1")
    assert as_poly(p.to_json()) == p
    assert as_poly("z1*z2 - 1", 2) == p


@settings(max_examples=200)
@given(polys(nvars=3, max_degree=4, max_terms=6))
def test_print_parse_round_trip(p):
    assert parse_poly(str(p), 3) == p
    assert MultiPoly.from_json(p.to_json()) == p


# -- ring structure ----------------------------------------------------------------------


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == MultiPoly.zero(2)


@given(polys(), polys())
def test_leibniz_rule(a, b):
    for v in range(2):
        assert (a * b).differentiate(v) == a.differentiate(v) * b + a * b.differentiate(v)


@given(polys(nvars=3, max_degree=4))
def test_mixed_partials_commute(p):
    for i in range(3):
        for j in range(3):
            assert p.differentiate(i).differentiate(j) == p.differentiate(j).differentiate(i)


@given(polys(max_degree=4))
def test_coefficient_times_factorials_is_derivative_at_zero(p):
    for m, c in p.terms():
        assert p.derivative(m).constant_term() == c * (factorial(m[0]) * factorial(m[1]))


@given(polys(), st.tuples(gaussians, gaussians))
def test_translate_matches_evaluate(p, shift):
    q = p.translate(shift)
    assert q.constant_term() == p.evaluate(shift)


def _to_sympy(p, xs):
    return sum(
        (sympy.Rational(c.re.numerator, c.re.denominator)
         + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator))
        * sympy.Mul(*[x ** e for x, e in zip(xs, m)])
        for m, c in p.terms()
    )


@settings(max_examples=40, deadline=None)
@given(polys(), polys())
def test_product_matches_sympy(a, b):
    xs = sympy.symbols("z1 z2")
    assert sympy.expand(_to_sympy(a * b, xs) - _to_sympy(a, xs) * _to_sympy(b, xs)) == 0


def test_monomial_orders():
    assert GREVLEX.key((1, 1, 0)) > GREVLEX.key((0, 0, 2))
    assert GREVLEX.key((0, 0, 3)) > GREVLEX.key((1, 1, 0))
    assert LEX.key((1, 0, 0)) > LEX.key((0, 5, 5))
    lead, _ = P("z2^3 + z1^2*z2").leading_term(GREVLEX)
    assert lead == (2, 1)


def test_exact_divide():
    a, b = P("z1^2 + z2"), P("z1 - 3*z2 + i")
    assert (a * b).exact_divide(b) == a
    with pytest.raises(ValueError):
        P("z1^2 + 1").exact_divide(P("z1"))


def test_constants_and_zero():
    assert ZERO == 0
    assert MultiPoly.constant(2, 0) == MultiPoly.zero(2)
    assert MultiPoly.constant(2, 5).is_constant()
