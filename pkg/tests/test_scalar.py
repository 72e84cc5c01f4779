from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import cyclo_to_sympy, same_value, sp, z
from strategies import cyclos, nonzero_cyclos
from poissoninv.scalar import (
    ONE,
    ZERO,
    Cyclo,
    as_cyclo,
    cyclo_arith,
    cyclotomic_poly,
    euler_phi,
    order_as_root_of_unity,
    root_of_unity,
)


def test_i_squared_is_minus_one():
    assert cyclo_arith(root_of_unity(1, 4), root_of_unity(1, 4), "mul") == as_cyclo(-1)


def test_sqrt3_squared_against_sympy_reduction():
    s = root_of_unity(1, 12) + root_of_unity(11, 12)
    got = s * s
    assert got == as_cyclo(3)
    assert same_value(got, 3)
    assert got.is_rational()


def test_rational_sum():
    assert cyclo_arith(as_cyclo(Fraction(1, 2)), as_cyclo(Fraction(1, 3)), "add") == as_cyclo(Fraction(5, 6))


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        cyclo_arith(ONE, ZERO, "div")


def test_unknown_operation():
    with pytest.raises(ValueError):
        cyclo_arith(ONE, ONE, "pow")


@pytest.mark.parametrize("k, n, expected", [(0, 5, ONE), (2, 4, as_cyclo(-1))])
def test_root_of_unity_trivial_cases(k, n, expected):
    assert root_of_unity(k, n) == expected


def test_zeta3_satisfies_phi3():
    w = root_of_unity(1, 3)
    assert w * w + w + 1 == ZERO
    assert w.modulus == 3


def test_root_of_unity_negative_exponent():
    assert root_of_unity(-1, 12) * root_of_unity(1, 12) == ONE


@pytest.mark.parametrize(
    "z, bound, expected",
    [(as_cyclo(-1), 10, 2), (root_of_unity(1, 3), 10, 3), (as_cyclo(2), 100, None), (ONE, 5, 1)],
)
def test_order_as_root_of_unity(z, bound, expected):
    assert order_as_root_of_unity(z, bound) == expected


def test_order_respects_bound():
    assert order_as_root_of_unity(root_of_unity(1, 12), 11) is None
    assert order_as_root_of_unity(root_of_unity(1, 12), 12) == 12


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 8, 9, 12, 15, 24])
def test_phi_n_vanishes_at_zeta_n(n):
    z = root_of_unity(1, n)
    acc = ZERO
    for k, c in enumerate(cyclotomic_poly(n)):
        acc = acc + c * z ** k
    assert acc == ZERO
    assert len(cyclotomic_poly(n)) == euler_phi(n) + 1


def test_lcm_lifting_mixes_fields():
    i = root_of_unity(1, 4)
    w = root_of_unity(1, 3)
    prod = i * w
    assert prod.modulus == 12
    assert prod == root_of_unity(3, 12) * root_of_unity(4, 12)
    assert prod ** 12 == ONE


def test_round_trip_to_rational():
    c = Cyclo([Fraction(3, 4), 0, 0, 0], 12)
    assert c.is_rational() and c.to_fraction() == Fraction(3, 4)
    with pytest.raises(ValueError):
        root_of_unity(1, 3).to_fraction()


def test_render():
    assert (Fraction(1, 2) * root_of_unity(2, 12) - 1).render() == "1/2*zeta(12)^2 - 1"
    assert as_cyclo(Fraction(-2, 3)).render() == "-2/3"


def test_wrong_coefficient_count():
    with pytest.raises(ValueError):
        Cyclo([1, 2], 12)


@settings(max_examples=60, deadline=None)
@given(cyclos(), cyclos(), cyclos())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == ZERO


@settings(max_examples=60, deadline=None)
@given(nonzero_cyclos())
def test_inverses(a):
    assert a * a.inverse() == ONE
    assert same_value(a * a.inverse(), 1)


@settings(max_examples=60, deadline=None)
@given(cyclos((1, 3, 4)), cyclos((1, 3, 4)), st.sampled_from(["add", "sub", "mul"]))
def test_lift_commutes_with_ops(a, b, op):
    m = 12
    direct = cyclo_arith(a, b, op).lift(m)
    lifted = cyclo_arith(a.lift(m), b.lift(m), op)
    assert direct == lifted


@settings(max_examples=40, deadline=None)
@given(cyclos((1, 3, 4, 12)), cyclos((1, 3, 4, 12)))
def test_product_matches_sympy_reduction(a, b):
    m = 12
    lhs = cyclo_to_sympy(a * b, m)
    rhs = cyclo_to_sympy(a, m) * cyclo_to_sympy(b, m)
    assert lhs == sp.Poly(sp.rem(rhs, sp.Poly(sp.cyclotomic_poly(m, z), z)), z, domain="QQ")


@settings(max_examples=40, deadline=None)
@given(cyclos(), cyclos())
def test_hash_consistent_with_equality(a, b):
    if a == b:
        assert hash(a) == hash(b)
    assert a.lift(12) == a and hash(a.lift(12)) == hash(a)
