from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings

from oracles import charpoly_coeffs, monomial_count_invariant, partitions_parts_at_most, rational_matrix, t, taylor
from strategies import invertible_rational_matrices, polys, rational_matrices
from poissoninv.autgrp import symmetric_power_trace
from poissoninv.poly import (
    Matrix,
    MultiPoly,
    NotSquare,
    PoleAtZero,
    RatFunc,
    Singular,
    UniPoly,
    VariableCountMismatch,
    charpoly,
    det,
    det_one_minus_t,
    inverse,
    jacobian_det,
    mat_mul,
    mat_pow,
    monomials_of_degree,
    partial_derivative,
    poly_arith,
    ratfunc_arith,
    solve_linear,
    taylor_coeffs,
)
from poissoninv.scalar import ONE, ZERO, as_cyclo, root_of_unity

x1, x2, x3 = MultiPoly.gens(3)


def q(a, b=1):
    return as_cyclo(Fraction(a, b))


# -- multivariate arithmetic ----------------------------------------------------


def test_difference_of_squares():
    assert poly_arith(x1 + x2, x1 - x2, "mul") == x1 ** 2 - x2 ** 2


def test_times_zero():
    f = x1 * x2 + 3
    assert poly_arith(f, MultiPoly.zero(3), "mul") == MultiPoly.zero(3)


def test_monomial_product():
    assert poly_arith(x1 ** 2 * x2, x1 * x2 * x3, "mul") == MultiPoly.monomial((3, 2, 1))


def test_variable_count_mismatch():
    with pytest.raises(VariableCountMismatch):
        poly_arith(x1, MultiPoly.var(2, 1), "add")


def test_partial_derivatives():
    assert partial_derivative(x1 ** 3, 1) == 3 * x1 ** 2
    assert partial_derivative(2 * x1 * x2 * x3, 3) == 2 * x1 * x2
    assert partial_derivative(MultiPoly.const(3, 7), 2) == MultiPoly.zero(3)


def test_partial_derivative_index_out_of_range():
    with pytest.raises(IndexError):
        partial_derivative(x1, 4)
    with pytest.raises(IndexError):
        MultiPoly.var(3, 0)


def test_grlex_rendering():
    f = x3 ** 2 + x1 * x2 + x1 ** 2 - 2 * x2 ** 3 + 5
    assert f.render() == "-2*x2^3 + x1^2 + x1*x2 + x3^2 + 5"


def test_monomials_of_degree_are_grlex_descending():
    assert monomials_of_degree(3, 2) == [(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)]


def test_substitute_and_linear_substitute_agree():
    m = Matrix([[1, 2, 0], [0, 1, 3], [1, 0, 1]])
    f = x1 ** 2 * x3 - x2 + 4
    images = [sum((m[i, j] * g for j, g in enumerate((x1, x2, x3))), MultiPoly.zero(3)) for i in range(3)]
    assert f.linear_substitute(m) == f.substitute(images)


def test_jacobian_det():
    assert jacobian_det([x1 ** 2, x2, x3]) == 2 * x1
    assert jacobian_det([x1 + x2, x1 + x2, x3]) == MultiPoly.zero(3)


@settings(max_examples=40, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert (f * g) * h == f * (g * h)
    assert f - f == MultiPoly.zero(3)


@settings(max_examples=40, deadline=None)
@given(polys(), polys())
def test_leibniz_rule(f, g):
    for i in (1, 2, 3):
        assert (f * g).diff(i) == f.diff(i) * g + f * g.diff(i)


# -- matrices -------------------------------------------------------------------


def test_charpoly_identity():
    tt = UniPoly.t()
    assert charpoly(Matrix.identity(3)) == (tt - 1) ** 3


def test_charpoly_reflection_profile():
    tt = UniPoly.t()
    assert charpoly(Matrix.diag([-1, 1, 1])) == (tt + 1) * (tt - 1) ** 2


@pytest.mark.parametrize("a, b, c", [(2, 3, 5), (1, -1, 4), (Fraction(1, 2), 7, -3)])
def test_charpoly_cyclic_form(a, b, c):
    m = Matrix([[0, a, 0], [0, 0, b], [c, 0, 0]])
    tt = UniPoly.t()
    assert charpoly(m) == tt ** 3 - as_cyclo(a) * b * c
    assert [as_cyclo(v) for v in charpoly_coeffs(m)] == [charpoly(m)[k] for k in range(4)]


def test_charpoly_not_square():
    with pytest.raises(NotSquare):
        charpoly(Matrix([[1, 2, 3], [4, 5, 6]]))


def test_det_diag_xi():
    xi = root_of_unity(1, 5)
    assert det(Matrix.diag([xi, 1, 1])) == xi


def test_case1_reflection_squares_to_identity():
    m = Matrix([[-1, 0, 0], [2, 1, 0], [3, 0, 1]])
    assert mat_pow(m, 2) == Matrix.identity(3)
    assert m ** 2 == Matrix.identity(3)


def test_singular_inverse():
    with pytest.raises(Singular):
        inverse(Matrix([[1, 2], [2, 4]]))


def test_render_matrix():
    assert Matrix([[1, q(1, 2)], [0, -1]]).render() == "[1, 1/2; 0, -1]"


@settings(max_examples=30, deadline=None)
@given(invertible_rational_matrices(3))
def test_inverse_round_trip(m):
    assert mat_mul(m, inverse(m)) == Matrix.identity(3)


@settings(max_examples=30, deadline=None)
@given(rational_matrices(3), rational_matrices(3))
def test_det_multiplicative(a, b):
    assert det(a * b) == det(a) * det(b)


@settings(max_examples=30, deadline=None)
@given(rational_matrices(3))
def test_cayley_hamilton(m):
    assert charpoly(m).eval_matrix(m) == Matrix.zeros(3, 3)


@settings(max_examples=25, deadline=None)
@given(rational_matrices(3))
def test_det_and_charpoly_against_sympy(m):
    assert det(m).to_fraction() == Fraction(str(rational_matrix(m).det()))
    assert [charpoly(m)[k].to_fraction() for k in range(4)] == charpoly_coeffs(m)


# -- linear systems ----------------------------------------------------------------


def test_solve_identity():
    sol = solve_linear(Matrix.identity(3), [1, 2, 3])
    assert sol.consistent and list(sol.particular) == [ONE, as_cyclo(2), as_cyclo(3)] and sol.kernel == ()


def test_solve_zero_system():
    sol = solve_linear(Matrix.zeros(2, 3), [0, 0])
    assert sol.particular == (ZERO, ZERO, ZERO)
    assert len(sol.kernel) == 3


def test_solve_rank_two_by_substitution():
    a = Matrix([[1, 2, 3], [2, -1, 1]])
    b = [4, 5]
    sol = solve_linear(a, b)
    assert sol.consistent and len(sol.kernel) == 1
    for v in (sol.particular, tuple(p + k for p, k in zip(sol.particular, sol.kernel[0]))):
        assert [sum((a[i, j] * v[j] for j in range(3)), ZERO) for i in range(2)] == [as_cyclo(4), as_cyclo(5)]
    for k in sol.kernel:
        assert all(sum((a[i, j] * k[j] for j in range(3)), ZERO) == ZERO for i in range(2))


def test_inconsistent_system():
    sol = solve_linear([[1, 1], [1, 1]], [1, 2])
    assert not sol.consistent


# -- rational functions -------------------------------------------------------------


def one_minus_t_power(k):
    return UniPoly([ONE] + [ZERO] * (k - 1) + [-ONE])


def test_taylor_binomial():
    r = RatFunc(UniPoly.const(ONE), one_minus_t_power(1) ** 3)
    assert taylor_coeffs(r, 3) == [as_cyclo(v) for v in (1, 3, 6, 10)]


def test_taylor_invariants_of_sign_change():
    r = RatFunc(UniPoly.const(ONE), one_minus_t_power(1) ** 2 * one_minus_t_power(2))
    expected = [monomial_count_invariant(3, d, lambda e: e[0] % 2 == 0) for d in range(5)]
    assert [c.to_fraction() for c in taylor_coeffs(r, 4)] == expected == [1, 2, 4, 6, 9]


def test_taylor_partitions():
    r = RatFunc(UniPoly.const(ONE), one_minus_t_power(1) * one_minus_t_power(2) * one_minus_t_power(3))
    expected = [partitions_parts_at_most(3, d) for d in range(7)]
    assert [c.to_fraction() for c in taylor_coeffs(r, 6)] == expected == [1, 1, 2, 3, 4, 5, 7]
    assert [c.to_fraction() for c in taylor_coeffs(r, 6)] == taylor(1 / ((1 - t) * (1 - t ** 2) * (1 - t ** 3)), 6)


def test_pole_at_zero():
    with pytest.raises(PoleAtZero):
        taylor_coeffs(RatFunc(UniPoly.const(ONE), UniPoly.t()), 2)


def test_ratfunc_normalization_and_arith():
    a = RatFunc(UniPoly.const(ONE), one_minus_t_power(1))
    b = RatFunc(UniPoly.const(ONE), UniPoly([ONE, ONE]))
    avg = ratfunc_arith(a, b, "add") / 2
    assert avg == RatFunc(UniPoly.const(ONE), one_minus_t_power(2))
    assert avg.den[0] == ONE
    assert ratfunc_arith(avg, avg, "div") == RatFunc(ONE)
    assert ratfunc_arith(a, a, "sub") == RatFunc(ZERO)
    assert ratfunc_arith(a, b, "mul") == avg


def test_ratfunc_render():
    r = RatFunc(UniPoly.const(ONE), one_minus_t_power(1) ** 2 * one_minus_t_power(2))
    assert r.render() == "1/((1-t)^2*(1-t^2))"


@pytest.mark.parametrize(
    "m",
    [
        Matrix([[1, 2], [3, 4]]),
        Matrix([[0, -1], [1, 0]]),
        Matrix([[-1, 0, 0], [2, 1, 0], [3, 0, 1]]),
        Matrix([[2, 1, 0], [0, 1, 1], [1, 0, -1]]),
    ],
)
def test_molien_macaulay_identity(m):
    series = taylor_coeffs(RatFunc(UniPoly.const(ONE), det_one_minus_t(m)), 4)
    assert series == [symmetric_power_trace(m, d) for d in range(5)]


def test_brute_force_symmetric_power_trace_by_hand():
    # diag(2, 3): degree-2 monomials x1^2, x1x2, x2^2 scale by 4, 6, 9
    assert symmetric_power_trace(Matrix.diag([2, 3]), 2) == as_cyclo(19)
    # the swap permutes monomials; only x1*x2 is fixed in degrees up to 3
    swap = Matrix([[0, 1], [1, 0]])
    assert [symmetric_power_trace(swap, d) for d in range(4)] == [as_cyclo(v) for v in (1, 0, 1, 0)]


def test_univariate_division_and_evaluation():
    tt = UniPoly.t()
    f = (tt - 1) * (tt + 2)
    qq, r = divmod(f, tt - 1)
    assert qq == tt + 2 and not r
    assert f(3) == as_cyclo(10)


def test_cartesian_small_matrices_det_by_leibniz_formula():
    # exhaustive 2x2 check over a small grid against ad - bc
    for a, b, c, d in product((-1, 0, 2), repeat=4):
        assert det(Matrix([[a, b], [c, d]])) == as_cyclo(a * d - b * c)
