import pytest
from hypothesis import given, settings, strategies as st

from oracles import monomial_count_invariant, partitions_parts_at_most
from strategies import polys
from poissoninv.autgrp import group_closure, molien
from poissoninv.cases import load_case
from poissoninv.exprparse import parse_matrix
from poissoninv.invariants import (
    NotClosedUnderBracket,
    express_in_generators,
    find_generators,
    induced_bracket_table,
    invariant_basis,
    is_invariant,
    make_generator_set,
    reynolds,
    same_algebra,
)
from poissoninv.poisson import is_unimodular, solve_superpotential, verify_jacobi
from poissoninv.poly import MultiPoly

x1, x2, x3 = MultiPoly.gens(3)
GROUPS = [(1, "z2"), (2, "cyclic2"), (2, "cyclic3"), (4, "s3"), (4, "g1"), (4, "g2"), (4, "g3"), (8, "z2")]


def gradient_table(omega):
    """Cyclic brackets of a possibly inhomogeneous potential, read off its partials."""
    return (omega.diff(3), omega.diff(1), omega.diff(2))


def sign_group():
    return group_closure([parse_matrix("[-1, 0, 0; 0, 1, 0; 0, 0, 1]")])


def test_reynolds_projects_to_invariants():
    G = sign_group()
    assert reynolds(G, x1 ** 2 + x1 * x2) == x1 ** 2
    assert reynolds(G, x1) == MultiPoly.zero(3)


@settings(max_examples=25, deadline=None)
@given(polys(max_deg=3, max_terms=5))
def test_reynolds_is_idempotent_and_invariant(f):
    G = load_case(4).group("s3").closure()
    r = reynolds(G, f)
    assert is_invariant(G, r)
    assert reynolds(G, r) == r


@pytest.mark.parametrize("d", range(6))
def test_invariant_dims_sign_group_monomial_oracle(d):
    G = sign_group()
    assert invariant_basis(G, d).dim == monomial_count_invariant(3, d, lambda e: e[0] % 2 == 0)


@pytest.mark.parametrize("d", range(7))
def test_invariant_dims_permutation_group(d):
    # invariants of S3 permuting coordinates: symmetric polynomials, counted by partitions
    G = group_closure([parse_matrix("[0, 1, 0; 1, 0, 0; 0, 0, 1]"), parse_matrix("[0, 1, 0; 0, 0, 1; 1, 0, 0]")])
    assert G.order == 6
    assert invariant_basis(G, d).dim == partitions_parts_at_most(3, d)


@pytest.mark.parametrize("case,group", GROUPS)
def test_invariant_dims_match_molien(case, group):
    G = load_case(case).group(group).closure()
    coeffs = molien(G).taylor(5)
    for d in range(6):
        assert invariant_basis(G, d).dim == coeffs[d]


def test_invariant_basis_elements_are_invariant():
    G = load_case(2).group("cyclic3").closure()
    B = invariant_basis(G, 3)
    assert B.dim == 5
    assert all(is_invariant(G, b) for b in B.basis)


@pytest.mark.parametrize("case,group", GROUPS)
def test_find_generators_degrees(case, group):
    gspec = load_case(case).group(group)
    G = gspec.closure()
    gs = find_generators(G)
    expected = tuple(int(s) for s in gspec.expect["degrees"].split(","))
    assert gs.degrees == expected
    assert gs.jacobian_independent and gs.complete
    assert all(is_invariant(G, g) for g in gs.gens)
    assert same_algebra(gs.gens, gspec.basis())


@pytest.mark.parametrize("case,group", GROUPS)
def test_listed_basis_is_invariant_and_independent(case, group):
    gspec = load_case(case).group(group)
    G = gspec.closure()
    basis = gspec.basis()
    assert all(is_invariant(G, g) for g in basis)
    assert make_generator_set(basis).jacobian_independent


@pytest.mark.parametrize("case,group", GROUPS)
def test_induced_tables(case, group):
    b = load_case(case)
    gspec = b.group(group)
    ind = induced_bracket_table(b.structure, gspec.basis())
    assert ind.structure == gspec.expected_table()
    assert ind.substitution_check()
    assert verify_jacobi(ind.structure)


@pytest.mark.parametrize("case,group", GROUPS)
def test_induced_unimodularity_and_superpotential(case, group):
    b = load_case(case)
    gspec = b.group(group)
    ind = induced_bracket_table(b.structure, gspec.basis()).structure
    assert is_unimodular(ind) == (gspec.expect["unimodular"] == "true")
    omega = solve_superpotential(ind)
    assert (omega is not None) == (gspec.expect["superpotential"] == "present")
    if omega is not None:
        assert gradient_table(omega) == ind.cyclic()


def test_case1_invariant_superpotential():
    b = load_case(1)
    ind = induced_bracket_table(b.structure, b.group("z2").basis()).structure
    assert solve_superpotential(ind) == 3 * MultiPoly.var(3, 1) ** 2 / 2


def test_s3_superpotential_value():
    b = load_case(4)
    ind = induced_bracket_table(b.structure, b.group("s3").basis()).structure
    y = MultiPoly.gens(3)
    omega = solve_superpotential(ind)
    assert omega == -2 * y[1] ** 3 + y[2] ** 2 / 2
    assert gradient_table(omega) == ind.cyclic()
    assert ind.gen_bracket(1, 2) == y[2]


def test_not_closed_under_bracket():
    P = load_case(8).structure
    with pytest.raises(NotClosedUnderBracket) as err:
        induced_bracket_table(P, [x1 ** 2, x2, x3])
    assert err.value.pair == (1, 3)


def test_express_in_generators():
    gens = [x1 ** 2, x2, x3]
    e = express_in_generators(x1 ** 4 + 3 * x1 ** 2 * x2 + 7, gens)
    y1, y2, y3 = MultiPoly.gens(3)
    assert e == y1 ** 2 + 3 * y1 * y2 + 7
    assert express_in_generators(x1 * x2, gens) is None
    with pytest.raises(ValueError):
        express_in_generators(x1, [x1 + x2 ** 2])


@settings(max_examples=25, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
def test_express_round_trip(a, b, c):
    gens = load_case(4).group("s3").basis()
    y1, y2, y3 = MultiPoly.gens(3)
    target = a * y1 ** 3 + b * y1 * y2 + c * y3
    f = target.substitute(gens)
    assert express_in_generators(f, gens).substitute(gens) == f


def test_same_algebra():
    assert same_algebra([x1 ** 2, x2, x3], [x1 ** 2, x2 + x3, x3])
    assert not same_algebra([x1 ** 2, x2, x3], [x1, x2, x3])


def test_trivial_group_generators():
    G = group_closure([], n=3)
    gs = find_generators(G)
    assert gs.degrees == (1, 1, 1)
