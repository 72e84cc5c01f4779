import random
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from oracles import taylor, t
from strategies import invertible_rational_matrices
from poissoninv.autgrp import group_closure
from poissoninv.cases import load_case
from poissoninv.exprparse import parse_matrix
from poissoninv.poisson import PoissonStructure
from poissoninv.poly import Matrix, MultiPoly
from poissoninv.scalar import ONE, as_cyclo, root_of_unity
from poissoninv.uenv import (
    EnvelopingAlgebra,
    InfiniteOrder,
    brute_force_env_trace,
    check_cyclic_example,
    check_induced_hom,
    diagonal_env_trace,
    eigen_profile_doubling,
    env_invariant_dims,
    env_molien,
    gorenstein_criterion,
    hdet_env,
    induce,
    laurent_hdet,
    log_canonical_plane,
    normal_form,
    parse_word,
    quasi_reflection_screen,
    trace_series_env,
    verify_pbw_consistency,
)

x1, x2, x3 = MultiPoly.gens(3)
CASE3 = load_case(3).structure


def diag(*entries):
    n = len(entries)
    return Matrix([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])


def test_parse_word():
    assert parse_word("x1 y2 x1", 3) == (0, 4, 0)
    assert parse_word("y_1x_2", 2) == (2, 1)
    with pytest.raises(ValueError):
        parse_word("x4", 3)
    with pytest.raises(ValueError):
        parse_word("x1 z2", 3)


def test_normal_form_examples():
    assert normal_form(CASE3, "y1 x2").render() == "2*x1*x2 + x2*y1"
    assert normal_form(CASE3, "x2 x1").render() == "x1*x2"
    assert normal_form(CASE3, "y2 y1").render() == "-2*x1*y2 - 2*x2*y1 + y1*y2"


@pytest.mark.parametrize("case", range(1, 10))
def test_rewriting_realizes_the_brackets(case):
    P = load_case(case).structure
    alg = EnvelopingAlgebra(P)
    n = 3
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            yi, yj, xj = n + i - 1, n + j - 1, j - 1
            comm = alg.nf({(yi, yj): ONE, (yj, yi): -ONE})
            expected = {}
            b = P.gen_bracket(i, j)
            for k in range(1, n + 1):
                for e, c in b.diff(k).terms.items():
                    expected[(e.index(1), n + k - 1)] = expected.get((e.index(1), n + k - 1), 0) + c
            assert comm == {w: c for w, c in expected.items() if c}
            mixed = alg.nf({(yi, xj): ONE, (xj, yi): -ONE})
            want = {}
            for e, c in b.terms.items():
                w = tuple(k for k in range(n) for _ in range(e[k]))
                want[w] = c
            assert mixed == want


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=1, max_size=3), st.lists(st.integers(0, 5), min_size=1, max_size=2),
       st.lists(st.integers(0, 5), min_size=1, max_size=2))
def test_multiplication_is_associative(a, b, c):
    alg = EnvelopingAlgebra(load_case(8).structure)
    A, B, C = {tuple(a): ONE}, {tuple(b): ONE}, {tuple(c): ONE}
    assert alg.nf(alg.multiply(alg.multiply(A, B), C)) == alg.nf(alg.multiply(A, alg.multiply(B, C)))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=0, max_size=4))
def test_normal_form_idempotent_and_degree_preserving(w):
    alg = EnvelopingAlgebra(load_case(6).structure)
    nf = alg.nf({tuple(w): ONE})
    assert alg.nf(nf) == nf
    assert all(len(k) == len(w) and list(k) == sorted(k) for k in nf)


@pytest.mark.parametrize("case", range(1, 10))
def test_pbw_consistency_all_cases(case):
    res = verify_pbw_consistency(load_case(case).structure, 4)
    assert res.ok
    assert res.counts == tuple(comb(5 + d, d) for d in range(5))


def test_pbw_consistency_zero_and_failure():
    assert verify_pbw_consistency(PoissonStructure.zero(3), 3)
    bad = PoissonStructure.from_cyclic(x2 ** 2, 3 * x1 ** 2, MultiPoly.zero(3))
    res = verify_pbw_consistency(bad, 3)
    assert not res and len(res.witness) == 3 and res.reason == "overlap does not resolve"


def test_induce_examples():
    assert induce(Matrix.identity(3)).matrix == Matrix.identity(6)
    w = root_of_unity(1, 5)
    assert induce(diag(w, 1)).matrix == diag(w, 1, w, 1)
    m = load_case(1).family("reflection").instantiate()
    big = induce(m).matrix
    for i in range(3):
        for j in range(3):
            assert big[i, j] == big[i + 3, j + 3] == m[i, j]
            assert big[i, j + 3] == big[i + 3, j] == 0
    with pytest.raises(ValueError):
        induce(parse_matrix("[1, 0; 0, 0]"))


def test_check_induced_hom():
    b = load_case(4)
    g1, g2 = b.group("s3").generators()
    assert check_induced_hom(b.structure, g1, g2)
    assert check_induced_hom(b.structure, g1, Matrix.identity(3))
    res = check_induced_hom(load_case(5).structure, parse_matrix("[1, 0, 0; 0, 2, 0; 0, 0, 1]"), Matrix.identity(3))
    assert not res and "does not preserve relation" in res.reason


def test_eigen_profile_doubling_examples():
    t_ = induce(diag(-1, 1, 1)).matrix.charpoly()
    from poissoninv.poly import UniPoly

    tt = UniPoly.t()
    assert t_ == (tt + 1) ** 2 * (tt - 1) ** 4
    assert eigen_profile_doubling(diag(-1, 1, 1))
    assert induce(Matrix.identity(3)).matrix.charpoly() == (tt - 1) ** 6


@settings(max_examples=50, deadline=None)
@given(invertible_rational_matrices(3))
def test_eigen_profile_doubling_random(m):
    assert eigen_profile_doubling(m)


def test_quasi_reflection_screen_examples():
    w = root_of_unity(1, 3)
    i = root_of_unity(1, 4)
    assert quasi_reflection_screen(diag(1, 1, 1, 1, 1, w)) == "classical"
    assert quasi_reflection_screen(diag(1, 1, i, -i)) == "mystic"
    assert quasi_reflection_screen(Matrix.identity(4)) == "none"
    for case, fam in [(1, "reflection"), (2, "reflection_cubic"), (4, "reflection2"), (8, "reflection")]:
        assert quasi_reflection_screen(induce(load_case(case).family(fam).instantiate())) == "none"


def test_trace_series_env_examples():
    assert trace_series_env(Matrix.identity(3)).taylor(6) == [as_cyclo(v) for v in taylor(1 / (1 - t) ** 6, 6)]
    assert trace_series_env(diag(-1, 1, 1)).taylor(6) == [
        as_cyclo(v) for v in taylor(1 / ((1 - t) ** 4 * (1 + t) ** 2), 6)
    ]


@pytest.mark.parametrize("case,family", [(1, "reflection"), (3, "reflection_first"), (8, "reflection"), (4, "reflection1")])
def test_trace_series_env_matches_brute_force(case, family):
    b = load_case(case)
    m = b.family(family).instantiate()
    alg = EnvelopingAlgebra(b.structure)
    coeffs = trace_series_env(m).taylor(4)
    for d in range(5):
        assert coeffs[d] == brute_force_env_trace(b.structure, m, d, alg) == diagonal_env_trace(m, d)


@pytest.mark.parametrize("n", [2, 3])
def test_rank_two_generator_traces(n):
    P = log_canonical_plane(1)
    m = diag(root_of_unity(1, n), 1)
    coeffs = trace_series_env(m).taylor(5)
    alg = EnvelopingAlgebra(P)
    for d in range(6):
        assert coeffs[d] == brute_force_env_trace(P, m, d, alg)


def test_hdet_examples():
    for n in (2, 3, 5):
        w = root_of_unity(1, n)
        assert hdet_env(diag(w, 1)) == w ** 2
    assert hdet_env(Matrix.identity(3)) == 1
    assert hdet_env(load_case(1).family("reflection").instantiate()) == 1
    with pytest.raises(InfiniteOrder):
        hdet_env(parse_matrix("[1, 0, 0; 0, 1, 0; 1, 0, 1]"))


def test_laurent_cross_check():
    w = root_of_unity(1, 3)
    assert laurent_hdet(diag(w, 1)) == (-4, w ** 2)
    m = load_case(2).family("reflection_cubic").instantiate()
    assert laurent_hdet(m) == (-6, m.det() ** 2)


def test_hdet_multiplicative_on_commuting_pairs():
    w = root_of_unity(1, 6)
    a, b = diag(w, 1, -1), diag(-1, w ** 2, 1)
    assert a * b == b * a
    assert hdet_env(a * b) == hdet_env(a) * hdet_env(b)


def test_gorenstein_only_for_n_2():
    assert gorenstein_criterion([diag(root_of_unity(1, 2), 1)])
    for n in (3, 4, 5):
        assert not gorenstein_criterion([diag(root_of_unity(1, n), 1)])


def test_env_invariant_dims_examples():
    P = log_canonical_plane(1)
    G = group_closure([diag(-1, 1)])
    dims = env_invariant_dims(P, G, 4)
    assert dims == [v for v in taylor((1 / (1 - t) ** 4 + 1 / ((1 - t) ** 2 * (1 + t) ** 2)) / 2, 4)]
    assert env_invariant_dims(P, group_closure([], n=2), 3) == [1, 4, 10, 20]
    G3 = group_closure([diag(root_of_unity(1, 3), 1)])
    assert env_invariant_dims(P, G3, 1)[1] == 2


def test_env_invariant_dims_match_env_molien():
    b = load_case(4)
    G = b.group("s3").closure()
    assert env_invariant_dims(b.structure, G, 3) == env_molien(G).taylor(3)


def test_cyclic_example_relations():
    for n in (2, 3):
        for q in (1, 2, as_cyclo(-1) / 3):
            rep = check_cyclic_example(n, q)
            assert rep.commuting and rep.exchange and all(rep.b_relations)
            assert all(p == as_cyclo(q) for p in rep.c_solutions)


def test_nonquadratic_rejected():
    from poissoninv.autgrp import NotQuadratic

    with pytest.raises(NotQuadratic):
        EnvelopingAlgebra(PoissonStructure.from_cyclic(x1, x2, x3))


def test_random_hom_checks_case8():
    b = load_case(8)
    fam = b.family("paut")
    rng = random.Random(3)
    m1, m2 = fam.random_instances(rng, 2)
    assert check_induced_hom(b.structure, m1, m2)
