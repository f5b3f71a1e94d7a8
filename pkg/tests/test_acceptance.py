"""Acceptance criteria, one or more tests per criterion.

The terminal summary (see conftest.py) prints one PASS/FAIL line per criterion.
"""

import random
from fractions import Fraction
from math import comb

import pytest

from agealgebra import algebra as alg
from agealgebra.blueprint import classes, profile_prefix
from agealgebra.core import enumerate_unlabelled, random_structure, unlabelled_structures
from agealgebra.decomposition import (decomposition_of_blueprint, is_finitely_generated, is_hereditary_minimal,
                                      minimal_decomposition_bruteforce, minimal_decomposition_pairwise,
                                      tournament_finite_generation, tournament_remark_check)
from agealgebra.groupoid import (get_builtin_group, get_builtin_groupoid, hilbert_prefix, orbit_basis,
                                 wreath_crosscheck)
from agealgebra.library import INFINITE_BUILTINS, get_builtin
from agealgebra.series import (bounded_profile_certificate, expand, fit_rational, growth_degree,
                               numerator_nonneg_search, to_quasi_polynomial, validate_quasi_polynomial)

from oracles import compositions_at_most, partitions_at_most, series_coefficients


def test_criterion_01_clique_plus_coclique_two_forms():
    prefix = profile_prefix(get_builtin("clique-plus-coclique"), 20)
    over_squares = fit_rational(prefix, None, denominator=(1, 1))
    over_k2 = fit_rational(prefix, 2)
    assert over_squares.numerator == (1, -1, 1)
    assert over_k2.numerator == (1, 0, 0, 1) and over_k2.denominator == (1, 2)
    for rf in (over_squares, over_k2):
        assert expand(rf, 20) == prefix  # zero residual
        assert series_coefficients(rf.numerator, rf.denominator, 20) == prefix


def test_criterion_02_wheel_example():
    b = get_builtin("wheel-plus-coclique")
    rep = decomposition_of_blueprint(b)
    assert rep.stabilized
    assert len(rep.blocks) == 3 and rep.infinite.count(False) == 1
    assert rep.dimension == 2
    assert is_hereditary_minimal(b) is False
    assert not is_finitely_generated(b)
    prefix = profile_prefix(b, 20)
    rf = fit_rational(prefix, None, denominator=(1, 1))
    assert rf.numerator == (1, -1, 1)
    assert expand(rf, 20) == prefix


def test_criterion_03_noncm_groupoid():
    g = get_builtin_groupoid("noncm")
    prefix = hilbert_prefix(g, 12)
    rf = fit_rational(prefix, None, denominator=(1, 1, 1))
    assert rf.numerator == (1, -1, 2, -1)
    assert expand(rf, 12) == prefix
    search = numerator_nonneg_search(prefix, 3, 8)
    assert search.found is None
    assert search.tried == comb(8 + 2, 3)


@pytest.mark.parametrize("k", [2, 3])
def test_criterion_04_qsym_dimensions(k):
    g = get_builtin_groupoid(f"qsym:{k}")
    assert [len(orbit_basis(g, n)) for n in range(11)] == [compositions_at_most(n, k) for n in range(11)]
    rf = fit_rational(hilbert_prefix(g, 20), k)
    assert rf and rf.denominator == tuple(range(1, k + 1))
    assert rf.is_nonnegative()


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_criterion_05_symmetric_function_ladder(k):
    prefix = profile_prefix(get_builtin(f"k-cliques:{k}"), 15)
    assert prefix == [partitions_at_most(n, k) for n in range(16)]
    rf = fit_rational(prefix, k)
    assert rf and rf.numerator == (1,)


def test_criterion_06_tournament_finite_generation_verdicts():
    c3 = get_builtin("c3-chains")
    assert not tournament_finite_generation(c3)
    assert not is_finitely_generated(c3)
    p = profile_prefix(c3, 16)
    assert not bounded_profile_certificate(p).bounded
    assert growth_degree(p).degree >= 1

    ch = get_builtin("chain")
    assert tournament_finite_generation(ch)
    assert is_finitely_generated(ch)
    cert = bounded_profile_certificate(profile_prefix(ch, 16))
    assert cert.bounded and cert.limit == 1


def _oracle_mismatches(structures):
    return [s for s in structures if minimal_decomposition_bruteforce(s) != minimal_decomposition_pairwise(s)]


@pytest.mark.parametrize("kind,n_max", [("graph", 6), ("tournament", 6), ("digraph", 5), ("oriented", 6)])
def test_criterion_07_decomposition_oracles_exhaustive(kind, n_max):
    structures = [s for n in range(n_max + 1) for s in unlabelled_structures(n, kind)]
    assert _oracle_mismatches(structures) == []


def test_criterion_07_decomposition_oracles_random():
    rng = random.Random(2024)
    kinds = ["graph", "digraph", "oriented", "tournament"]
    structures = [random_structure(rng.randint(1, 9), rng.choice(kinds), rng, rng.uniform(0.1, 0.9))
                  for _ in range(200)]
    assert _oracle_mismatches(structures) == []


@pytest.mark.slow
def test_criterion_07_decomposition_oracles_digraphs_on_six_vertices():
    forms = enumerate_unlabelled(6, "digraph", cap=6)
    assert len(forms) == 1540944
    from agealgebra.core import DIGRAPH, structure_from_form

    bad = 0
    for f in forms:
        s = structure_from_form(f, DIGRAPH)
        bad += minimal_decomposition_bruteforce(s) != minimal_decomposition_pairwise(s)
    assert bad == 0


@pytest.mark.parametrize("name", INFINITE_BUILTINS)
def test_criterion_08_e1_injective(name):
    b = get_builtin(name)
    for n in range(11):
        assert alg.e1_rank(b, n) == len(alg.basis(b, n)), f"rank deficiency in degree {n}"
    p = profile_prefix(b, 11)
    assert all(x <= y for x, y in zip(p, p[1:]))


ALGEBRA_BLUEPRINTS = ["clique-plus-coclique", "wheel-plus-coclique", "c3-chains", "k-cliques:3",
                      "noncm-blueprint", "chain-plus-point", "qsym-blueprint:3", "clique-plus-point"]


@pytest.mark.parametrize("name", ALGEBRA_BLUEPRINTS)
def test_criterion_09_representative_independence(name):
    b = get_builtin(name)
    for total in range(2, 6):
        for m in range(1, total):
            for rho in alg.basis(b, total):
                reps = alg.class_vectors(b, rho)[:3]
                for sigma in alg.basis(b, m):
                    for tau in alg.basis(b, total - m):
                        values = {alg.structure_constant(b, rho, sigma, tau, d) for d in reps}
                        assert len(values) == 1, (rho.representative, reps, values)


def _random_element(b, rng, degree):
    types = alg.basis(b, degree).types
    return alg.AlgebraElement(b, {t: Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for t in types})


def test_criterion_09_commutative_associative():
    rng = random.Random(99)
    for case in range(100):
        b = get_builtin(ALGEBRA_BLUEPRINTS[case % len(ALGEBRA_BLUEPRINTS)])
        f, g, h = (_random_element(b, rng, rng.randint(0, 2)) for _ in range(3))
        assert f * g == g * f
        assert (f * g) * h == f * (g * h)


@pytest.mark.parametrize("name", ALGEBRA_BLUEPRINTS)
def test_criterion_09_realization_homomorphism(name):
    b = get_builtin(name)
    caps = b.capacities()
    for m in range(0, 4):
        for n in range(m, 7 - m):
            for sigma in alg.basis(b, m):
                for tau in alg.basis(b, n):
                    f, g = alg.basis_element(b, sigma), alg.basis_element(b, tau)
                    lhs = alg.polynomial_realization(b, f * g, m + n)
                    rhs = alg.poly_mul(alg.polynomial_realization(b, f, m), alg.polynomial_realization(b, g, n), caps)
                    assert lhs == rhs


QP_PREFIX = {"k-cliques:4": 17}


@pytest.mark.parametrize("name", INFINITE_BUILTINS)
def test_criterion_10_quasi_polynomial_law(name):
    b = get_builtin(name)
    N = QP_PREFIX.get(name, 18)
    prefix = profile_prefix(b, N)
    g = growth_degree(prefix)
    rf = g.form
    assert rf and rf.numerator_at_one() != 0
    qp = to_quasi_polynomial(rf)
    assert qp.degree == g.k - 1
    n0 = validate_quasi_polynomial(qp, prefix)
    assert n0 <= qp.start
    assert all(qp(n) == prefix[n] for n in range(qp.start, N + 1))


WREATH = [("trivial:2", "marked-cocliques:2"), ("trivial:3", "marked-cocliques:3"),
          ("sym:2", "k-cliques:2"), ("c2", "complete-bipartite"), ("sym:3", "k-cliques:3")]


@pytest.mark.parametrize("group,blueprint", WREATH)
def test_criterion_11_wreath_crosscheck(group, blueprint):
    rep = wreath_crosscheck(get_builtin_group(group), get_builtin(blueprint), 8)
    assert rep.passed, rep.mismatches


def test_criterion_12_large_tournament_parts_are_acyclic():
    rep = tournament_remark_check(6)
    assert rep.tournaments == sum(len(enumerate_unlabelled(n, "tournament")) for n in range(1, 7))
    assert rep.success, rep.counterexample


def test_criterion_13_unlabelled_graph_window():
    assert [len(enumerate_unlabelled(n, "graph")) for n in range(7)] == [1, 1, 2, 4, 11, 34, 156]
    # a finite window of the Rado graph realises every small graph, and nothing else
    rado = get_builtin("rado-window:12")
    for n in range(7):
        window_types = set(classes(rado, n))
        all_types = set(enumerate_unlabelled(n, "graph"))
        assert window_types <= all_types
        if n <= 4:
            assert window_types == all_types
