import pytest
from hypothesis import given, settings, strategies as st

from agealgebra.errors import CapExceededError, ValidationError
from agealgebra.groupoid import (PartialInjection, PermutationGroup, close, cyclic_group, generation_probe,
                                 get_builtin_group, get_builtin_groupoid, group_multiset_orbits,
                                 groupoid_from_json, hilbert_prefix, minimal_generation_degree, orbit_basis,
                                 orbits_cycle_index, orbits_direct, symmetric_group, wreath_crosscheck)
from agealgebra.library import get_builtin

from oracles import brute_group_orbits

P = PartialInjection


def test_partial_injection_validation():
    with pytest.raises(ValidationError):
        P(((1, 2), (1, 3)))
    with pytest.raises(ValidationError):
        P(((1, 2), (3, 2)))
    with pytest.raises(ValidationError):
        P(((0, 1),))


def test_composition_needs_matching_image():
    f, g = P(((2, 3),)), P(((1, 2),))
    assert f.after(g) == P(((1, 3),))
    with pytest.raises(ValidationError):
        g.after(f)


def test_action_moves_exponents():
    assert P(((1, 2), (2, 1))).act((3, 0, 1)) == (0, 3, 0)
    assert P(((1, 2),)).act((2, 0)) == (0, 2)


def test_trivial_closure_is_identities():
    g = close(3)
    assert len(g) == 8 and g.is_closed()


def test_swap_closure_on_two_points():
    g = close(2, [P(((1, 2), (2, 1)))])
    # 4 identities, the swap, and the two restrictions 1->2, 2->1
    assert len(g) == 7


def test_noncm_closure():
    g = get_builtin_groupoid("noncm")
    assert len(g) == 10 and g.is_closed()
    assert P(((2, 1),)) in g


@pytest.mark.parametrize("name", ["noncm", "qsym:3", "sym:3", "c2", "cyclic:4"])
def test_closure_idempotent(name):
    g = get_builtin_groupoid(name)
    assert close(g.k, g.elements).elements == g.elements


def test_closure_cap():
    with pytest.raises(CapExceededError):
        close(7)
    with pytest.raises(ValidationError):
        close(2, [P(((1, 3),))])


def test_trivial_dimensions():
    assert hilbert_prefix(get_builtin_groupoid("trivial:2"), 4) == [1, 2, 3, 4, 5]


def test_noncm_dimensions():
    assert hilbert_prefix(get_builtin_groupoid("noncm"), 3) == [1, 2, 5, 9]


def test_qsym_and_sym_small_degrees():
    assert len(orbit_basis(get_builtin_groupoid("qsym:2"), 3)) == 3
    assert len(orbit_basis(get_builtin_groupoid("sym:3"), 4)) == 4


@pytest.mark.parametrize("name", ["sym:3", "cyclic:3", "c2", "sym:4", "cyclic:4", "trivial:3"])
def test_group_counts_three_routes(name):
    G = get_builtin_group(name)
    for n in range(7):
        assert orbits_direct(G, n) == orbits_cycle_index(G, n) == brute_group_orbits(G.generators, G.k, n)


def test_group_count_examples():
    assert group_multiset_orbits(symmetric_group(3), 4) == 4
    assert group_multiset_orbits(PermutationGroup(2, ((2, 1),)), 2) == 2
    assert group_multiset_orbits(cyclic_group(3), 3) == 4


@pytest.mark.parametrize("name", ["sym:3", "cyclic:3", "c2"])
def test_group_as_groupoid_agrees_with_group(name):
    G = get_builtin_group(name)
    g = get_builtin_groupoid(name)
    assert hilbert_prefix(g, 6) == [group_multiset_orbits(G, n) for n in range(7)]


@given(st.sampled_from(["noncm", "qsym:3", "sym:3", "cyclic:3", "qsym:2"]), st.integers(0, 5))
@settings(max_examples=40, deadline=None)
def test_orbits_are_closed_under_partial_maps(name, n):
    g = get_builtin_groupoid(name)
    doms = g.by_domain()
    for orbit in orbit_basis(g, n).orbits:
        members = set(orbit)
        for m in orbit:
            supp = frozenset(i + 1 for i, e in enumerate(m) if e)
            for s in doms.get(supp, ()):
                assert s.act(m) in members


@pytest.mark.parametrize("sym,bp", [("trivial:3", "marked-cocliques:3"), ("sym:3", "k-cliques:3"),
                                    ("c2", "complete-bipartite"), ("qsym:2", "qsym-blueprint:2"),
                                    ("noncm", "noncm-blueprint")])
def test_wreath_pairs(sym, bp):
    obj = get_builtin_group(sym) if sym.split(":")[0] in ("sym", "trivial", "c2") else get_builtin_groupoid(sym)
    assert wreath_crosscheck(obj, get_builtin(bp), 8).passed


def test_generation_probe_examples():
    rows = generation_probe(get_builtin_groupoid("trivial:2"), 1, 6)
    assert all(r.gap == 0 for r in rows)
    rows = generation_probe(get_builtin_groupoid("sym:2"), 1, 4)
    assert rows[2].gap == 1
    assert minimal_generation_degree(get_builtin_groupoid("sym:3"), 8) == 3
    assert minimal_generation_degree(get_builtin_groupoid("qsym:2"), 8) == 3
    with pytest.raises(ValidationError):
        generation_probe(get_builtin_groupoid("c2"), 5, 3)


def test_json_round_trip():
    g = get_builtin_groupoid("noncm")
    assert groupoid_from_json(g.to_json()) == g
    with pytest.raises(ValidationError):
        groupoid_from_json({"generators": []})


def test_unknown_names():
    for bad in ("nope", "qsym", "sym:x", "sym:0"):
        with pytest.raises(ValidationError):
            get_builtin_groupoid(bad)


def test_noncm_needs_a_cubic_generator():
    # x1^2 x2 and x1 x2^2 are separate orbits; products of lower invariants only reach their sum
    rows = generation_probe(get_builtin_groupoid("noncm"), 2, 3)
    assert (rows[3].spanned, rows[3].dimension) == (8, 9)
    assert minimal_generation_degree(get_builtin_groupoid("noncm"), 6) == 3
