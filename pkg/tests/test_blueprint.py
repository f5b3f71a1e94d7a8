import itertools
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from agealgebra.blueprint import (OMEGA, Blueprint, BlockSpec, blow_up, blueprint_from_json, classes,
                                  compositions, count_vectors, iso_type, profile_prefix,
                                  shape_preservation_threshold, template_automorphisms, window)
from agealgebra.core import GRAPH, are_isomorphic, graph, induced, make_structure, profile_of_finite
from agealgebra.errors import ValidationError
from agealgebra.library import INFINITE_BUILTINS, builtin_names, get_builtin

from oracles import partitions_at_most


def test_clique_blow_up_is_complete():
    s = blow_up(get_builtin("clique"), (4,))
    assert len(s.tuples("E")) == 4 * 3


def test_clique_plus_coclique_profile():
    assert profile_prefix(get_builtin("clique-plus-coclique"), 12) == [1] + list(range(1, 13))


def test_wheel_profile():
    assert profile_prefix(get_builtin("wheel-plus-coclique"), 12) == [1] + list(range(1, 13))


def test_c3_chains_profile():
    assert profile_prefix(get_builtin("c3-chains"), 5) == [1, 1, 1, 2, 2, 3]


def test_marked_cocliques_profile():
    assert profile_prefix(get_builtin("marked-cocliques:3"), 8) == [comb(n + 2, 2) for n in range(9)]


def test_chain_blocks_need_direction():
    t = make_structure(1, GRAPH, {})
    with pytest.raises(ValidationError):
        Blueprint(t, (BlockSpec(OMEGA, "chain"),))


def test_bad_vectors():
    b = get_builtin("wheel-plus-coclique")
    with pytest.raises(ValidationError):
        iso_type(b, (2, 0, 0))
    with pytest.raises(ValidationError):
        iso_type(b, (0, 1))
    with pytest.raises(ValidationError):
        iso_type(b, (0, -1, 1))


@given(st.integers(0, 7), st.lists(st.one_of(st.none(), st.integers(0, 4)), min_size=0, max_size=4))
@settings(max_examples=200, deadline=None)
def test_compositions_match_product_filter(n, caps):
    expect = [d for d in itertools.product(*[range((c if c is not None else n) + 1) for c in caps])
              if sum(d) == n]
    assert list(compositions(n, caps)) == sorted(expect)


def test_vector_count_is_stars_and_bars():
    b = get_builtin("marked-cocliques:3")
    assert [count_vectors(b, n) for n in range(6)] == [comb(n + 2, 2) for n in range(6)]


@pytest.mark.parametrize("name", ["clique-plus-coclique", "wheel-plus-coclique", "c3-chains", "noncm-blueprint"])
def test_profile_agrees_with_window_enumeration(name):
    """Profile from composition vectors equals subset enumeration in a finite window."""
    b = get_builtin(name)
    w = window(b, 4)
    for n in range(5):
        assert len(classes(b, n)) == profile_of_finite(w, n)


def test_blow_up_restriction_is_blow_up():
    b = get_builtin("c3-chains")
    big = blow_up(b, (2, 2, 2))
    small = blow_up(b, (1, 2, 0))
    assert are_isomorphic(induced(big, [0, 2, 3]), small)


def test_json_round_trip():
    for name in INFINITE_BUILTINS:
        b = get_builtin(name)
        c = blueprint_from_json(b.to_json(), name)
        assert c == b


def test_shape_threshold():
    for name in ("clique", "k-cliques:3", "clique-plus-coclique", "wheel-plus-coclique"):
        assert shape_preservation_threshold(get_builtin(name), 8) == 1


def test_template_automorphisms():
    assert len(template_automorphisms(get_builtin("k-cliques:3"))) == 6
    assert len(template_automorphisms(get_builtin("c3-chains"))) == 3
    assert len(template_automorphisms(get_builtin("marked-cocliques:3"))) == 1


def test_k_cliques_small():
    assert profile_prefix(get_builtin("k-cliques:3"), 9) == [partitions_at_most(n, 3) for n in range(10)]


def test_builtin_names():
    names = builtin_names()
    assert "clique" in names and "k-cliques:<int>" in names
    with pytest.raises(ValidationError):
        get_builtin("k-cliques:zero")
    with pytest.raises(ValidationError):
        get_builtin("no-such-thing")


def test_path_window_is_path():
    assert are_isomorphic(window(get_builtin("path-window:4"), 1), graph(4, [(0, 1), (1, 2), (2, 3)]))
