"""Named built-in blueprints.

Names are the single source of truth shared by tests, the CLI and the docs.
Parametrised names take the form ``name:param`` (e.g. ``k-cliques:3``).
"""

from __future__ import annotations

import itertools

from .blueprint import OMEGA, Blueprint, BlockSpec
from .core import DIGRAPH, GRAPH, Relation, Signature, make_structure
from .errors import ValidationError


def _graph_bp(name, n, edges, blocks):
    return Blueprint(make_structure(n, GRAPH, {"E": edges}), tuple(blocks), name)


def _digraph_bp(name, n, arcs, blocks):
    return Blueprint(make_structure(n, DIGRAPH, {"A": arcs}), tuple(blocks), name)


def clique() -> Blueprint:
    return _graph_bp("clique", 1, [], [BlockSpec(OMEGA, "complete")])


def coclique() -> Blueprint:
    return _graph_bp("coclique", 1, [], [BlockSpec(OMEGA, "empty")])


def k_cliques(k: int) -> Blueprint:
    if k < 1:
        raise ValidationError("k-cliques needs k >= 1")
    return _graph_bp(f"k-cliques:{k}", k, [], [BlockSpec(OMEGA, "complete")] * k)


def clique_plus_coclique() -> Blueprint:
    return _graph_bp("clique-plus-coclique", 2, [], [BlockSpec(OMEGA, "complete"), BlockSpec(OMEGA, "empty")])


def wheel_plus_coclique() -> Blueprint:
    """Index 0 is the centre, 1 the leaves, 2 the independent set."""
    return _graph_bp("wheel-plus-coclique", 3, [(0, 1)],
                     [BlockSpec(1, "empty"), BlockSpec(OMEGA, "empty"), BlockSpec(OMEGA, "empty")])


def complete_bipartite() -> Blueprint:
    return _graph_bp("complete-bipartite", 2, [(0, 1)], [BlockSpec(OMEGA, "empty")] * 2)


def c3_chains() -> Blueprint:
    return _digraph_bp("c3-chains", 3, [(0, 1), (1, 2), (2, 0)], [BlockSpec(OMEGA, "chain")] * 3)


def chain() -> Blueprint:
    return _digraph_bp("chain", 1, [], [BlockSpec(OMEGA, "chain")])


def chain_plus_point() -> Blueprint:
    """A single point dominating an infinite chain."""
    return _digraph_bp("chain-plus-point", 2, [(0, 1)], [BlockSpec(1, "chain"), BlockSpec(OMEGA, "chain")])


def marked_cocliques(k: int) -> Blueprint:
    """k infinite cocliques told apart by unary marks (trivial group)."""
    sig = Signature(tuple(Relation(f"u{i}", 1) for i in range(k)))
    t = make_structure(k, sig, {f"u{i}": [(i,)] for i in range(k)})
    return Blueprint(t, (BlockSpec(OMEGA, "empty"),) * k, f"marked-cocliques:{k}")


def qsym_blueprint(k: int) -> Blueprint:
    """Lexicographic sum of k infinite antichains along the chain 0 < ... < k-1."""
    arcs = list(itertools.combinations(range(k), 2))
    return _digraph_bp(f"qsym-blueprint:{k}", k, arcs, [BlockSpec(OMEGA, "empty")] * k)


def noncm_blueprint() -> Blueprint:
    """Blocks 0,1,2 whose only local symmetries are the swap of points of blocks 0 and 1."""
    sig = Signature((Relation("u", 1), Relation("r", 2)))
    t = make_structure(3, sig, {"u": [(0,), (1,)], "r": [(0, 1), (0, 2)]})
    return Blueprint(t, (BlockSpec(OMEGA, "empty"),) * 3, "noncm-blueprint")


def clique_plus_point() -> Blueprint:
    """Infinite clique with one isolated vertex (a kernel element)."""
    return _graph_bp("clique-plus-point", 2, [], [BlockSpec(OMEGA, "complete"), BlockSpec(1, "empty")])


def matching_window(t: int) -> Blueprint:
    return _graph_bp(f"matching-window:{t}", t, [], [BlockSpec(2, "complete")] * t)


def path_window(t: int) -> Blueprint:
    return _graph_bp(f"path-window:{t}", t, [(i, i + 1) for i in range(t - 1)], [BlockSpec(1, "empty")] * t)


def rado_window(t: int) -> Blueprint:
    """First ``t`` vertices of the BIT model: i < j adjacent iff bit i of j is set."""
    edges = [(i, j) for i in range(t) for j in range(i + 1, t) if j >> i & 1]
    return _graph_bp(f"rado-window:{t}", t, edges, [BlockSpec(1, "empty")] * t)


_FIXED = {
    "clique": clique,
    "coclique": coclique,
    "clique-plus-coclique": clique_plus_coclique,
    "wheel-plus-coclique": wheel_plus_coclique,
    "complete-bipartite": complete_bipartite,
    "c3-chains": c3_chains,
    "chain": chain,
    "chain-plus-point": chain_plus_point,
    "noncm-blueprint": noncm_blueprint,
    "clique-plus-point": clique_plus_point,
}

_PARAM = {
    "k-cliques": k_cliques,
    "marked-cocliques": marked_cocliques,
    "qsym-blueprint": qsym_blueprint,
    "matching-window": matching_window,
    "path-window": path_window,
    "rado-window": rado_window,
}

# Infinite built-ins at the parameters used by the test and check suites.
INFINITE_BUILTINS = (
    "clique", "coclique", "k-cliques:2", "k-cliques:3", "k-cliques:4", "clique-plus-coclique",
    "wheel-plus-coclique", "complete-bipartite", "c3-chains", "chain", "chain-plus-point",
    "marked-cocliques:2", "marked-cocliques:3", "qsym-blueprint:2", "qsym-blueprint:3",
    "noncm-blueprint", "clique-plus-point",
)

TOURNAMENT_BUILTINS = ("c3-chains", "chain", "chain-plus-point")


def builtin_names() -> list[str]:
    return sorted(_FIXED) + [f"{p}:<int>" for p in sorted(_PARAM)]


def get_builtin(name: str) -> Blueprint:
    if name in _FIXED:
        return _FIXED[name]()
    base, _, arg = name.partition(":")
    if base in _PARAM and arg:
        try:
            k = int(arg)
        except ValueError:
            raise ValidationError(f"bad parameter in {name!r}") from None
        if k < 1:
            raise ValidationError(f"parameter must be positive in {name!r}")
        return _PARAM[base](k)
    raise ValidationError(f"unknown built-in blueprint {name!r}")
