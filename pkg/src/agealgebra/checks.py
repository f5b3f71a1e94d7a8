"""Desk-scale invariant suite behind ``agealgebra check``.

Every check recomputes a quantity along two independent routes (or against a
closed-form count) and reports a pass/fail line.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from math import comb
from typing import Callable

from . import algebra as alg
from .blueprint import profile_prefix
from .core import enumerate_unlabelled, random_structure, unlabelled_structures
from .decomposition import (minimal_decomposition_bruteforce, minimal_decomposition_pairwise,
                            tournament_remark_check)
from .groupoid import (WREATH_PAIRS, close, cyclic_group, get_builtin_groupoid, get_symmetry, orbit_basis,
                       orbits_cycle_index, orbits_direct, symmetric_group, wreath_crosscheck)
from .library import INFINITE_BUILTINS, get_builtin
from .series import expand, fit_rational, growth_degree, to_quasi_polynomial, validate_quasi_polynomial


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail,
                "seconds": round(self.seconds, 3)}


def _unlabelled(cfg):
    got = [len(enumerate_unlabelled(n, "graph")) for n in range(6)]
    return got == [1, 1, 2, 4, 11, 34], f"graph classes n=0..5: {got}"


def _decomposition_oracles(cfg):
    rng = random.Random(cfg["seed"])
    structures = [s for n in range(1, 6) for kind in ("graph", "tournament") for s in unlabelled_structures(n, kind)]
    structures += [random_structure(rng.randint(1, 8), rng.choice(["graph", "digraph"]), rng) for _ in range(20)]
    bad = sum(minimal_decomposition_bruteforce(s) != minimal_decomposition_pairwise(s) for s in structures)
    return bad == 0, f"{len(structures)} structures, {bad} mismatches"


def _e1_injective(cfg):
    N = min(cfg["N"], 6)
    deficient = [(name, n) for name in INFINITE_BUILTINS for n in range(N + 1)
                 if alg.e1_rank(get_builtin(name), n) != len(alg.basis(get_builtin(name), n))]
    return not deficient, f"degrees 0..{N}, deficiencies: {deficient or 'none'}"


def _algebra_laws(cfg):
    rng = random.Random(cfg["seed"])
    bad = 0
    for name in ("clique-plus-coclique", "wheel-plus-coclique", "c3-chains", "k-cliques:3"):
        b = get_builtin(name)
        caps = b.capacities()
        for _ in range(5):
            f, g, h = (alg.basis_element(b, rng.choice(alg.basis(b, rng.randint(0, 2)).types)) for _ in range(3))
            bad += f * g != g * f
            bad += (f * g) * h != f * (g * h)
            lhs = alg.polynomial_realization(b, f * g)
            rhs = alg.poly_mul(alg.polynomial_realization(b, f), alg.polynomial_realization(b, g), caps)
            bad += lhs != rhs
    return bad == 0, f"{bad} law violations"


def _series_round_trip(cfg):
    bad = []
    for name in INFINITE_BUILTINS:
        p = profile_prefix(get_builtin(name), 16)
        g = growth_degree(p)
        if g.form is None or expand(g.form, 16) != p:
            bad.append(name)
            continue
        qp = to_quasi_polynomial(g.form)
        if qp.degree != g.k - 1 or validate_quasi_polynomial(qp, p) > qp.start:
            bad.append(name)
    return not bad, f"failures: {bad or 'none'}"


def _two_forms(cfg):
    a = fit_rational(profile_prefix(get_builtin("clique-plus-coclique"), 20), None, denominator=(1, 1))
    b = fit_rational(profile_prefix(get_builtin("clique-plus-coclique"), 20), 2)
    ok = bool(a) and bool(b) and a.numerator == (1, -1, 1) and b.numerator == (1, 0, 0, 1)
    return ok and expand(a, 30) == expand(b, 30), f"{a} and {b}"


def _wreath(cfg):
    bad = [s for s, bn in WREATH_PAIRS.items() if not wreath_crosscheck(get_symmetry(s), get_builtin(bn), 6).passed]
    return not bad, f"{len(WREATH_PAIRS)} pairs to n=6, failures: {bad or 'none'}"


def _orbit_routes(cfg):
    bad = 0
    for G in (symmetric_group(3), cyclic_group(3), cyclic_group(4)):
        for n in range(7):
            bad += orbits_direct(G, n) != orbits_cycle_index(G, n)
            bad += len(orbit_basis(G.as_groupoid(), n)) != orbits_direct(G, n)
    return bad == 0, f"{bad} disagreements"


def _qsym(cfg):
    bad = []
    for k in (2, 3):
        g = get_builtin_groupoid(f"qsym:{k}")
        dims = [len(orbit_basis(g, n)) for n in range(9)]
        expect = [1] + [sum(comb(n - 1, j - 1) for j in range(1, k + 1)) for n in range(1, 9)]
        if dims != expect:
            bad.append(k)
    return not bad, f"failures: {bad or 'none'}"


def _closure_idempotent(cfg):
    g = get_builtin_groupoid("noncm")
    return close(3, g.elements).elements == g.elements and len(close(3)) == 8, f"|noncm closure| = {len(g)}"


def _tournament_parts_acyclic(cfg):
    rep = tournament_remark_check(5)
    return rep.success, f"{rep.tournaments} tournaments, {rep.parts} large parts, {rep.unions} unions"


CHECKS: dict[str, Callable] = {
    "unlabelled-graphs": _unlabelled,
    "decomposition-oracles": _decomposition_oracles,
    "e1-injective": _e1_injective,
    "algebra-laws": _algebra_laws,
    "series-round-trip": _series_round_trip,
    "two-displayed-forms": _two_forms,
    "wreath-pairs": _wreath,
    "orbit-count-routes": _orbit_routes,
    "qsym-dimensions": _qsym,
    "closure-idempotent": _closure_idempotent,
    "tournament-parts-acyclic": _tournament_parts_acyclic,
}


def run_checks(N: int = 6, seed: int = 0, only: list[str] | None = None) -> list[CheckResult]:
    cfg = {"N": N, "seed": seed}
    out = []
    for name, fn in CHECKS.items():
        if only and name not in only:
            continue
        t = time.perf_counter()
        try:
            ok, detail = fn(cfg)
        except Exception as exc:  # a crash in a check is a violation, not a tool failure
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, bool(ok), detail, time.perf_counter() - t))
    return out
