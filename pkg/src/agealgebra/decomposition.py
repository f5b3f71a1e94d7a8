"""Monomorphic parts and minimal monomorphic decompositions.

Finite structures are handled exactly.  Blueprints are handled through
windows (finite approximants), which is a semi-decision: reports carry a
``stabilized`` flag instead of claiming correctness outright.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .blueprint import Blueprint, _iso_type, compositions, element_labels, window_vector, blow_up
from .core import FiniteStructure, _canonical, is_acyclic_tournament, is_tournament, induced
from .errors import CapExceededError, InternalInconsistencyError, NotStabilizedError, ValidationError

Partition = tuple[tuple[int, ...], ...]

BRUTEFORCE_CAP = 10
PAIRWISE_CAP = 12


@lru_cache(maxsize=1 << 20)
def _labelled_form(vcol: tuple[int, ...], code: tuple[tuple[int, ...], ...], signature) -> bytes:
    return _canonical(vcol, code, range(len(vcol)), signature)


class SubsetForms:
    """Memoised canonical forms of induced substructures, keyed by bit mask.

    Small substructures recur across structures, so their forms are also
    shared through a bounded cache keyed by the labelled induced arrays.
    """

    SHARED_UP_TO = 6

    def __init__(self, s: FiniteStructure):
        self.s = s
        self.vcol, self.code = s.arrays
        self._cache: dict[int, bytes] = {}

    def __call__(self, mask: int) -> bytes:
        f = self._cache.get(mask)
        if f is None:
            verts = [v for v in range(self.s.size) if mask >> v & 1]
            if len(verts) <= self.SHARED_UP_TO:
                code = self.code
                f = _labelled_form(tuple(self.vcol[v] for v in verts),
                                   tuple(tuple(code[a][b] for b in verts) for a in verts), self.s.signature)
            else:
                f = _canonical(self.vcol, self.code, verts, self.s.signature)
            self._cache[mask] = f
        return f


def _mask(elems: Iterable[int]) -> int:
    m = 0
    for e in elems:
        m |= 1 << e
    return m


def _members(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def _submasks_by_size(mask: int) -> list[int]:
    subs = []
    sub = mask
    while True:
        subs.append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & mask
    subs.sort(key=lambda m: (bin(m).count("1"), m))
    return subs


def _as_partition(blocks: Iterable[Iterable[int]]) -> Partition:
    return tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0]))


def _check_subset(s: FiniteStructure, B: Iterable[int]) -> list[int]:
    B = sorted(set(B))
    if B and (B[0] < 0 or B[-1] >= s.size):
        raise ValidationError(f"subset {B} out of range")
    return B


def _is_part(n: int, bmask: int, forms: SubsetForms) -> bool:
    members = _members(bmask)
    rest = ((1 << n) - 1) & ~bmask
    layers = [[_mask(S) for S in itertools.combinations(members, m)] for m in range(1, len(members))]
    for C in _submasks_by_size(rest):
        for masks in layers:
            first = forms(C | masks[0])
            for sm in masks[1:]:
                if forms(C | sm) != first:
                    return False
    return True


def is_monomorphic_part(s: FiniteStructure, B: Iterable[int], forms: SubsetForms | None = None) -> bool:
    """True iff the type of any finite ``A`` depends only on ``A`` minus ``B`` and ``|A|``."""
    B = _check_subset(s, B)
    return _is_part(s.size, _mask(B), forms or SubsetForms(s))


def is_monomorphic_decomposition(s: FiniteStructure, blocks: Sequence[Sequence[int]],
                                 forms: SubsetForms | None = None) -> bool:
    """Check by definition: subsets with equal per-block counts are isomorphic."""
    forms = forms or SubsetForms(s)
    owner = {}
    for i, blk in enumerate(blocks):
        for e in blk:
            owner[e] = i
    if sorted(owner) != list(range(s.size)):
        raise ValidationError("blocks do not partition the domain")
    seen: dict[tuple, bytes] = {}
    for A in range(1 << s.size):
        stats = [0] * len(blocks)
        for e in _members(A):
            stats[owner[e]] += 1
        f = forms(A)
        if seen.setdefault(tuple(stats), f) != f:
            return False
    return True


def minimal_decomposition_bruteforce(s: FiniteStructure, cap: int = BRUTEFORCE_CAP) -> Partition:
    """Blocks ``R(x)``: union of all monomorphic parts containing ``x``.

    Every subset is tested against the definition, so this is exponential
    and meant as an oracle.
    """
    n = s.size
    if n > cap:
        raise CapExceededError(f"brute-force decomposition capped at {cap} elements, got {n}")
    forms = SubsetForms(s)
    R = [1 << x for x in range(n)]
    for B in range(1, 1 << n):
        if B & (B - 1) and _is_part(n, B, forms):
            for x in _members(B):
                R[x] |= B
    for x in range(n):
        if not _is_part(n, R[x], forms):
            raise InternalInconsistencyError(f"R({x}) is not a monomorphic part")
        for y in _members(R[x]):
            if R[y] != R[x]:
                raise InternalInconsistencyError("the sets R(x) do not partition the domain")
    part = _as_partition({tuple(_members(r)) for r in R})
    if n and not is_monomorphic_decomposition(s, part, forms):
        raise InternalInconsistencyError("the sets R(x) do not form a monomorphic decomposition")
    return part


def _pair_is_part(s: FiniteStructure, x: int, y: int, forms: SubsetForms) -> bool:
    vcol, code = forms.vcol, forms.code
    if vcol[x] != vcol[y]:
        return False
    rest = ((1 << s.size) - 1) & ~(1 << x | 1 << y)
    # elements seeing x and y differently; if C avoids them, x -> y fixing C is an isomorphism
    delta = _mask(c for c in range(s.size) if c != x and c != y
                  and (code[x][c] != code[y][c] or code[c][x] != code[c][y]))
    for C in _submasks_by_size(rest):
        if C & delta and forms(C | 1 << x) != forms(C | 1 << y):
            return False
    return True


def monomorphic_pair_relation(s: FiniteStructure, forms: SubsetForms | None = None) -> list[list[bool]]:
    forms = forms or SubsetForms(s)
    n = s.size
    rel = [[x == y for y in range(n)] for x in range(n)]
    for x, y in itertools.combinations(range(n), 2):
        rel[x][y] = rel[y][x] = _pair_is_part(s, x, y, forms)
    return rel


def minimal_decomposition_pairwise(s: FiniteStructure, cap: int = PAIRWISE_CAP) -> Partition:
    """Classes of ``x ~ y`` iff ``{x, y}`` is a monomorphic part.

    Subsets of monomorphic parts are monomorphic parts, so ``y`` lies in
    ``R(x)`` exactly when the pair is a part; the relation must therefore be
    an equivalence, and a failure of transitivity is reported as a bug.
    """
    n = s.size
    if n > cap:
        raise CapExceededError(f"pairwise decomposition capped at {cap} elements, got {n}")
    rel = monomorphic_pair_relation(s)
    for x, y, z in itertools.permutations(range(n), 3):
        if rel[x][y] and rel[y][z] and not rel[x][z]:
            raise InternalInconsistencyError(f"pair relation not transitive at {(x, y, z)}")
    blocks = {tuple(y for y in range(n) if rel[x][y]) for x in range(n)}
    return _as_partition(blocks)


# --- blueprints --------------------------------------------------------------

@dataclass
class DecompositionReport:
    blocks: Partition
    dimension: int
    stabilized: bool
    window: int
    infinite: tuple[bool, ...] = ()
    history: list = field(default_factory=list)

    @property
    def infinite_blocks(self) -> Partition:
        return tuple(b for b, inf in zip(self.blocks, self.infinite) if inf)

    def to_json(self) -> dict:
        return {"blocks": [list(b) for b in self.blocks], "dimension": self.dimension,
                "stabilized": self.stabilized, "window": self.window}


def _index_partition(element_part: Partition, labels, d) -> tuple[Partition, bool]:
    """Project an element partition to block indices; flag whether it was a union of index groups."""
    parent = list(range(len(d)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    exact = True
    for blk in element_part:
        idxs = sorted({labels[e][0] for e in blk})
        if sum(d[x] for x in idxs) != len(blk):
            exact = False
        for x in idxs[1:]:
            parent[find(x)] = find(idxs[0])
    groups: dict[int, list[int]] = {}
    for x in range(len(d)):
        groups.setdefault(find(x), []).append(x)
    return _as_partition(groups.values()), exact


def decomposition_of_blueprint(b: Blueprint, t_max: int = 3, cap: int = PAIRWISE_CAP) -> DecompositionReport:
    """Minimal decompositions of the windows ``t = 2..t_max``, projected to block indices."""
    if t_max < 2:
        raise ValidationError("t_max must be at least 2")
    history = []
    for t in range(2, t_max + 1):
        d = window_vector(b, t)
        if sum(d) > cap:
            raise CapExceededError(f"window t={t} of {b.name or 'blueprint'} has {sum(d)} elements (cap {cap})")
        part = minimal_decomposition_pairwise(blow_up(b, d), cap)
        history.append((t,) + _index_partition(part, element_labels(d), d))
    _, blocks, exact = history[-1]
    stabilized = exact and len(history) >= 2 and history[-2][2] and history[-2][1] == blocks
    infinite = tuple(any(b.blocks[x].infinite for x in blk) for blk in blocks)
    return DecompositionReport(blocks, sum(infinite), stabilized, t_max, infinite,
                               [(t, p) for t, p, _ in history])


@dataclass(frozen=True)
class Verdict:
    value: bool
    reason: str

    def __bool__(self):
        return self.value


def _stabilized(b: Blueprint, t_max: int) -> DecompositionReport:
    rep = decomposition_of_blueprint(b, t_max)
    if not rep.stabilized:
        raise NotStabilizedError(f"window decompositions of {b.name or 'blueprint'} did not stabilize by t={t_max}")
    return rep


def is_hereditary_minimal(b: Blueprint, t_max: int = 3) -> bool:
    """Does every union of infinite blocks keep those blocks as its minimal decomposition?"""
    rep = _stabilized(b, t_max)
    inf = rep.infinite_blocks
    for r in range(1, len(inf) + 1):
        for chosen in itertools.combinations(inf, r):
            idx = sorted(x for blk in chosen for x in blk)
            pos = {x: i for i, x in enumerate(idx)}
            expected = _as_partition([[pos[x] for x in blk] for blk in chosen])
            sub = _stabilized(b.restrict(idx), t_max)
            if sub.blocks != expected:
                return False
    return True


def is_finitely_generated(b: Blueprint, t_max: int = 3) -> Verdict:
    """Finite generation of the age algebra, decided through hereditary minimality."""
    hm = is_hereditary_minimal(b, t_max)
    if hm:
        why = "minimal decomposition is hereditary minimal, hence the age algebra is finitely generated"
    else:
        why = ("some union of infinite blocks is not minimally decomposed by those blocks, "
               "hence the age algebra is not finitely generated")
    return Verdict(hm, f"{why} (window evidence up to t={t_max})")


@dataclass
class KernelReport:
    elements: tuple[tuple[int, int], ...]
    stabilized: bool
    n_max: int

    def to_json(self) -> dict:
        return {"elements": [list(e) for e in self.elements], "stabilized": self.stabilized, "n_max": self.n_max}


def _age(b: Blueprint, caps, n_max: int) -> list[frozenset]:
    return [frozenset(_iso_type(b, d) for d in compositions(n, caps)) for n in range(n_max + 1)]


def kernel_elements(b: Blueprint, t_max: int = 3, n_max: int = 4) -> KernelReport:
    """Finite-block elements whose removal changes the age in some degree ``<= n_max``.

    Removing one element of a finite block gives the blow-up with that block's
    capacity lowered by one, so ages are compared on composition vectors.
    """
    stabilized = decomposition_of_blueprint(b, t_max).stabilized
    caps = list(window_vector(b, max(t_max, n_max)))
    full = _age(b, caps, n_max)
    out = []
    for x, blk in enumerate(b.blocks):
        if blk.infinite:
            continue
        less = caps.copy()
        less[x] -= 1
        if _age(b, less, n_max) != full:
            out.extend((x, i) for i in range(blk.cardinality))
    return KernelReport(tuple(out), stabilized, n_max)


# --- tournaments -------------------------------------------------------------

@dataclass
class TournamentRemarkReport:
    n_max: int
    tournaments: int = 0
    parts: int = 0
    unions: int = 0
    counterexample: tuple | None = None

    @property
    def success(self) -> bool:
        return self.counterexample is None


def tournament_remark_check(n_max: int = 6) -> TournamentRemarkReport:
    """Exhaustively check that monomorphic parts of size >= 4 (and unions of two) are acyclic."""
    from .core import unlabelled_structures

    if n_max > 7:
        raise CapExceededError("tournament remark check capped at 7 vertices")
    rep = TournamentRemarkReport(n_max)
    for n in range(1, n_max + 1):
        for t in unlabelled_structures(n, "tournament"):
            rep.tournaments += 1
            forms = SubsetForms(t)
            big = [B for B in range(1 << n) if bin(B).count("1") >= 4 and _is_part(n, B, forms)]
            rep.parts += len(big)
            for B in big:
                if not is_acyclic_tournament(induced(t, _members(B))):
                    rep.counterexample = (t, _members(B))
                    return rep
            for B1, B2 in itertools.combinations(big, 2):
                rep.unions += 1
                if not is_acyclic_tournament(induced(t, _members(B1 | B2))):
                    rep.counterexample = (t, _members(B1), _members(B2))
                    return rep
    return rep


def tournament_finite_generation(b: Blueprint, t_max: int = 3) -> Verdict:
    """For tournaments: finitely generated iff at most one infinite block (bounded profile)."""
    if not is_tournament(blow_up(b, window_vector(b, 2))):
        raise ValidationError(f"{b.name or 'blueprint'} does not define a tournament")
    rep = _stabilized(b, t_max)
    if rep.dimension <= 1:
        return Verdict(True, f"{rep.dimension} infinite block(s): profile bounded, age algebra finitely generated")
    return Verdict(False, f"{rep.dimension} infinite blocks: a tournament decomposition with two or more "
                          "infinite blocks is never hereditary minimal, so the age algebra is not "
                          "finitely generated")
