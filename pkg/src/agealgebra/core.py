"""Finite relational structures with unary and binary relations.

Everything else in the package reduces isomorphism questions to
:func:`canonical_form`, so this module is the oracle layer.

Canonical forms are byte strings.  Layout: two bytes of size (big endian),
then one vertex colour per position (unary memberships, then loops of the
binary relations, as a bit mask), then the off-diagonal relation codes of
the relabelled structure in row-major order.  Forms are totally ordered as
byte strings, so smaller structures sort first.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import CapExceededError, ValidationError

CanonicalForm = bytes


@dataclass(frozen=True)
class Relation:
    name: str
    arity: int
    symmetric: bool = False
    irreflexive: bool = True


@dataclass(frozen=True)
class Signature:
    relations: tuple[Relation, ...]

    def __post_init__(self):
        names = [r.name for r in self.relations]
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate relation names in {names}")
        for r in self.relations:
            if r.arity not in (1, 2):
                raise ValidationError(f"relation {r.name!r}: only arities 1 and 2 are supported")
            if r.arity == 1 and r.symmetric:
                raise ValidationError(f"unary relation {r.name!r} cannot be symmetric")

    @cached_property
    def unary(self) -> tuple[int, ...]:
        return tuple(i for i, r in enumerate(self.relations) if r.arity == 1)

    @cached_property
    def binary(self) -> tuple[int, ...]:
        return tuple(i for i, r in enumerate(self.relations) if r.arity == 2)

    def index(self, name: str) -> int:
        for i, r in enumerate(self.relations):
            if r.name == name:
                return i
        raise ValidationError(f"no relation named {name!r}")

    def to_json(self) -> list[dict]:
        return [
            {"name": r.name, "arity": r.arity, "symmetric": r.symmetric, "irreflexive": r.irreflexive}
            for r in self.relations
        ]

    @classmethod
    def from_json(cls, data: Sequence[Mapping]) -> "Signature":
        try:
            return cls(tuple(
                Relation(str(d["name"]), int(d["arity"]), bool(d.get("symmetric", False)),
                         bool(d.get("irreflexive", True)))
                for d in data
            ))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad signature entry: {exc}") from exc


GRAPH = Signature((Relation("E", 2, symmetric=True, irreflexive=True),))
DIGRAPH = Signature((Relation("A", 2, symmetric=False, irreflexive=True),))


@dataclass(frozen=True)
class FiniteStructure:
    """A structure on ``0..size-1``.

    ``relations`` is aligned with ``signature.relations``; unary tuples are
    1-tuples and symmetric relations hold both orientations of each pair.
    Use :func:`make_structure` to build one from loose data.
    """

    size: int
    signature: Signature
    relations: tuple[frozenset, ...]

    def __post_init__(self):
        if self.size < 0:
            raise ValidationError("negative size")
        if len(self.relations) != len(self.signature.relations):
            raise ValidationError("relation count does not match signature")
        for rel, tuples in zip(self.signature.relations, self.relations):
            for t in tuples:
                if len(t) != rel.arity:
                    raise ValidationError(f"{rel.name}: tuple {t} has wrong arity")
                if any(not (0 <= x < self.size) for x in t):
                    raise ValidationError(f"{rel.name}: tuple {t} out of range")
                if rel.arity == 2:
                    if rel.irreflexive and t[0] == t[1]:
                        raise ValidationError(f"{rel.name}: loop {t} in irreflexive relation")
                    if rel.symmetric and (t[1], t[0]) not in tuples:
                        raise ValidationError(f"{rel.name}: symmetric relation missing {(t[1], t[0])}")

    def tuples(self, name: str) -> frozenset:
        return self.relations[self.signature.index(name)]

    @cached_property
    def arrays(self) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]:
        """Vertex colours and pairwise relation codes as bit masks."""
        n = self.size
        sig = self.signature
        vcol = [0] * n
        code = [[0] * n for _ in range(n)]
        for bit, i in enumerate(sig.unary):
            for (x,) in self.relations[i]:
                vcol[x] |= 1 << bit
        nu = len(sig.unary)
        for bit, i in enumerate(sig.binary):
            for x, y in self.relations[i]:
                if x == y:
                    vcol[x] |= 1 << (nu + bit)
                else:
                    code[x][y] |= 1 << bit
        return tuple(vcol), tuple(tuple(row) for row in code)

    @cached_property
    def form(self) -> CanonicalForm:
        vcol, code = self.arrays
        return _canonical(vcol, code, range(self.size), self.signature)

    def relabel(self, perm: Sequence[int]) -> "FiniteStructure":
        """Image under the bijection ``i -> perm[i]``."""
        if sorted(perm) != list(range(self.size)):
            raise ValidationError("relabelling must be a permutation of the domain")
        rels = tuple(frozenset(tuple(perm[x] for x in t) for t in tuples) for tuples in self.relations)
        return FiniteStructure(self.size, self.signature, rels)

    def to_json(self) -> dict:
        out: dict[str, list] = {}
        for rel, tuples in zip(self.signature.relations, self.relations):
            if rel.symmetric:
                rows = sorted(list(t) for t in tuples if t[0] <= t[1])
            else:
                rows = sorted(list(t) for t in tuples)
            out[rel.name] = rows
        return {"signature": self.signature.to_json(), "size": self.size, "tuples": out}


def make_structure(size: int, signature: Signature,
                   tuples: Mapping[str, Iterable[Sequence[int]]] | None = None) -> FiniteStructure:
    """Build a structure, symmetrizing symmetric relations."""
    tuples = tuples or {}
    unknown = set(tuples) - {r.name for r in signature.relations}
    if unknown:
        raise ValidationError(f"unknown relations {sorted(unknown)}")
    rels = []
    for rel in signature.relations:
        got = set()
        for t in tuples.get(rel.name, ()):
            t = tuple(int(x) for x in t)
            got.add(t)
            if rel.symmetric and len(t) == 2:
                got.add((t[1], t[0]))
        rels.append(frozenset(got))
    return FiniteStructure(size, signature, tuple(rels))


def structure_from_json(data: Mapping) -> FiniteStructure:
    try:
        sig = Signature.from_json(data["signature"])
        return make_structure(int(data["size"]), sig, data.get("tuples", {}))
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"bad structure JSON: {exc}") from exc


def graph(n: int, edges: Iterable[Sequence[int]] = ()) -> FiniteStructure:
    return make_structure(n, GRAPH, {"E": edges})


def digraph(n: int, arcs: Iterable[Sequence[int]] = ()) -> FiniteStructure:
    return make_structure(n, DIGRAPH, {"A": arcs})


def is_tournament(s: FiniteStructure) -> bool:
    sig = s.signature
    if len(sig.relations) != 1 or sig.binary != (0,) or sig.relations[0].symmetric:
        return False
    arcs = s.relations[0]
    for x, y in itertools.combinations(range(s.size), 2):
        if ((x, y) in arcs) == ((y, x) in arcs):
            return False
    return all(x != y for x, y in arcs)


def is_acyclic_tournament(s: FiniteStructure) -> bool:
    """A tournament is acyclic iff it has no directed triangle."""
    arcs = s.relations[0]
    for a, b, c in itertools.combinations(range(s.size), 3):
        if ((a, b) in arcs and (b, c) in arcs and (c, a) in arcs) or \
                ((a, c) in arcs and (c, b) in arcs and (b, a) in arcs):
            return False
    return True


# --- canonical labelling ---------------------------------------------------
#
# Individualisation/refinement over ordered partitions.  Branches through
# twins (vertices whose transposition is an automorphism) are explored once,
# which keeps blow-ups of cliques and cocliques linear.

def _refine(colors: list[int], sub: list[list[int]], n: int, shift: int) -> list[int]:
    ncls = len(set(colors))
    while True:
        sigs = []
        for v in range(n):
            row = sub[v]
            c = colors
            sigs.append((c[v], tuple(sorted(
                (c[w] << shift) | (row[w] << (shift >> 1)) | sub[w][v]
                for w in range(n) if w != v))))
        ranks = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [ranks[s] for s in sigs]
        if len(ranks) == ncls:
            return new
        colors, ncls = new, len(ranks)


def _twins(vcol: list[int], sub: list[list[int]], n: int) -> list[int]:
    tid = list(range(n))
    for u in range(n):
        if tid[u] != u:
            continue
        ru = sub[u]
        for v in range(u + 1, n):
            if tid[v] != v or vcol[u] != vcol[v] or ru[v] != sub[v][u]:
                continue
            rv = sub[v]
            if all(ru[w] == rv[w] and sub[w][u] == sub[w][v] for w in range(n) if w != u and w != v):
                tid[v] = u
    return tid


def _canonical(vcol: Sequence[int], code: Sequence[Sequence[int]], verts: Iterable[int],
               signature: Signature) -> CanonicalForm:
    verts = list(verts)
    n = len(verts)
    sv = [vcol[v] for v in verts]
    sub = [[code[a][b] for b in verts] for a in verts]
    nb = max(1, len(signature.binary))
    shift = 2 * nb
    tid = _twins(sv, sub, n)
    best: list = [None]

    def search(colors: list[int]) -> None:
        if len(set(colors)) == n:
            order = sorted(range(n), key=colors.__getitem__)
            cert = tuple(sv[o] for o in order) + tuple(sub[a][b] for a in order for b in order if a != b)
            if best[0] is None or cert < best[0]:
                best[0] = cert
            return
        counts: dict[int, int] = {}
        for c in colors:
            counts[c] = counts.get(c, 0) + 1
        target = min(c for c, k in counts.items() if k > 1)
        tried = set()
        for v in range(n):
            if colors[v] == target and tid[v] not in tried:
                tried.add(tid[v])
                child = [2 * c for c in colors]
                child[v] -= 1
                search(_refine(child, sub, n, shift))

    ranks = {c: i for i, c in enumerate(sorted(set(sv)))}
    search(_refine([ranks[c] for c in sv], sub, n, shift))
    cert = best[0] or ()
    vw = max(1, (len(signature.unary) + len(signature.binary) + 7) // 8)
    cw = max(1, (len(signature.binary) + 7) // 8)
    out = bytearray(n.to_bytes(2, "big"))
    for x in cert[:n]:
        out += x.to_bytes(vw, "big")
    for x in cert[n:]:
        out += x.to_bytes(cw, "big")
    return bytes(out)


def canonical_form(s: FiniteStructure) -> CanonicalForm:
    return s.form


def subset_form(s: FiniteStructure, verts: Iterable[int]) -> CanonicalForm:
    """Canonical form of the substructure induced on ``verts``, without building it."""
    vcol, code = s.arrays
    return _canonical(vcol, code, sorted(verts), s.signature)


def structure_from_form(form: CanonicalForm, signature: Signature) -> FiniteStructure:
    """Decode a canonical form back into its (canonically labelled) structure."""
    n = int.from_bytes(form[:2], "big")
    vw = max(1, (len(signature.unary) + len(signature.binary) + 7) // 8)
    cw = max(1, (len(signature.binary) + 7) // 8)
    if len(form) != 2 + n * vw + n * (n - 1) * cw:
        raise ValidationError("form does not match signature")
    pos = 2
    vcol = []
    for _ in range(n):
        vcol.append(int.from_bytes(form[pos:pos + vw], "big"))
        pos += vw
    rels: list[set] = [set() for _ in signature.relations]
    nu = len(signature.unary)
    for x, c in enumerate(vcol):
        for bit, i in enumerate(signature.unary):
            if c >> bit & 1:
                rels[i].add((x,))
        for bit, i in enumerate(signature.binary):
            if c >> (nu + bit) & 1:
                rels[i].add((x, x))
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            c = int.from_bytes(form[pos:pos + cw], "big")
            pos += cw
            for bit, i in enumerate(signature.binary):
                if c >> bit & 1:
                    rels[i].add((a, b))
    return FiniteStructure(n, signature, tuple(frozenset(r) for r in rels))


def are_isomorphic(s: FiniteStructure, t: FiniteStructure) -> bool:
    if s.signature != t.signature:
        raise ValidationError("structures have different signatures")
    return s.size == t.size and s.form == t.form


def induced(s: FiniteStructure, subset: Iterable[int]) -> FiniteStructure:
    """Restriction to ``subset``, relabelled 0..|A|-1 in increasing order."""
    verts = sorted(set(subset))
    if verts and (verts[0] < 0 or verts[-1] >= s.size):
        raise ValidationError(f"subset {verts} out of range for size {s.size}")
    pos = {v: i for i, v in enumerate(verts)}
    rels = tuple(
        frozenset(tuple(pos[x] for x in t) for t in tuples if all(x in pos for x in t))
        for tuples in s.relations
    )
    return FiniteStructure(len(verts), s.signature, rels)


def profile_of_finite(s: FiniteStructure, n: int) -> int:
    if not 0 <= n <= s.size:
        raise ValidationError(f"n={n} out of range 0..{s.size}")
    return len({subset_form(s, c) for c in itertools.combinations(range(s.size), n)})


# --- unlabelled enumeration -------------------------------------------------

KINDS = ("graph", "digraph", "oriented", "tournament")
DEFAULT_CAPS = {"graph": 7, "tournament": 7, "oriented": 6, "digraph": 5}


def kind_signature(kind: str) -> Signature:
    if kind == "graph":
        return GRAPH
    if kind in ("digraph", "oriented", "tournament"):
        return DIGRAPH
    raise ValidationError(f"unknown kind {kind!r}; expected one of {KINDS}")


def _extensions(kind: str, m: int) -> Iterable[list[tuple[int, int]]]:
    """Ways of attaching a new vertex ``m`` to vertices ``0..m-1``."""
    if kind == "graph":
        states = ((), ((0, 1),))
    elif kind == "tournament":
        states = (((0, 1),), ((1, 0),))
    elif kind == "oriented":
        states = ((), ((0, 1),), ((1, 0),))
    else:
        states = ((), ((0, 1),), ((1, 0),), ((0, 1), (1, 0)))
    for choice in itertools.product(states, repeat=m):
        arcs = []
        for v, st in enumerate(choice):
            for a, b in st:
                arcs.append((v, m) if a == 0 else (m, v))
        yield arcs


@lru_cache(maxsize=None)
def _unlabelled(n: int, kind: str) -> tuple[CanonicalForm, ...]:
    sig = kind_signature(kind)
    if n == 0:
        return (make_structure(0, sig).form,)
    name = sig.relations[0].name
    forms = set()
    for f in _unlabelled(n - 1, kind):
        base = structure_from_form(f, sig)
        old = list(base.relations[0])
        for arcs in _extensions(kind, n - 1):
            forms.add(make_structure(n, sig, {name: old + arcs}).form)
    return tuple(sorted(forms))


def enumerate_unlabelled(n: int, kind: str = "graph", cap: int | None = None) -> list[CanonicalForm]:
    """One canonical form per isomorphism class of ``kind`` on ``n`` vertices.

    Classes on ``n`` vertices are produced by attaching a vertex in every
    possible way to each class on ``n - 1`` vertices and deduplicating.
    """
    kind_signature(kind)
    cap = DEFAULT_CAPS[kind] if cap is None else cap
    if n < 0:
        raise ValidationError("negative size")
    if n > cap:
        raise CapExceededError(f"{kind} enumeration capped at n={cap}, got {n}")
    return list(_unlabelled(n, kind))


def unlabelled_structures(n: int, kind: str = "graph", cap: int | None = None) -> list[FiniteStructure]:
    sig = kind_signature(kind)
    return [structure_from_form(f, sig) for f in enumerate_unlabelled(n, kind, cap)]


def random_structure(n: int, kind: str, rng: random.Random, density: float = 0.5) -> FiniteStructure:
    sig = kind_signature(kind)
    arcs = []
    for x, y in itertools.combinations(range(n), 2):
        if kind == "graph":
            if rng.random() < density:
                arcs.append((x, y))
        elif kind == "tournament":
            arcs.append((x, y) if rng.random() < 0.5 else (y, x))
        else:
            r = rng.random()
            if r < density / 2:
                arcs.append((x, y))
            elif r < density:
                arcs.append((y, x))
            elif kind == "digraph" and r < density + (1 - density) / 3:
                arcs += [(x, y), (y, x)]
    return make_structure(n, sig, {sig.relations[0].name: arcs})
