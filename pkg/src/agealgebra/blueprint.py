"""Infinite structures presented as template blow-ups.

A blueprint is a template structure on block indices ``X`` together with
one block per index.  A composition vector ``d`` picks ``d[x]`` elements
from block ``x``; the blow-up is the finite structure on those elements.
Cross-block tuples copy the template, within-block tuples follow the
block's inner kind, and unary marks apply to whole blocks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Mapping, Sequence, Union

from .core import CanonicalForm, FiniteStructure, Signature, make_structure, structure_from_json
from .errors import ValidationError

OMEGA = "omega"
INNER_KINDS = ("empty", "complete", "chain")

Cardinality = Union[int, str]


@dataclass(frozen=True)
class BlockSpec:
    cardinality: Cardinality = OMEGA
    inner: str = "empty"

    def __post_init__(self):
        if self.cardinality != OMEGA and (not isinstance(self.cardinality, int) or self.cardinality < 1):
            raise ValidationError(f"block cardinality must be a positive int or {OMEGA!r}")
        if self.inner not in INNER_KINDS:
            raise ValidationError(f"inner kind must be one of {INNER_KINDS}")

    @property
    def infinite(self) -> bool:
        return self.cardinality == OMEGA

    def capacity(self, t: int | None = None) -> int | None:
        """Finite capacity, or ``t`` (None = unbounded) for an infinite block."""
        return t if self.infinite else self.cardinality


@dataclass(frozen=True)
class Blueprint:
    template: FiniteStructure
    blocks: tuple[BlockSpec, ...]
    name: str = ""

    def __post_init__(self):
        if self.template.size < 1:
            raise ValidationError("blueprint needs at least one block index")
        if len(self.blocks) != self.template.size:
            raise ValidationError("one BlockSpec per template index is required")
        sig = self.template.signature
        directed = any(not sig.relations[i].symmetric for i in sig.binary)
        if any(b.inner == "chain" and b.capacity(2) > 1 for b in self.blocks) and not directed:
            raise ValidationError("chain blocks need a non-symmetric binary relation")

    @property
    def signature(self) -> Signature:
        return self.template.signature

    @property
    def width(self) -> int:
        return len(self.blocks)

    @cached_property
    def infinite_indices(self) -> tuple[int, ...]:
        return tuple(x for x, b in enumerate(self.blocks) if b.infinite)

    @property
    def is_infinite(self) -> bool:
        return bool(self.infinite_indices)

    def capacities(self, t: int | None = None) -> tuple[int | None, ...]:
        return tuple(b.capacity(t) for b in self.blocks)

    def restrict(self, indices: Sequence[int]) -> "Blueprint":
        """Sub-blueprint on the given template indices (relabelled in order)."""
        from .core import induced

        idx = sorted(set(indices))
        return Blueprint(induced(self.template, idx), tuple(self.blocks[i] for i in idx),
                         f"{self.name}|{','.join(map(str, idx))}" if self.name else "")

    def with_capacity(self, x: int, cardinality: Cardinality) -> "Blueprint":
        blocks = list(self.blocks)
        blocks[x] = BlockSpec(cardinality, blocks[x].inner)
        return Blueprint(self.template, tuple(blocks), self.name)

    def to_json(self) -> dict:
        return {
            "template": self.template.to_json(),
            "blocks": [{"cardinality": b.cardinality, "inner": b.inner} for b in self.blocks],
        }

    def __repr__(self):
        return f"Blueprint({self.name or 'anonymous'}, width={self.width})"


def blueprint_from_json(data: Mapping, name: str = "") -> Blueprint:
    try:
        template = structure_from_json(data["template"])
        blocks = tuple(BlockSpec(b.get("cardinality", OMEGA), b.get("inner", "empty")) for b in data["blocks"])
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValidationError(f"bad blueprint JSON: {exc}") from exc
    return Blueprint(template, blocks, name)


def check_vector(b: Blueprint, d: Sequence[int]) -> tuple[int, ...]:
    d = tuple(int(v) for v in d)
    if len(d) != b.width:
        raise ValidationError(f"vector {d} has length {len(d)}, blueprint has {b.width} blocks")
    for v, blk in zip(d, b.blocks):
        if v < 0:
            raise ValidationError(f"negative entry in {d}")
        if not blk.infinite and v > blk.cardinality:
            raise ValidationError(f"vector {d} exceeds block capacity {blk.cardinality}")
    return d


def element_labels(d: Sequence[int]) -> list[tuple[int, int]]:
    """Blow-up element ``k`` is the pair ``(x, i)`` at position ``k`` of this list."""
    return [(x, i) for x, dx in enumerate(d) for i in range(dx)]


def blow_up(b: Blueprint, d: Sequence[int]) -> FiniteStructure:
    d = check_vector(b, d)
    labels = element_labels(d)
    sig = b.signature
    tmpl = b.template
    out: dict[str, list] = {}
    for ri, rel in enumerate(sig.relations):
        rows = []
        tuples = tmpl.relations[ri]
        if rel.arity == 1:
            for k, (x, _) in enumerate(labels):
                if (x,) in tuples:
                    rows.append((k,))
        else:
            for k, (x, i) in enumerate(labels):
                for m, (y, j) in enumerate(labels):
                    if x != y:
                        if (x, y) in tuples:
                            rows.append((k, m))
                    elif k == m:
                        if (x, x) in tuples:
                            rows.append((k, k))
                    else:
                        inner = b.blocks[x].inner
                        if inner == "complete" or (inner == "chain" and not rel.symmetric and i < j):
                            rows.append((k, m))
        out[rel.name] = rows
    return make_structure(len(labels), sig, out)


@lru_cache(maxsize=None)
def _iso_type(b: Blueprint, d: tuple[int, ...]) -> CanonicalForm:
    return blow_up(b, d).form


def iso_type(b: Blueprint, d: Sequence[int]) -> CanonicalForm:
    return _iso_type(b, check_vector(b, d))


def compositions(n: int, caps: Sequence[int | None]) -> Iterator[tuple[int, ...]]:
    """Vectors of length ``len(caps)`` with sum ``n`` and ``d[x] <= caps[x]``, in lex order."""
    k = len(caps)
    if k == 0:
        if n == 0:
            yield ()
        return
    suffix = [0] * (k + 1)
    for x in range(k - 1, -1, -1):
        c = caps[x]
        suffix[x] = None if (c is None or suffix[x + 1] is None) else c + suffix[x + 1]

    def rec(x: int, left: int, acc: list[int]):
        if x == k - 1:
            c = caps[x]
            if c is None or left <= c:
                yield tuple(acc + [left])
            return
        top = left if caps[x] is None else min(left, caps[x])
        rest = suffix[x + 1]
        for v in range(top + 1):
            if rest is not None and left - v > rest:
                continue
            yield from rec(x + 1, left - v, acc + [v])

    yield from rec(0, n, [])


def vectors(b: Blueprint, n: int) -> Iterator[tuple[int, ...]]:
    return compositions(n, b.capacities())


@lru_cache(maxsize=None)
def classes(b: Blueprint, n: int) -> dict[CanonicalForm, tuple[tuple[int, ...], ...]]:
    """Iso type -> all capacity-respecting vectors of degree ``n`` having it (lex order)."""
    out: dict[CanonicalForm, list] = {}
    for d in vectors(b, n):
        out.setdefault(_iso_type(b, d), []).append(d)
    return {f: tuple(vs) for f, vs in sorted(out.items())}


def profile(b: Blueprint, n: int) -> int:
    if n < 0:
        raise ValidationError("negative degree")
    return len(classes(b, n))


def profile_prefix(b: Blueprint, N: int) -> list[int]:
    return [profile(b, n) for n in range(N + 1)]


def count_vectors(b: Blueprint, n: int) -> int:
    return sum(1 for _ in vectors(b, n))


def window_vector(b: Blueprint, t: int) -> tuple[int, ...]:
    return tuple(blk.capacity(t) for blk in b.blocks)


def window(b: Blueprint, t: int) -> FiniteStructure:
    """Finite approximant: infinite blocks cut to ``t`` elements, finite blocks kept."""
    if t < 0:
        raise ValidationError("negative window size")
    return blow_up(b, window_vector(b, t))


def shape(d: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted((v for v in d if v), reverse=True))


def shape_preservation_threshold(b: Blueprint, N: int) -> int | None:
    """Least fatness ``d >= 1`` below ``N`` at which isomorphic fat vectors share a shape.

    A vector is ``d``-fat when it fills every finite block and has at least
    ``d`` elements in every infinite block.  Returns ``None`` if no ``d <= N``
    works with vectors of total size ``<= N``.
    """
    base = sum(blk.cardinality for blk in b.blocks if not blk.infinite)
    inf = b.infinite_indices
    for fat in range(1, N + 1):
        ok = True
        for n in range(base + fat * len(inf), N + 1):
            seen: dict[CanonicalForm, tuple[int, ...]] = {}
            extra = n - base - fat * len(inf)
            for e in compositions(extra, [None] * len(inf)):
                d = [blk.cardinality if not blk.infinite else 0 for blk in b.blocks]
                for x, v in zip(inf, e):
                    d[x] = fat + v
                f = _iso_type(b, tuple(d))
                sh = shape(d)
                if seen.setdefault(f, sh) != sh:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return fat
    return None


def template_automorphisms(b: Blueprint) -> list[tuple[int, ...]]:
    """Permutations of block indices preserving template and block specs (brute force)."""
    t = b.template
    out = []
    for perm in itertools.permutations(range(b.width)):
        if all(b.blocks[x] == b.blocks[perm[x]] for x in range(b.width)) and t.relabel(perm) == t:
            out.append(perm)
    return out
