"""Permutation groupoids, permutation groups and monomial-orbit invariants.

Points are ``1..k``.  A monomial is an exponent vector ``m`` of length ``k``
(position ``i-1`` holds the exponent of ``x_i``); a partial injection ``s``
moves ``m`` only when its domain is exactly the support of ``m``.  Since
closed groupoids contain all restrictions, this is the same as asking the
domain to contain the support.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

from .algebra import GenerationRow
from .blueprint import Blueprint, compositions, profile
from .errors import CapExceededError, InternalInconsistencyError, ValidationError
from .linalg import EchelonBasis

DEFAULT_CAP = 6
Exponent = tuple[int, ...]


@dataclass(frozen=True, order=True)
class PartialInjection:
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple(sorted((int(a), int(b)) for a, b in self.pairs))
        dom = [a for a, _ in pairs]
        im = [b for _, b in pairs]
        if len(set(dom)) != len(dom):
            raise ValidationError(f"{pairs} is not a function")
        if len(set(im)) != len(im):
            raise ValidationError(f"{pairs} is not injective")
        if any(v < 1 for v in dom + im):
            raise ValidationError("points are numbered from 1")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def from_map(cls, mapping: Mapping) -> "PartialInjection":
        return cls(tuple((int(a), int(b)) for a, b in mapping.items()))

    @classmethod
    def identity(cls, points: Iterable[int]) -> "PartialInjection":
        return cls(tuple((p, p) for p in points))

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(a for a, _ in self.pairs)

    @property
    def image(self) -> frozenset[int]:
        return frozenset(b for _, b in self.pairs)

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    def __call__(self, i: int) -> int:
        return self.as_dict()[i]

    def inverse(self) -> "PartialInjection":
        return PartialInjection(tuple((b, a) for a, b in self.pairs))

    def restrict(self, points: Iterable[int]) -> "PartialInjection":
        keep = set(points)
        return PartialInjection(tuple(p for p in self.pairs if p[0] in keep))

    def after(self, g: "PartialInjection") -> "PartialInjection":
        """``self o g``; defined when ``im g == dom self``."""
        if g.image != self.domain:
            raise ValidationError("composition needs im g = dom f")
        f = self.as_dict()
        return PartialInjection(tuple((a, f[b]) for a, b in g.pairs))

    def act(self, m: Exponent) -> Exponent:
        out = [0] * len(m)
        for a, b in self.pairs:
            out[b - 1] = m[a - 1]
        return tuple(out)

    def to_json(self) -> dict:
        return {"map": {str(a): b for a, b in self.pairs}}

    def __repr__(self):
        return "<" + ", ".join(f"{a}->{b}" for a, b in self.pairs) + ">"


def _subsets(points: Sequence[int]):
    for r in range(len(points) + 1):
        yield from itertools.combinations(points, r)


@dataclass(frozen=True)
class PermutationGroupoid:
    k: int
    elements: frozenset[PartialInjection]
    name: str = field(default="", compare=False)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, s):
        return s in self.elements

    def by_domain(self) -> dict[frozenset[int], list[PartialInjection]]:
        out: dict[frozenset[int], list] = {}
        for s in sorted(self.elements):
            out.setdefault(s.domain, []).append(s)
        return out

    def is_closed(self) -> bool:
        return close(self.k, self.elements).elements == self.elements

    def to_json(self) -> dict:
        gens = [s for s in sorted(self.elements) if s.pairs and any(a != b for a, b in s.pairs)]
        return {"k": self.k, "generators": [s.to_json() for s in gens]}


def close(k: int, generators: Iterable[PartialInjection] = (), cap: int = DEFAULT_CAP,
          name: str = "") -> PermutationGroupoid:
    """Least set containing all identities and the generators, closed under
    inverse, restriction and composition (``im g = dom f``)."""
    if k < 0:
        raise ValidationError("k must be nonnegative")
    if k > cap:
        raise CapExceededError(f"groupoid closure on {k} points exceeds cap {cap}")
    pts = range(1, k + 1)
    gens = list(generators)
    for g in gens:
        if not (g.domain | g.image) <= set(pts):
            raise ValidationError(f"{g} is not a partial injection of 1..{k}")
    seen: set[PartialInjection] = set()
    by_dom: dict[frozenset, set] = {}
    by_im: dict[frozenset, set] = {}
    queue = deque(PartialInjection.identity(S) for S in _subsets(list(pts)))
    queue.extend(gens)

    def push(s):
        if s not in seen:
            queue.append(s)

    while queue:
        s = queue.popleft()
        if s in seen:
            continue
        seen.add(s)
        by_dom.setdefault(s.domain, set()).add(s)
        by_im.setdefault(s.image, set()).add(s)
        push(s.inverse())
        dom = sorted(s.domain)
        for S in _subsets(dom):
            if len(S) < len(dom):
                push(s.restrict(S))
        for f in list(by_dom.get(s.image, ())):
            push(f.after(s))
        for g in list(by_im.get(s.domain, ())):
            push(s.after(g))
    return PermutationGroupoid(k, frozenset(seen), name)


# --- monomial orbits -------------------------------------------------------

def monomials(k: int, n: int) -> list[Exponent]:
    return list(compositions(n, [None] * k))


def support(m: Exponent) -> frozenset[int]:
    return frozenset(i + 1 for i, v in enumerate(m) if v)


@dataclass(frozen=True)
class MonomialOrbitBasis:
    degree: int
    orbits: tuple[tuple[Exponent, ...], ...]

    def __len__(self):
        return len(self.orbits)

    def to_json(self) -> dict:
        return {"degree": self.degree, "orbits": [[list(m) for m in o] for o in self.orbits]}


def _components(items: list[Exponent], edges) -> tuple[tuple[Exponent, ...], ...]:
    parent = {m: m for m in items}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[Exponent, list] = {}
    for m in items:
        groups.setdefault(find(m), []).append(m)
    return tuple(sorted(tuple(sorted(g)) for g in groups.values()))


def orbit_basis(g: PermutationGroupoid, n: int) -> MonomialOrbitBasis:
    if n < 0:
        raise ValidationError("negative degree")
    doms = g.by_domain()
    ms = monomials(g.k, n)
    edges = ((m, s.act(m)) for m in ms for s in doms.get(support(m), ()))
    return MonomialOrbitBasis(n, _components(ms, edges))


def hilbert_prefix(g: PermutationGroupoid, N: int) -> list[int]:
    return [len(orbit_basis(g, n)) for n in range(N + 1)]


def orbit_sum(orbit: Iterable[Exponent]) -> dict[Exponent, int]:
    return {m: 1 for m in orbit}


# --- permutation groups ----------------------------------------------------

@dataclass(frozen=True)
class PermutationGroup:
    """Generated by total permutations of ``1..k``, given as image tuples."""

    k: int
    generators: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        for p in self.generators:
            if sorted(p) != list(range(1, self.k + 1)):
                raise ValidationError(f"{p} is not a permutation of 1..{self.k}")

    def elements(self) -> list[tuple[int, ...]]:
        ident = tuple(range(1, self.k + 1))
        seen = {ident}
        queue = deque([ident])
        while queue:
            p = queue.popleft()
            for g in self.generators:
                q = tuple(g[p[i] - 1] for i in range(self.k))
                if q not in seen:
                    seen.add(q)
                    queue.append(q)
        return sorted(seen)

    def as_groupoid(self, cap: int = DEFAULT_CAP) -> PermutationGroupoid:
        gens = [PartialInjection(tuple(zip(range(1, self.k + 1), p))) for p in self.generators]
        return close(self.k, gens, cap, self.name)


def _act_perm(p: Sequence[int], m: Exponent) -> Exponent:
    out = [0] * len(m)
    for i, v in enumerate(m):
        out[p[i] - 1] = v
    return tuple(out)


def _cycle_lengths(p: Sequence[int]) -> list[int]:
    seen, out = set(), []
    for i in range(1, len(p) + 1):
        if i in seen:
            continue
        n, j = 0, i
        while j not in seen:
            seen.add(j)
            j = p[j - 1]
            n += 1
        out.append(n)
    return out


def _fixed_monomials(cycles: Sequence[int], n: int) -> int:
    """Coefficient of Z^n in prod 1/(1 - Z^c)."""
    ways = [1] + [0] * n
    for c in cycles:
        for t in range(c, n + 1):
            ways[t] += ways[t - c]
    return ways[n]


def orbits_direct(G: PermutationGroup, n: int) -> int:
    ms = monomials(G.k, n)
    edges = ((m, _act_perm(p, m)) for m in ms for p in G.generators)
    return len(_components(ms, edges))


def orbits_cycle_index(G: PermutationGroup, n: int) -> int:
    els = G.elements()
    total = sum(_fixed_monomials(_cycle_lengths(p), n) for p in els)
    q, r = divmod(total, len(els))
    if r:
        raise InternalInconsistencyError("cycle-index average is not an integer")
    return q


def group_multiset_orbits(G: PermutationGroup, n: int) -> int:
    """Orbits of G on degree-n monomials, counted two ways that must agree."""
    a, b = orbits_direct(G, n), orbits_cycle_index(G, n)
    if a != b:
        raise InternalInconsistencyError(f"orbit counts disagree in degree {n}: direct {a}, cycle index {b}")
    return a


# --- cross-checks and generation -------------------------------------------

Symmetry = Union[PermutationGroup, PermutationGroupoid]


def orbit_counts(obj: Symmetry, N: int) -> list[int]:
    if isinstance(obj, PermutationGroup):
        return [group_multiset_orbits(obj, n) for n in range(N + 1)]
    return hilbert_prefix(obj, N)


@dataclass
class WreathReport:
    orbit_counts: list[int]
    profile: list[int]
    mismatches: list[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {"orbit_counts": self.orbit_counts, "profile": self.profile,
                "mismatches": self.mismatches, "passed": self.passed}


def wreath_crosscheck(obj: Symmetry, b: Blueprint, N: int) -> WreathReport:
    oc = orbit_counts(obj, N)
    pr = [profile(b, n) for n in range(N + 1)]
    return WreathReport(oc, pr, [n for n in range(N + 1) if oc[n] != pr[n]])


def generation_probe(g: PermutationGroupoid, D: int, N: int) -> list[GenerationRow]:
    """Span, per degree, of products of orbit sums of degree <= D (inside K[X])."""
    if D > N:
        raise ValidationError("need D <= N")
    index = [{m: i for i, m in enumerate(monomials(g.k, n))} for n in range(N + 1)]
    gens = {j: [orbit_sum(o) for o in orbit_basis(g, j).orbits] for j in range(1, D + 1)}
    spans: list[list[dict[Exponent, int]]] = [[{(0,) * g.k: 1}]]
    rows = [GenerationRow(0, 1, 1)]
    for n in range(1, N + 1):
        dim = len(orbit_basis(g, n))
        eb = EchelonBasis()
        polys: list[dict[Exponent, int]] = []
        for j in range(1, min(D, n) + 1):
            for f in gens[j]:
                for v in spans[n - j]:
                    w: dict[Exponent, int] = {}
                    for a, ca in f.items():
                        for e, ce in v.items():
                            m = tuple(x + y for x, y in zip(a, e))
                            w[m] = w.get(m, 0) + ca * ce
                    if eb.add({index[n][m]: c for m, c in w.items()}):
                        polys.append(w)
        if len(eb) > dim:
            raise InternalInconsistencyError(f"products of invariants left the invariant space in degree {n}")
        spans.append(polys)
        rows.append(GenerationRow(n, len(eb), dim))
    return rows


def minimal_generation_degree(g: PermutationGroupoid, N: int, D_max: int | None = None) -> int | None:
    """Least D such that orbit sums of degree <= D span every degree <= N."""
    for D in range(1, (D_max or N) + 1):
        if all(r.gap == 0 for r in generation_probe(g, D, N)):
            return D
    return None


# --- built-ins and I/O -----------------------------------------------------

def groupoid_from_json(data: Mapping, cap: int = DEFAULT_CAP) -> PermutationGroupoid:
    try:
        k = int(data["k"])
        gens = [PartialInjection.from_map(g["map"]) for g in data.get("generators", [])]
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ValidationError(f"bad groupoid JSON: {exc}") from exc
    return close(k, gens, cap)


def increasing_injections(k: int) -> list[PartialInjection]:
    pts = range(1, k + 1)
    return [PartialInjection(tuple(zip(A, B)))
            for r in range(1, k + 1)
            for A in itertools.combinations(pts, r)
            for B in itertools.combinations(pts, r)]


def symmetric_group(k: int) -> PermutationGroup:
    gens = []
    if k >= 2:
        gens.append(tuple([2, 1] + list(range(3, k + 1))))
        gens.append(tuple(list(range(2, k + 1)) + [1]))
    return PermutationGroup(k, tuple(gens), f"sym:{k}")


def cyclic_group(k: int) -> PermutationGroup:
    return PermutationGroup(k, (tuple(list(range(2, k + 1)) + [1]),) if k >= 2 else (), f"cyclic:{k}")


def trivial_group(k: int) -> PermutationGroup:
    return PermutationGroup(k, (), f"trivial:{k}")


def _param(name: str) -> tuple[str, int | None]:
    base, _, arg = name.partition(":")
    if not arg:
        return base, None
    try:
        k = int(arg)
    except ValueError:
        raise ValidationError(f"bad parameter in {name!r}") from None
    if k < 1:
        raise ValidationError(f"parameter must be positive in {name!r}")
    return base, k


def get_builtin_groupoid(name: str, cap: int = DEFAULT_CAP) -> PermutationGroupoid:
    base, k = _param(name)
    if base == "c2" and k is None:
        return get_builtin_group(name).as_groupoid(cap)
    if base == "noncm" and k is None:
        return close(3, [PartialInjection(((1, 2),))], cap, name)
    if k is None:
        raise ValidationError(f"unknown built-in groupoid {name!r}")
    if base == "qsym":
        return close(k, increasing_injections(k), cap, name)
    if base == "trivial":
        return close(k, (), cap, name)
    if base in ("sym", "cyclic", "c2"):
        return get_builtin_group(name).as_groupoid(cap)
    raise ValidationError(f"unknown built-in groupoid {name!r}")


def get_builtin_group(name: str) -> PermutationGroup:
    base, k = _param(name)
    factories = {"sym": symmetric_group, "cyclic": cyclic_group, "trivial": trivial_group}
    if base == "c2" and k is None:
        return PermutationGroup(2, ((2, 1),), "c2")
    if base not in factories or k is None:
        raise ValidationError(f"unknown built-in group {name!r}")
    return factories[base](k)


# Symmetry built-in -> blueprint built-in whose profile it should reproduce.
WREATH_PAIRS = {
    "trivial:2": "marked-cocliques:2",
    "trivial:3": "marked-cocliques:3",
    "sym:2": "k-cliques:2",
    "sym:3": "k-cliques:3",
    "c2": "complete-bipartite",
    "qsym:2": "qsym-blueprint:2",
    "qsym:3": "qsym-blueprint:3",
    "noncm": "noncm-blueprint",
}

GROUP_NAMES = ("trivial", "sym", "cyclic", "c2")


def get_symmetry(name: str) -> Symmetry:
    """Groups for group names, groupoids otherwise."""
    base, _ = _param(name)
    return get_builtin_group(name) if base in GROUP_NAMES else get_builtin_groupoid(name)


def groupoid_names() -> list[str]:
    return ["noncm", "c2", "qsym:<int>", "sym:<int>", "cyclic:<int>", "trivial:<int>"]
