"""The degree-truncated age algebra of a blueprint.

The degree-``n`` component has one basis element per isomorphism type of
``n``-element restrictions: the indicator of the sets of that type.  The
product of indicators is the convolution over splittings of a set,

    (f g)(Q) = sum over m-subsets P of Q of f(P) g(Q - P),

and for blow-ups a set with statistics ``d`` splits into parts with
statistics ``p`` and ``d - p`` in ``prod C(d_x, p_x)`` ways.

Polynomial realisation uses divided powers, ``X^d / d!``, which is what
makes it multiplicative (the binomials above are exactly the ones produced
by multiplying divided powers).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
from typing import Iterable, Mapping, Sequence

from .blueprint import Blueprint, _iso_type, check_vector, classes, compositions, vectors
from .errors import ValidationError
from .linalg import EchelonBasis, rank

Monomial = tuple[int, ...]
Polynomial = dict[Monomial, Fraction]


@dataclass(frozen=True, order=True)
class IsoType:
    degree: int
    form: bytes
    representative: tuple[int, ...] = field(compare=False)


@dataclass(frozen=True)
class GradedBasis:
    degree: int
    types: tuple[IsoType, ...]

    def __len__(self):
        return len(self.types)

    def __iter__(self):
        return iter(self.types)

    def __getitem__(self, i):
        return self.types[i]

    def index(self, t: IsoType) -> int:
        return _positions(self)[t.form]


@lru_cache(maxsize=None)
def _positions(gb: GradedBasis) -> dict[bytes, int]:
    return {t.form: i for i, t in enumerate(gb.types)}


@lru_cache(maxsize=None)
def basis(b: Blueprint, n: int) -> GradedBasis:
    """Types ordered by canonical form; representatives are lex-least vectors."""
    if n < 0:
        raise ValidationError("negative degree")
    return GradedBasis(n, tuple(IsoType(n, f, vs[0]) for f, vs in classes(b, n).items()))


def type_of(b: Blueprint, d: Sequence[int]) -> IsoType:
    d = check_vector(b, d)
    gb = basis(b, sum(d))
    return gb.types[_positions(gb)[_iso_type(b, d)]]


def class_vectors(b: Blueprint, t: IsoType) -> tuple[tuple[int, ...], ...]:
    return classes(b, t.degree)[t.form]


class AlgebraElement:
    """Finite rational combination of basis types of one blueprint."""

    __slots__ = ("blueprint", "coefficients")

    def __init__(self, blueprint: Blueprint, coefficients: Mapping[IsoType, object] = ()):
        self.blueprint = blueprint
        self.coefficients = {t: Fraction(c) for t, c in dict(coefficients).items() if c != 0}

    @property
    def degrees(self) -> set[int]:
        return {t.degree for t in self.coefficients}

    @property
    def degree(self) -> int | None:
        """Degree if the element is nonzero and homogeneous, else None."""
        ds = self.degrees
        return ds.pop() if len(ds) == 1 else None

    @property
    def is_homogeneous(self) -> bool:
        return len(self.degrees) <= 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def component(self, n: int) -> "AlgebraElement":
        return AlgebraElement(self.blueprint, {t: c for t, c in self.coefficients.items() if t.degree == n})

    def vector(self, n: int) -> list[Fraction]:
        gb = basis(self.blueprint, n)
        return [self.coefficients.get(t, Fraction(0)) for t in gb.types]

    def _same(self, other: "AlgebraElement"):
        if self.blueprint != other.blueprint:
            raise ValidationError("elements belong to different blueprints")

    def __add__(self, other):
        self._same(other)
        out = dict(self.coefficients)
        for t, c in other.coefficients.items():
            out[t] = out.get(t, 0) + c
        return AlgebraElement(self.blueprint, out)

    def __neg__(self):
        return AlgebraElement(self.blueprint, {t: -c for t, c in self.coefficients.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return AlgebraElement(self.blueprint, {t: c * other for t, c in self.coefficients.items()})

    def __rmul__(self, scalar):
        return self * scalar

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement) and self.blueprint == other.blueprint
                and self.coefficients == other.coefficients)

    def __hash__(self):
        return hash((self.blueprint, frozenset(self.coefficients.items())))

    def __repr__(self):
        terms = ", ".join(f"{c}*{t.representative}" for t, c in sorted(self.coefficients.items()))
        return f"AlgebraElement({terms or '0'})"


def basis_element(b: Blueprint, t: IsoType) -> AlgebraElement:
    return AlgebraElement(b, {t: 1})


def unit(b: Blueprint) -> AlgebraElement:
    return basis_element(b, basis(b, 0).types[0])


def e1(b: Blueprint) -> AlgebraElement:
    """The all-ones function on 1-element sets."""
    return AlgebraElement(b, {t: 1 for t in basis(b, 1)})


def from_vector(b: Blueprint, n: int, coeffs: Sequence) -> AlgebraElement:
    gb = basis(b, n)
    if len(coeffs) != len(gb):
        raise ValidationError(f"degree {n} has dimension {len(gb)}, got {len(coeffs)} coefficients")
    return AlgebraElement(b, dict(zip(gb.types, coeffs)))


def _sub_vectors(d: Sequence[int], m: int):
    return compositions(m, d)


def _split_weight(d: Sequence[int], p: Sequence[int]) -> int:
    return prod(comb(dx, px) for dx, px in zip(d, p))


def structure_constant(b: Blueprint, rho: IsoType, sigma: IsoType, tau: IsoType,
                       representative: Sequence[int] | None = None) -> int:
    """Coefficient of ``rho`` in the product of the ``sigma`` and ``tau`` indicators."""
    if rho.degree != sigma.degree + tau.degree:
        raise ValidationError(f"degree mismatch: {rho.degree} != {sigma.degree} + {tau.degree}")
    d = check_vector(b, representative if representative is not None else rho.representative)
    if _iso_type(b, d) != rho.form:
        raise ValidationError(f"{d} is not a representative of the given type")
    total = 0
    for p in _sub_vectors(d, sigma.degree):
        if _iso_type(b, p) == sigma.form:
            q = tuple(x - y for x, y in zip(d, p))
            if _iso_type(b, q) == tau.form:
                total += _split_weight(d, p)
    return total


@lru_cache(maxsize=None)
def product_table(b: Blueprint, m: int, n: int) -> tuple[dict[tuple[int, int], int], ...]:
    """For each type of degree m+n: {(index of sigma in degree m, index of tau in degree n): c}."""
    left, right, top = basis(b, m), basis(b, n), basis(b, m + n)
    lpos, rpos = _positions(left), _positions(right)
    out = []
    for rho in top.types:
        d = rho.representative
        acc: dict[tuple[int, int], int] = {}
        for p in _sub_vectors(d, m):
            q = tuple(x - y for x, y in zip(d, p))
            key = (lpos[_iso_type(b, p)], rpos[_iso_type(b, q)])
            acc[key] = acc.get(key, 0) + _split_weight(d, p)
        out.append(acc)
    return tuple(out)


def multiply(f: AlgebraElement, g: AlgebraElement) -> AlgebraElement:
    f._same(g)
    b = f.blueprint
    out: dict[IsoType, Fraction] = {}
    for m in f.degrees:
        fm = f.vector(m)
        for n in g.degrees:
            gn = g.vector(n)
            top = basis(b, m + n).types
            for rho, entries in zip(top, product_table(b, m, n)):
                s = sum(c * fm[i] * gn[j] for (i, j), c in entries.items())
                if s:
                    out[rho] = out.get(rho, 0) + s
    return AlgebraElement(b, out)


# --- polynomial realisation ------------------------------------------------

def polynomial_realization(b: Blueprint, f: AlgebraElement, n: int | None = None) -> Polynomial:
    """``sum_d f(type(d)) X^d / d!`` over capacity-respecting ``d`` of degree ``n``."""
    if n is None:
        n = f.degree if f.degree is not None else 0
        if not f.is_homogeneous:
            raise ValidationError("realisation needs a homogeneous element")
    elif f.degree not in (None, n) or not f.is_homogeneous:
        raise ValidationError(f"element is not homogeneous of degree {n}")
    coeff = {t.form: c for t, c in f.coefficients.items()}
    out: Polynomial = {}
    for d in vectors(b, n):
        c = coeff.get(_iso_type(b, d))
        if c:
            out[d] = c / prod(factorial(x) for x in d)
    return out


def poly_mul(p: Polynomial, q: Polynomial, caps: Sequence[int | None] | None = None) -> Polynomial:
    """Product in K[X], dropping monomials that exceed finite capacities."""
    out: Polynomial = {}
    for a, ca in p.items():
        for e, ce in q.items():
            m = tuple(x + y for x, y in zip(a, e))
            if caps and any(c is not None and v > c for v, c in zip(m, caps)):
                continue
            out[m] = out.get(m, 0) + ca * ce
    return {m: c for m, c in out.items() if c}


def e1_matrix(b: Blueprint, n: int) -> list[list[int]]:
    """Matrix of multiplication by e1 from degree n to n+1 (rows: degree n+1 types)."""
    cols = len(basis(b, n))
    mat = []
    for entries in product_table(b, n, 1):
        row = [0] * cols
        for (i, _), c in entries.items():
            row[i] += c
        mat.append(row)
    return mat


def e1_rank(b: Blueprint, n: int) -> int:
    return rank(e1_matrix(b, n))


# --- leading monomials -----------------------------------------------------

@dataclass(frozen=True)
class TermOrder:
    """``lex`` or ``deglex``; ``variables`` lists block indices from largest to smallest."""

    kind: str = "deglex"
    variables: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("lex", "deglex"):
            raise ValidationError(f"unknown term order {self.kind!r}")

    def key(self, e: Monomial):
        v = tuple(e[i] for i in self.variables) if self.variables else tuple(e)
        return (sum(e), v) if self.kind == "deglex" else v


DEGLEX = TermOrder()


def leading_monomial(b: Blueprint, f: AlgebraElement, order: TermOrder = DEGLEX) -> Monomial:
    if f.is_zero():
        raise ValidationError("zero element has no leading monomial")
    if not f.is_homogeneous:
        raise ValidationError("leading monomial needs a homogeneous element")
    return max(polynomial_realization(b, f), key=order.key)


def leading_monomials(b: Blueprint, n: int, order: TermOrder = DEGLEX) -> set[Monomial]:
    """Leading monomials of degree-n elements (types have disjoint supports)."""
    return {max(class_vectors(b, t), key=order.key) for t in basis(b, n)}


@dataclass
class AddlayerReport:
    n_max: int
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def layers(b: Blueprint, m: Monomial) -> list[tuple[int, ...]]:
    """Maximal sets of infinite-block indices whose exponents in ``m`` are equal."""
    groups: dict[int, list[int]] = {}
    for x in b.infinite_indices:
        groups.setdefault(m[x], []).append(x)
    return [tuple(g) for _, g in sorted(groups.items())]


def addlayer_check(b: Blueprint, n_max: int, order: TermOrder = DEGLEX) -> AddlayerReport:
    """For each leading monomial m and layer S: either S hits a full finite block or m*x_S is leading."""
    rep = AddlayerReport(n_max)
    cache: dict[int, set] = {}

    def lms(n):
        if n not in cache:
            cache[n] = leading_monomials(b, n, order)
        return cache[n]

    for n in range(n_max + 1):
        for m in sorted(lms(n)):
            for S in layers(b, m):
                rep.checked += 1
                if any(not b.blocks[i].infinite and m[i] == b.blocks[i].cardinality for i in S):
                    continue
                grown = tuple(v + (1 if i in S else 0) for i, v in enumerate(m))
                if grown not in lms(n + len(S)):
                    rep.violations.append((n, m, S))
    return rep


# --- generation probes -----------------------------------------------------

@dataclass(frozen=True)
class GenerationRow:
    degree: int
    spanned: int
    dimension: int

    @property
    def gap(self) -> int:
        return self.dimension - self.spanned


@lru_cache(maxsize=None)
def _by_left(b: Blueprint, m: int, n: int) -> dict[int, list[tuple[int, int, int]]]:
    out: dict[int, list] = {}
    for r, entries in enumerate(product_table(b, m, n)):
        for (i, j), c in entries.items():
            out.setdefault(i, []).append((r, j, c))
    return out


def generated_in_degree(b: Blueprint, D: int, N: int) -> list[GenerationRow]:
    """Dimension, per degree, of the subalgebra generated by all types of degree <= D."""
    if D > N:
        raise ValidationError("need D <= N")
    spans: list[list[dict[int, int]]] = [[{0: 1}]]
    rows = [GenerationRow(0, 1, len(basis(b, 0)))]
    for n in range(1, N + 1):
        dim = len(basis(b, n))
        eb = EchelonBasis()
        for j in range(1, min(D, n) + 1):
            table = _by_left(b, j, n - j)
            for i in range(len(basis(b, j))):
                for v in spans[n - j]:
                    w: dict[int, int] = {}
                    for r, t, c in table.get(i, ()):
                        x = v.get(t)
                        if x:
                            w[r] = w.get(r, 0) + c * x
                    eb.add(w)
                    if len(eb) == dim:
                        break
                if len(eb) == dim:
                    break
            if len(eb) == dim:
                break
        spans.append(list(eb.rows.values()))
        rows.append(GenerationRow(n, len(eb), dim))
    return rows


def structure_constants_table(b: Blueprint, max_degree: int) -> list[tuple[IsoType, IsoType, IsoType, int]]:
    """All nonzero (rho, sigma, tau, c) with 1 <= deg sigma <= deg tau and deg rho <= max_degree."""
    out = []
    for total in range(2, max_degree + 1):
        for m in range(1, total // 2 + 1):
            left, right, top = basis(b, m), basis(b, total - m), basis(b, total)
            for rho, entries in zip(top.types, product_table(b, m, total - m)):
                for (i, j), c in sorted(entries.items()):
                    out.append((rho, left.types[i], right.types[j], c))
    return out
