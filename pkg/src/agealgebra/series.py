"""Hilbert series of profiles: rational fits, quasi-polynomials, growth.

A prefix is the list ``phi(0..N)``.  The rational form is ``P(Z) / prod(1 - Z^n_i)``
with integer ``P``; fitting multiplies the prefix by the denominator and
asks the last ``window`` coefficients of the truncated product to vanish.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, lcm, prod
from typing import Sequence

from .errors import ValidationError

DEFAULT_WINDOW = 5
DEFAULT_PREFIX = 20


# --- integer polynomials as coefficient lists ------------------------------

def _trim(p: Sequence[int]) -> list[int]:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _pmul(a: Sequence[int], b: Sequence[int], cut: int | None = None) -> list:
    if not a or not b:
        return []
    size = len(a) + len(b) - 1 if cut is None else min(cut, len(a) + len(b) - 1)
    out = [0] * size
    for i, x in enumerate(a):
        if not x or i >= size:
            continue
        for j, y in enumerate(b[: size - i]):
            out[i + j] += x * y
    return out


def one_minus_z(n: int) -> list[int]:
    return [1] + [0] * (n - 1) + [-1]


def denominator_poly(exponents: Sequence[int]) -> list[int]:
    out = [1]
    for n in exponents:
        out = _pmul(out, one_minus_z(n))
    return out


def _pdivmod(num: Sequence[int], den: Sequence[int]):
    """Exact-integer long division when the divisor is monic up to sign."""
    num = _trim(num)
    den = _trim(den)
    lead = den[-1]
    if lead not in (1, -1):
        raise ValueError("divisor must have leading coefficient +-1")
    q = [0] * max(len(num) - len(den) + 1, 0)
    r = list(num)
    for i in range(len(q) - 1, -1, -1):
        c = r[i + len(den) - 1] * lead
        q[i] = c
        if c:
            for j, d in enumerate(den):
                r[i + j] -= c * d
    return _trim(q), _trim(r)


def _check_prefix(prefix: Sequence[int]) -> list[int]:
    out = []
    for v in prefix:
        if isinstance(v, bool) or int(v) != v or v < 0:
            raise ValidationError(f"prefix entries must be nonnegative integers, got {v!r}")
        out.append(int(v))
    if not out:
        raise ValidationError("empty prefix")
    return out


def is_non_decreasing(prefix: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(prefix, prefix[1:]))


# --- rational forms --------------------------------------------------------

def _poly_str(p: Sequence[int]) -> str:
    terms = []
    for i, c in enumerate(p):
        if not c:
            continue
        mono = "" if i == 0 else ("Z" if i == 1 else f"Z^{i}")
        coef = str(abs(c)) if (abs(c) != 1 or i == 0) else ""
        terms.append(("-" if c < 0 else "+", coef + mono))
    if not terms:
        return "0"
    s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, t in terms[1:]:
        s += f" {sign} {t}"
    return s


@dataclass(frozen=True)
class RationalForm:
    numerator: tuple[int, ...]
    denominator: tuple[int, ...]

    def __post_init__(self):
        if any(n < 1 for n in self.denominator):
            raise ValidationError("denominator exponents must be positive")

    @property
    def k(self) -> int:
        return len(self.denominator)

    def numerator_at_one(self) -> int:
        return sum(self.numerator)

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.numerator)

    def expand(self, N: int) -> list[int]:
        return expand(self, N)

    def to_json(self) -> dict:
        return {"numerator": list(self.numerator), "denominator_exponents": list(self.denominator)}

    def __str__(self):
        den = "".join(f"(1 - Z^{n})" if n > 1 else "(1 - Z)" for n in self.denominator) or "1"
        return f"({_poly_str(self.numerator)}) / {den}"


@dataclass(frozen=True)
class FitFailure:
    reason: str
    residual: tuple[int, ...] = ()

    def __bool__(self):
        return False

    def to_json(self) -> dict:
        return {"failure": self.reason, "residual": list(self.residual)}


def rational_form_from_json(data) -> RationalForm:
    try:
        return RationalForm(tuple(int(c) for c in data["numerator"]),
                            tuple(int(n) for n in data["denominator_exponents"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad rational form JSON: {exc}") from exc


def expand(rf: RationalForm, N: int) -> list[int]:
    """Coefficients 0..N of the power series of ``rf``."""
    den = denominator_poly(rf.denominator)
    out: list[int] = []
    for n in range(N + 1):
        v = rf.numerator[n] if n < len(rf.numerator) else 0
        for j in range(1, min(n, len(den) - 1) + 1):
            v -= den[j] * out[n - j]
        out.append(v)
    return out


def fit_rational(prefix: Sequence[int], k: int | None = None, window: int = DEFAULT_WINDOW,
                 denominator: Sequence[int] | None = None, monotone: bool = True):
    """Fit ``prefix`` over ``prod(1 - Z^n_i)``; default exponents are ``1..k``.

    Returns a RationalForm or a FitFailure (never raises on a bad fit).
    """
    prefix = _check_prefix(prefix)
    if denominator is None:
        if k is None:
            raise ValidationError("give k or explicit denominator exponents")
        denominator = tuple(range(1, k + 1))
    denominator = tuple(sorted(int(n) for n in denominator))
    if window < 1:
        raise ValidationError("window must be positive")
    if monotone and not is_non_decreasing(prefix):
        return FitFailure("prefix is not non-decreasing; not an age profile")
    N = len(prefix) - 1
    if N < sum(denominator) + window:
        return FitFailure(f"prefix too short: need N >= {sum(denominator) + window}, have N = {N}")
    P = _pmul(prefix, denominator_poly(denominator), cut=N + 1)
    tail = tuple(P[N + 1 - window:])
    if any(tail):
        return FitFailure("trailing coefficients do not vanish", tail)
    P = _trim(P)
    if sum(P) == 0:
        return FitFailure("numerator vanishes at 1; pole order is lower than the denominator's")
    return RationalForm(tuple(P), denominator)


# --- quasi-polynomials -----------------------------------------------------

def _interpolate(xs: Sequence[int], ys: Sequence[int]) -> tuple[Fraction, ...]:
    """Coefficients (constant first) of the interpolating polynomial."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] -= xs[j] * basis[t + 1]
            denom *= xs[i] - xs[j]
        for t in range(n):
            coeffs[t] += ys[i] * basis[t] / denom
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class QuasiPolynomial:
    period: int
    start: int
    residues: tuple[tuple[Fraction, ...], ...]

    def __call__(self, n: int) -> Fraction:
        c = self.residues[n % self.period]
        return sum(a * n**i for i, a in enumerate(c))

    @property
    def degree(self) -> int:
        return max((len(c) - 1 if any(c) else -1) for c in self.residues)

    def leading_coefficients(self) -> tuple[Fraction, ...]:
        d = self.degree
        return tuple(c[d] if len(c) > d >= 0 else Fraction(0) for c in self.residues)

    def reduced(self) -> "QuasiPolynomial":
        for p in range(1, self.period + 1):
            if self.period % p == 0 and all(self.residues[r] == self.residues[r % p] for r in range(self.period)):
                return QuasiPolynomial(p, self.start, self.residues[:p])
        return self

    def to_json(self) -> dict:
        return {"period": self.period, "start": self.start,
                "residues": [[str(a) for a in c] for c in self.residues]}

    def __str__(self):
        parts = []
        for r, c in enumerate(self.residues):
            poly = " + ".join(f"({a})n^{i}" for i, a in enumerate(c) if a) or "0"
            parts.append(f"n = {r} mod {self.period}: {poly}")
        return f"for n >= {self.start}: " + "; ".join(parts)


def to_quasi_polynomial(rf: RationalForm) -> QuasiPolynomial:
    """Per-residue interpolation of the expansion beyond the polynomial part."""
    L = lcm(*rf.denominator) if rf.denominator else 1
    k = rf.k
    n0 = max(0, len(_trim(rf.numerator)) - 1 - sum(rf.denominator) + 1)
    points = max(k, 1)
    coeffs = expand(rf, n0 + L * (points + 1))
    residues = []
    for r in range(L):
        first = n0 + (r - n0) % L
        xs = [first + L * j for j in range(points)]
        residues.append(_interpolate(xs, [coeffs[x] for x in xs]))
    return QuasiPolynomial(L, n0, tuple(residues))


def validate_quasi_polynomial(qp: QuasiPolynomial, prefix: Sequence[int]) -> int:
    """Least ``n0`` such that ``qp`` matches ``prefix[n]`` for every ``n0 <= n <= N``."""
    prefix = _check_prefix(prefix)
    n0 = len(prefix)
    for n in range(len(prefix) - 1, -1, -1):
        if qp(n) != prefix[n]:
            break
        n0 = n
    if len(prefix) - n0 < qp.period:
        raise ValidationError(f"no matching suffix of length >= period {qp.period}")
    return n0


# --- growth ----------------------------------------------------------------

@dataclass(frozen=True)
class GrowthEstimate:
    """``degree`` is k-1 for pole order k (-1 for eventually-zero profiles)."""

    degree: int | None
    k: int | None
    leading: Fraction | None = None
    lower: Fraction | None = None
    upper: Fraction | None = None
    form: RationalForm | None = None
    flagged: str = ""

    def to_json(self) -> dict:
        return {"degree": self.degree, "k": self.k,
                "leading": None if self.leading is None else str(self.leading),
                "lower": None if self.lower is None else str(self.lower),
                "upper": None if self.upper is None else str(self.upper),
                "form": None if self.form is None else self.form.to_json(),
                "flagged": self.flagged}


def growth_degree(prefix: Sequence[int], window: int = DEFAULT_WINDOW) -> GrowthEstimate:
    """Least pole order k whose fit over ``(1-Z)...(1-Z^k)`` succeeds.

    ``leading`` is the exact asymptotic constant ``a`` in ``phi(n) ~ a n^(k-1)``
    (averaged over residues); ``lower``/``upper`` sandwich ``phi(n)/n^(k-1)``
    on the second half of the prefix.
    """
    prefix = _check_prefix(prefix)
    N = len(prefix) - 1
    if N < 8:
        raise ValidationError("growth estimation needs N >= 8")
    k = 0
    while k * (k + 1) // 2 + window <= N:
        rf = fit_rational(prefix, k, window, monotone=False)
        if rf:
            if k == 0:
                return GrowthEstimate(-1, 0, Fraction(0), form=rf)
            a = Fraction(rf.numerator_at_one(), factorial(k - 1) * prod(rf.denominator))
            tail = [Fraction(prefix[n], n ** (k - 1)) for n in range(max(1, N // 2), N + 1)]
            return GrowthEstimate(k - 1, k, a, min(tail), max(tail), rf)
        k += 1
    return GrowthEstimate(None, None, flagged=f"no fit with pole order <= {k - 1}; growth looks unbounded or prefix too short")


# --- numerator searches ----------------------------------------------------

@dataclass(frozen=True)
class NonnegSearchResult:
    base: RationalForm
    found: RationalForm | None
    tried: int
    bound: int

    def to_json(self) -> dict:
        return {"base": self.base.to_json(), "found": None if self.found is None else self.found.to_json(),
                "tried": self.tried, "bound": self.bound,
                "result": "found" if self.found else f"none up to {self.bound}"}


def numerator_nonneg_search(prefix: Sequence[int], k: int, exponent_bound: int,
                            window: int = DEFAULT_WINDOW) -> NonnegSearchResult:
    """First multiset ``n_1 <= ... <= n_k <= bound`` (lex order) giving a nonnegative numerator."""
    base = fit_rational(prefix, k, window, monotone=False)
    if not base:
        base = fit_rational(prefix, None, window, denominator=(1,) * k, monotone=False)
    if not base:
        raise ValidationError(f"prefix has no rational fit of pole order {k}: {base.reason}")
    base_den = denominator_poly(base.denominator)
    tried = 0
    for exps in itertools.combinations_with_replacement(range(1, exponent_bound + 1), k):
        tried += 1
        num = _pmul(list(base.numerator), denominator_poly(exps))
        q, r = _pdivmod(num, base_den)
        if r:
            continue
        if all(c >= 0 for c in q):
            return NonnegSearchResult(base, RationalForm(tuple(q), exps), tried, exponent_bound)
    return NonnegSearchResult(base, None, tried, exponent_bound)


@dataclass(frozen=True)
class BoundedCertificate:
    bounded: bool
    form: RationalForm | None = None
    limit: int | None = None
    stable_from: int | None = None

    def to_json(self) -> dict:
        return {"bounded": self.bounded, "form": None if self.form is None else self.form.to_json(),
                "limit": self.limit, "stable_from": self.stable_from}


def bounded_profile_certificate(prefix: Sequence[int], window: int = DEFAULT_WINDOW) -> BoundedCertificate:
    """Eventually constant prefix -> ``P(Z)/(1-Z)`` with ``P`` in N[Z]."""
    prefix = _check_prefix(prefix)
    start = len(prefix) - 1
    while start > 0 and prefix[start - 1] == prefix[-1]:
        start -= 1
    if len(prefix) - 1 - start < window:
        return BoundedCertificate(False)
    rf = fit_rational(prefix, None, window, denominator=(1,), monotone=False)
    if not rf or not rf.is_nonnegative():
        return BoundedCertificate(False)
    return BoundedCertificate(True, rf, prefix[-1], start)


# --- export ----------------------------------------------------------------

def series_table_csv(prefix: Sequence[int], qp: QuasiPolynomial | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "phi", "qp"])
    for n, v in enumerate(prefix):
        w.writerow([n, v, "" if qp is None or n < qp.start else str(qp(n))])
    return buf.getvalue()
