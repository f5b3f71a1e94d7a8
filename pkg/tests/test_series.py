from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from agealgebra.errors import ValidationError
from agealgebra.series import (FitFailure, RationalForm, bounded_profile_certificate, expand, fit_rational,
                               growth_degree, numerator_nonneg_search, rational_form_from_json,
                               series_table_csv, to_quasi_polynomial, validate_quasi_polynomial)

from oracles import partitions_at_most, series_coefficients


def test_expand_matches_sympy():
    for num, den in [((1,), (1,)), ((1, 0, 1), (1, 2)), ((1, 1, 2, 2, 1, 0, -1), (1, 2, 3)), ((2, -1), (1, 1, 3))]:
        rf = RationalForm(num, den)
        assert expand(rf, 15) == series_coefficients(num, den, 15)


def test_constant_one_fits_k1():
    rf = fit_rational([1] * 12, 1)
    assert rf == RationalForm((1,), (1,))


def test_naturals_fit():
    rf = fit_rational([1] + list(range(1, 15)), 2)
    assert rf and rf.expand(14) == [1] + list(range(1, 15))


def test_partitions_fit():
    prefix = [partitions_at_most(n, 3) for n in range(20)]
    rf = fit_rational(prefix, 3)
    assert rf == RationalForm((1,), (1, 2, 3))


def test_failures_are_values():
    short = fit_rational([1, 2, 3], 2)
    assert isinstance(short, FitFailure) and not short
    wrong = fit_rational([1 + n * n for n in range(14)], 1)
    assert isinstance(wrong, FitFailure) and wrong.residual
    assert "non-decreasing" in fit_rational([1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2], 1).reason


def test_monotone_guard_can_be_disabled():
    prefix = [1, 0] * 8
    assert not fit_rational(prefix, None, denominator=(2,))
    rf = fit_rational(prefix, None, denominator=(2,), monotone=False)
    assert rf == RationalForm((1,), (2,))


def test_lower_pole_order_rejected():
    # the constant profile over (1-Z)(1-Z^2) has P(1) = 0
    f = fit_rational([1] * 14, 2)
    assert isinstance(f, FitFailure) and "vanishes" in f.reason


def test_bad_inputs():
    with pytest.raises(ValidationError):
        fit_rational([1, -1, 2], 1)
    with pytest.raises(ValidationError):
        fit_rational([1, 1, 1], None)
    with pytest.raises(ValidationError):
        RationalForm((1,), (0,))
    with pytest.raises(ValidationError):
        rational_form_from_json({"numerator": [1]})


@st.composite
def rational_forms(draw):
    den = tuple(sorted(draw(st.lists(st.integers(1, 4), min_size=0, max_size=3))))
    num = tuple(draw(st.lists(st.integers(0, 3), min_size=1, max_size=5)))
    assume(sum(num) > 0)
    return RationalForm(num, den)


@given(rational_forms())
@settings(max_examples=150, deadline=None)
def test_round_trip(rf):
    N = len(rf.numerator) + sum(rf.denominator) + 8
    coeffs = expand(rf, N)
    back = fit_rational(coeffs, None, denominator=rf.denominator, monotone=False)
    assert back.expand(N) == coeffs
    assert list(back.numerator) == list(rf.numerator[:len(back.numerator)])
    assert rational_form_from_json(rf.to_json()) == rf


@given(rational_forms())
@settings(max_examples=100, deadline=None)
def test_quasi_polynomial_matches_expansion(rf):
    qp = to_quasi_polynomial(rf)
    coeffs = expand(rf, qp.start + 4 * qp.period + 6)
    for n in range(qp.start, len(coeffs)):
        assert qp(n) == coeffs[n]


def test_quasi_polynomial_half_period():
    qp = to_quasi_polynomial(RationalForm((1,), (1, 2)))
    assert qp.period == 2 and qp.start == 0
    for n in range(20):
        assert qp(n) == Fraction(n, 2) + Fraction(3, 4) + Fraction((-1) ** n, 4)
    assert qp.degree == 1 and qp.leading_coefficients() == (Fraction(1, 2), Fraction(1, 2))


def test_quasi_polynomial_reduction_and_start():
    qp = to_quasi_polynomial(RationalForm((1, 1), (2,)))
    assert qp.reduced().period == 1
    rf = RationalForm((1, 0, 0, 5), (1,))
    late = to_quasi_polynomial(rf)
    assert late.start == 3
    assert validate_quasi_polynomial(late, expand(rf, 12)) == 3


def test_validate_requires_period_suffix():
    qp = to_quasi_polynomial(RationalForm((1,), (1, 2)))
    with pytest.raises(ValidationError):
        validate_quasi_polynomial(qp, [1, 1, 2, 2, 3, 99])


def test_growth_examples():
    g = growth_degree([1] + list(range(1, 20)))
    assert (g.degree, g.k, g.leading) == (1, 2, 1)
    g = growth_degree([partitions_at_most(n, 3) for n in range(25)])
    assert g.degree == 2 and g.leading == Fraction(1, 12)
    assert g.lower <= Fraction(1, 12) * 2 and g.upper >= Fraction(1, 12)
    g = growth_degree([1, 1, 1] + [0] * 10)
    assert g.degree == -1
    g = growth_degree([2 ** n for n in range(12)])
    assert g.degree is None and g.flagged
    with pytest.raises(ValidationError):
        growth_degree([1, 2, 3])


def test_nonneg_search_finds_a_form():
    # 1 - Z + Z^2 has a negative coefficient; a different denominator clears it
    coeffs = expand(RationalForm((1, -1, 1), (1, 2)), 30)
    res = numerator_nonneg_search(coeffs, 2, 6)
    assert res.found is not None and res.found.is_nonnegative()
    assert res.found.expand(30) == coeffs


def test_nonneg_search_reports_bound():
    coeffs = expand(RationalForm((1, 1, 2, 2, 1, 0, -1), (1, 2, 3)), 30)
    res = numerator_nonneg_search(coeffs, 3, 4)
    assert res.found is None and res.tried == 20
    assert res.to_json()["result"] == "none up to 4"


def test_bounded_certificates():
    cert = bounded_profile_certificate([1, 1, 2, 3, 3, 3, 3, 3, 3, 3, 3])
    assert cert.bounded and cert.limit == 3 and cert.stable_from == 3
    assert cert.form == RationalForm((1, 0, 1, 1), (1,))
    assert not bounded_profile_certificate(list(range(1, 12))).bounded
    assert not bounded_profile_certificate([1, 2, 3, 3]).bounded


def test_csv_export():
    text = series_table_csv([1, 1, 2], to_quasi_polynomial(RationalForm((1,), (1,))))
    assert text.splitlines()[0] == "n,phi,qp"
    assert len(text.splitlines()) == 4
