from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from simpleperms.asymptotics import (
    TSV_HEADER,
    HighPrecision,
    bootstrap_check,
    error_row,
    exp_neg2,
    exp_rational,
    f4_asymptotic_check,
    fitted_constant,
    headline,
    kaplansky_asymptotic,
    kaplansky_check,
    main_term,
    median_successive_ratio,
    simple_asymptotic,
    simple_error_rows,
    simple_factor,
)

WINDOW = range(15, 41)

fractions = st.fractions(min_value=-1000, max_value=1000, max_denominator=10 ** 6)
bounds = st.fractions(min_value=0, max_value=Fraction(1, 100), max_denominator=10 ** 6)


def mpf(x):
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator


def _true_point(hp, t):
    # a point inside hp's interval, t in [-1, 1]
    return hp.value + t * hp.error_bound


class TestHighPrecision:
    def test_exact(self):
        h = HighPrecision.exact(3)
        assert h.error_bound == 0 and h.contains(3) and not h.contains(Fraction(3001, 1000))

    def test_negative_bound_rejected(self):
        with pytest.raises(ValueError):
            HighPrecision(1, -1)

    @given(fractions, bounds, fractions, bounds,
           st.fractions(-1, 1), st.fractions(-1, 1))
    def test_arithmetic_encloses(self, a, ea, b, eb, ta, tb):
        x, y = HighPrecision(a, ea), HighPrecision(b, eb)
        px, py = _true_point(x, ta), _true_point(y, tb)
        assert (x + y).contains(px + py)
        assert (x - y).contains(px - py)
        assert (x * y).contains(px * py)
        if abs(b) > eb:
            assert (x / y).contains(px / py)

    def test_reciprocal_of_interval_with_zero(self):
        with pytest.raises(ZeroDivisionError):
            HighPrecision(Fraction(1, 10), Fraction(1, 5)).reciprocal()

    def test_comparisons_respect_bound(self):
        h = HighPrecision(1, Fraction(1, 10))
        assert h.certainly_below(2) and not h.certainly_below(Fraction(105, 100))
        assert h.certainly_above(0) and not h.certainly_above(Fraction(95, 100))

    def test_to_decimal(self):
        assert HighPrecision(Fraction(389039, 10 ** 8), 0).to_decimal(3) == "3.89e-3"
        assert HighPrecision(Fraction(-9999, 1000), 0).to_decimal(2) == "-1.0e+1"
        assert HighPrecision(0, 0).to_decimal() == "0"


class TestExp:
    def test_against_mpmath(self):
        mpmath.mp.dps = 60
        ref = mpmath.exp(-2)
        for digits in (5, 15, 30, 45):
            e = exp_neg2(digits)
            assert abs(mpf(e.value) - ref) <= mpf(e.error_bound)
            assert e.error_bound < Fraction(1, 10 ** digits)

    def test_product_contains_one(self):
        assert (exp_neg2(30) * exp_rational(2, 30)).contains(1)

    def test_one_digit(self):
        e = exp_neg2(1)
        assert e.value == Fraction(1, 10) and e.contains(Fraction(135335, 10 ** 6))

    @given(st.fractions(-20, 20, max_denominator=50))
    def test_rational_exponents(self, x):
        mpmath.mp.dps = 50
        e = exp_rational(x, 20)
        ref = mpmath.exp(mpmath.mpf(x.numerator) / x.denominator)
        assert abs(mpf(e.value) - ref) <= mpf(e.error_bound)


class TestExpansions:
    def test_factor(self):
        assert simple_factor(20, 0) == 1
        assert simple_factor(20, 1) == Fraction(4, 5)
        assert simple_factor(20, 2) == Fraction(4, 5) + Fraction(1, 190)
        with pytest.raises(ValueError):
            simple_factor(20, 3)

    def test_headline(self):
        h = headline(20)
        assert h.exact == 264111424634864638
        rel = h.relative_error
        # slack to the window edges is far above the certified error
        assert rel.lo - Fraction(385, 10 ** 5) > 10 * rel.error_bound
        assert Fraction(394, 10 ** 5) - rel.hi > 10 * rel.error_bound
        assert rel.to_decimal(3) == "3.89e-3"

    def test_order_matters(self):
        r0, r1, r2 = (simple_error_rows([20], k)[0].relative_error for k in (0, 1, 2))
        # the leading term alone is far off; at n = 20 the first correction
        # happens to land closer than the second
        assert r2.certainly_below(r0.lo) and r1.certainly_below(r0.lo)
        assert r1.certainly_below(r2.lo)

    def test_window_relative_error(self):
        rows = simple_error_rows(WINDOW)
        by_n = {r.n: r.relative_error for r in rows}
        # n = 15 sits just above 1e-2; from n = 16 on the error is below it
        assert by_n[15].certainly_above(Fraction(1, 100))
        assert by_n[15].to_decimal(3) == "1.17e-2"
        for n in range(16, 41):
            assert by_n[n].certainly_below(Fraction(1, 100))
            assert Fraction(1, 100) - by_n[n].hi > 10 * by_n[n].error_bound

    def test_window_monotone(self):
        rows = simple_error_rows(WINDOW)
        assert median_successive_ratio(rows) < 1
        rel = [r.relative_error for r in rows]
        assert all(b.certainly_below(a.lo) for a, b in zip(rel, rel[1:]))

    def test_scaled_residual_bounded(self):
        rows = simple_error_rows(WINDOW)
        scaled = [abs(r.scaled_residual) for r in rows]
        assert all(s.certainly_below(40) for s in scaled)
        assert scaled[-1].certainly_below(scaled[0].lo)

    def test_kaplansky(self):
        rows = kaplansky_check(WINDOW)
        assert fitted_constant(rows) < 2
        assert kaplansky_asymptotic(20).contains(rows[5].approx.value)

    def test_f4(self):
        rows = f4_asymptotic_check(WINDOW)
        assert 9 < fitted_constant(rows) < 10

    def test_zero_exact(self):
        row = error_row(3, 0, simple_factor(3))
        assert row.exact_zero and row.relative_error is None
        assert row.to_json()["relative_error"] is None

    def test_row_formats(self):
        row = simple_error_rows([20])[0]
        fields = row.tsv().split("\t")
        assert len(fields) == len(TSV_HEADER.split("\t"))
        assert fields[1] == "264111424634864638"
        assert row.to_json()["exact"] == "264111424634864638"

    def test_main_term_value(self):
        mpmath.mp.dps = 40
        ref = mpmath.factorial(20) * mpmath.exp(-2)
        m = main_term(20)
        assert abs(mpf(m.value) - ref) <= mpf(m.error_bound)
        assert simple_asymptotic(20).value == m.value * simple_factor(20)


def test_bootstrap_counts():
    rows = {r.n: r for r in bootstrap_check(7)}
    assert rows[5].with_simple_n_minus_1 == 8
    assert (rows[6].with_simple_n_minus_1, rows[6].with_simple_n_minus_2, rows[6].also_length_2) == (24, 36, 16)
    assert (rows[7].with_simple_n_minus_1, rows[7].with_simple_n_minus_2, rows[7].also_length_2) == (184, 108, 48)
