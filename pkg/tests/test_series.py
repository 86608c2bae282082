import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simpleperms.errors import (
    CompositionConstantTermNonzero,
    IdentityViolation,
    NonUnitDivisor,
    NotRevertible,
)
from simpleperms.series import (
    BivariatePoly,
    TruncSeries,
    _mul,
    _mul_schoolbook,
    bivariate_F_m,
    check_identity,
    check_ode_identities,
    check_structure_identities,
    comtet_series,
    f_m_series,
    factorial_series,
    indecomposable_series,
    lagrange_com,
    revert,
    simple_series,
)

COM_ABS = [1, 2, 2, 4, 4, 48, 336, 2928, 28144, 298528, 3454432, 43286528]
SIMPLE = [1, 2, 0, 2, 6, 46, 338, 2926, 28146, 298526, 3454434, 43286526]

big = st.integers(-(10 ** 40), 10 ** 40)


def unit_leading(order):
    return st.tuples(st.sampled_from([1, -1]), st.lists(st.integers(-50, 50), min_size=order - 1,
                                                        max_size=order - 1)).map(
        lambda t: TruncSeries([0, t[0], *t[1]], order))


class TestKernels:
    @given(st.lists(big, min_size=1, max_size=60), st.lists(big, min_size=1, max_size=60))
    def test_kronecker_matches_schoolbook(self, a, b):
        n = max(len(a), len(b)) - 1
        a = a + [0] * (n + 1 - len(a))
        b = b + [0] * (n + 1 - len(b))
        assert _mul(a, b, n) == _mul_schoolbook(a, b, n)

    def test_kronecker_signed_extremes(self):
        a = [-(2 ** 200)] * 40
        b = [2 ** 200 - 1, -1] * 20
        assert _mul(a, b, 39) == _mul_schoolbook(a, b, 39)

    def test_mixed_zero_runs(self):
        a = [0] * 30 + [5] + [0] * 30
        b = [0, -7] + [0] * 59
        assert _mul(a, b, 60) == _mul_schoolbook(a, b, 60)


class TestTruncSeries:
    def test_geometric(self):
        x = TruncSeries.x(3)
        assert (x / (1 + x)).coeffs == (0, 1, -1, 1)

    def test_order_is_min(self):
        a = TruncSeries([1, 2, 3], 5)
        b = TruncSeries([1, 1], 2)
        assert (a + b).order == 2
        assert (a * b).order == 2

    def test_equality_up_to_smaller_order(self):
        assert TruncSeries([1, 2], 1) == TruncSeries([1, 2, 99], 2)
        assert TruncSeries([1, 2], 1) != TruncSeries([1, 3], 2)

    def test_agrees_refuses_unknown_coefficients(self):
        with pytest.raises(ValueError):
            TruncSeries([1], 2).agrees(TruncSeries([1], 5), 4)

    def test_non_unit_divisor(self):
        with pytest.raises(NonUnitDivisor):
            TruncSeries([1, 1], 3) / TruncSeries([2, 1], 3)

    def test_exact_division_by_non_unit(self):
        two = TruncSeries([2, 2], 3)
        assert (two / TruncSeries([2], 3)).coeffs == (1, 1, 0, 0)

    def test_compose_constant_term(self):
        with pytest.raises(CompositionConstantTermNonzero):
            TruncSeries.x(3).compose(TruncSeries([1, 1], 3))

    def test_derivative_loses_one_order(self):
        d = TruncSeries([5, 1, 1, 1], 3).derivative()
        assert d.order == 2 and d.coeffs == (1, 2, 3)

    def test_power(self):
        x = TruncSeries.x(6)
        assert ((1 + x) ** 4).coeffs == tuple(math.comb(4, k) for k in range(7))

    def test_json_round_trip(self):
        c = comtet_series(30)
        doc = json.loads(json.dumps(c.to_json("com")))
        assert doc["name"] == "com" and doc["order"] == 30
        assert all(isinstance(v, str) for v in doc["coeffs"])
        back = TruncSeries.from_json(doc)
        assert back.order == 30 and back.coeffs == c.coeffs

    def test_immutable(self):
        with pytest.raises(AttributeError):
            TruncSeries.x(2).order = 5

    def test_str(self):
        assert str(TruncSeries([0, 1, -2], 2)) == "x - 2*x^2 + O(x^3)"

    @given(st.lists(big, min_size=2, max_size=15), st.lists(st.integers(-5, 5), min_size=14, max_size=14),
           st.sampled_from([1, -1]))
    def test_division_inverts_multiplication(self, a, rest, lead):
        n = 14
        a = TruncSeries(a, n)
        b = TruncSeries([lead, *rest], n)
        assert (a * b) / b == a


class TestReversion:
    def test_hand_reversion_of_F(self):
        assert revert(factorial_series(4)).coeffs == (0, 1, -2, 2, -4)

    def test_not_revertible(self):
        with pytest.raises(NotRevertible):
            revert(TruncSeries([0, 2, 1], 3))
        with pytest.raises(NotRevertible):
            revert(TruncSeries([1, 1, 1], 3))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 40).flatmap(unit_leading))
    def test_revert_is_two_sided_inverse(self, f):
        g = revert(f)
        x = TruncSeries.x(f.order)
        assert f.compose(g) == x
        assert g.compose(f) == x

    def test_comtet_values(self):
        c = comtet_series(12)
        assert [abs(c[n]) for n in range(1, 13)] == COM_ABS
        assert [c[n] for n in range(1, 7)] == [1, -2, 2, -4, -4, -48]

    def test_lagrange_small(self):
        assert lagrange_com(6) == -48

    def test_lagrange_matches_newton(self):
        c = comtet_series(40)
        assert all(lagrange_com(n) == c[n] for n in range(1, 41))


class TestGeneratingFunctions:
    def test_simple_coefficients(self):
        s = simple_series(12)
        assert [s[n] for n in range(4, 13)] == SIMPLE[3:]
        assert s[0] == s[1] == s[2] == s[3] == 0

    def test_indecomposables(self):
        i = indecomposable_series(7)
        assert list(i.coeffs[1:]) == [1, 1, 3, 13, 71, 461, 3447]

    def test_f2_values(self):
        f2 = f_m_series(2, 8)
        assert list(f2.coeffs[1:]) == [1, 0, 0, 2, 14, 90, 646, 5242]

    def test_f4_has_no_length_4_term(self):
        f4 = f_m_series(4, 8)
        assert list(f4.coeffs[1:]) == [1, 0, 0, 0, 6, 70, 582, 4930]

    def test_f_m_beyond_order_is_x(self):
        assert f_m_series(12, 10) == TruncSeries.x(10)

    def test_f_m_rejects_small_m(self):
        with pytest.raises(ValueError):
            f_m_series(1, 5)

    def test_bivariate_at_minus_one_is_f_m(self):
        for m in (2, 3, 4, 5):
            assert bivariate_F_m(m, 9).evaluate_v(-1) == f_m_series(m, 9)

    def test_bivariate_at_zero_is_F(self):
        assert bivariate_F_m(4, 9).evaluate_v(0) == factorial_series(9)

    def test_bivariate_slice(self):
        # length 3: two permutations with 2 minimal pairs, four with 1
        assert bivariate_F_m(2, 5).x_slice(3) == (6, 8, 2)

    def test_bivariate_sparse_view(self):
        p = BivariatePoly.from_terms({(1, 0): 1, (2, 1): 3}, 3)
        assert p.coeffs == {(1, 0): 1, (2, 1): 3}
        assert (p * p).coeffs == {(2, 0): 1, (3, 1): 6}


class TestIdentities:
    def test_structure_order_50(self):
        assert len(check_structure_identities(50).passed) == 5

    def test_odes_order_50(self):
        assert len(check_ode_identities(50).passed) == 4

    def test_violation_is_located(self):
        f = factorial_series(10)
        broken = f + TruncSeries.monomial(1, 7, 10)
        with pytest.raises(IdentityViolation) as info:
            check_identity("probe", f, broken, 10)
        assert info.value.order == 7

    def test_ode_fails_for_perturbed_comtet(self):
        c = comtet_series(20) + TruncSeries.monomial(1, 9, 20)
        x = TruncSeries.x(20)
        theta = x - (1 + x) * c
        with pytest.raises(IdentityViolation):
            check_identity("C ode", c.derivative() * theta.truncate(19), (c * c).truncate(19), 19)


def test_fraction_free():
    # every coefficient of every built series is a Python int
    for s in (comtet_series(30), simple_series(30), f_m_series(4, 30)):
        assert all(type(c) is int for c in s.coeffs)
