import pytest
from hypothesis import given, settings, strategies as st

from qseries_lab import series as S
from qseries_lab.series import Series, SeriesError

N = 32
coeff_lists = st.lists(st.integers(-9, 9), min_size=N + 1, max_size=N + 1)
series_st = coeff_lists.map(lambda v: Series(v, N))
unit_series = st.tuples(st.sampled_from([1, -1]), st.lists(st.integers(-9, 9), min_size=N, max_size=N)).map(
    lambda t: Series([t[0], *t[1]], N)
)


def q(order):
    return S.monomial(1, 1, order)


class TestConstruction:
    def test_constant(self):
        assert Series([1], 4).coeffs == (1, 0, 0, 0, 0)

    def test_variable(self):
        assert Series([0, 1], 3) == q(3)

    def test_direct(self):
        assert S.series_from_coeffs([1, -1, 0, 2], 3).coeffs == (1, -1, 0, 2)

    def test_negative_order(self):
        with pytest.raises(SeriesError):
            Series([1], -1)

    def test_too_many_coefficients(self):
        with pytest.raises(SeriesError):
            Series([1, 2, 3], 1)

    def test_str(self):
        assert str(Series([1, -1, 0, 2], 3)) == "1 - q + 2*q^3 + O(q^4)"
        assert str(S.zero(2)) == "0 + O(q^3)"


class TestArithmetic:
    def test_add(self):
        assert S.add(Series([1, 1], 3), Series([1, -1], 3)) == S.constant(2, 3)

    def test_neg(self):
        assert S.neg(S.monomial(1, 2, 4)) == S.monomial(-1, 2, 4)

    def test_mul_difference_of_squares(self):
        assert S.mul(Series([1, 1], 4), Series([1, -1], 4)).coeffs == (1, 0, -1, 0, 0)

    def test_three_factor_product(self):
        f = S.one(6)
        for k in (1, 2, 3):
            f = S.times_binomial(f, 1, k)
        assert f.coeffs == (1, -1, -1, 0, 1, 1, -1)

    def test_power(self):
        assert (Series([1, 1], 5) ** 3).coeffs == (1, 3, 3, 1, 0, 0)
        assert Series([3, 1], 5) ** 0 == S.one(5)

    def test_invert_geometric(self):
        assert S.invert(Series([1, -1], 4)).coeffs == (1, 1, 1, 1, 1)

    def test_invert_one(self):
        assert S.invert(S.one(7)) == S.one(7)

    def test_invert_partition_count(self):
        f = S.one(5)
        for k in range(1, 6):
            f = S.times_binomial(f, 1, k)
        assert S.invert(f)[5] == 7

    @pytest.mark.parametrize("c0", [0, 2, -3])
    def test_invert_needs_unit(self, c0):
        with pytest.raises(SeriesError):
            S.invert(Series([c0, 1], 3))

    def test_over_binomial_matches_invert(self):
        f = Series([1, 2, 3, 4, 5, 6], 5)
        assert S.over_binomial(f, 1, 2) == S.mul(f, S.invert(S.times_binomial(S.one(5), 1, 2)))


class TestShifts:
    def test_shift(self):
        assert S.shift(Series([1, 1], 4), 2).coeffs == (0, 0, 1, 1, 0)

    def test_shift_zero(self):
        f = Series([4, 5, 6], 2)
        assert S.shift(f, 0) == f

    def test_shift_negative(self):
        with pytest.raises(SeriesError):
            S.shift(S.one(3), -1)

    def test_shift_down(self):
        f = Series([0, 0, 0, 1, 1], 4)
        assert S.shift_down(f, 3).coeffs == (1, 1)

    def test_shift_down_requires_vanishing(self):
        with pytest.raises(SeriesError):
            S.shift_down(Series([0, 1, 0, 1], 3), 2)

    def test_dilate(self):
        assert S.dilate(Series([1, 1, 1], 6), 3).coeffs == (1, 0, 0, 1, 0, 0, 1)


class TestCoefficients:
    def test_coeff(self):
        assert S.coeff(Series([1, 0, 0, 2], 3), 3) == 2

    @pytest.mark.parametrize("n", [-1, 4])
    def test_coeff_out_of_range(self, n):
        with pytest.raises(IndexError):
            S.coeff(Series([1], 3), n)

    def test_reduce_mod(self):
        assert S.reduce_mod(Series([0, 2, 3], 2), 2).coeffs == (0, 0, 1)

    def test_reduce_mod_small_modulus(self):
        with pytest.raises(SeriesError):
            S.reduce_mod(S.one(2), 1)

    def test_reduce_mod_negative_coefficients(self):
        assert S.reduce_mod(Series([-1, -4, -7], 2), 4).coeffs == (3, 0, 1)


class TestComparison:
    def test_equal_self(self):
        f = Series([3, 1, 4, 1, 5], 4)
        assert S.equal_up_to(f, f, 4)

    def test_mismatch(self):
        cmp = S.equal_up_to(Series([1, 1], 1), Series([1, -1], 1), 1)
        assert not cmp
        assert cmp.mismatch == S.Mismatch(1, 1, -1)

    def test_modular(self):
        assert S.equal_up_to(Series([1, 3], 1), Series([3, 1], 1), 1, modulus=2)

    def test_beyond_order(self):
        with pytest.raises(SeriesError):
            S.equal_up_to(S.one(3), S.one(5), 4)


class TestSerialization:
    def test_round_trip_big_integers(self):
        f = Series([10**40, -(10**30), 7], 2)
        assert S.from_json(f.to_json()) == f

    def test_coefficients_are_strings(self):
        assert S.to_dict(Series([5, -1], 1)) == {"order": 1, "coeffs": ["5", "-1"]}

    @pytest.mark.parametrize("data", [{}, {"order": 2, "coeffs": ["1"]}, {"order": 1, "coeffs": ["x", "1"]}])
    def test_malformed(self, data):
        with pytest.raises(SeriesError):
            S.from_dict(data)


class TestRingAxioms:
    @given(series_st, series_st, series_st)
    @settings(max_examples=60, deadline=None)
    def test_ring(self, f, g, h):
        assert f + g == g + f
        assert f * g == g * f
        assert (f + g) + h == f + (g + h)
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h
        assert f - f == S.zero(N)
        assert f * S.one(N) == f

    @given(unit_series, series_st)
    @settings(max_examples=60, deadline=None)
    def test_inverse(self, u, f):
        assert u * S.invert(u) == S.one(N)
        assert S.divide(f, u) * u == f

    @given(series_st, st.integers(0, N))
    @settings(max_examples=60, deadline=None)
    def test_shift_then_shift_down(self, f, a):
        assert S.shift_down(S.shift(f, a), a) == f.truncate(N - a)

    @given(series_st, st.integers(-3, 3), st.integers(1, 8))
    @settings(max_examples=60, deadline=None)
    def test_binomial_round_trip(self, f, c, e):
        if c == 0:
            return
        assert S.over_binomial(S.times_binomial(f, c, e), c, e) == f

    @given(series_st, st.integers(2, 9))
    @settings(max_examples=60, deadline=None)
    def test_reduce_mod_is_homomorphic(self, f, m):
        assert S.reduce_mod(f * f, m) == S.reduce_mod(S.reduce_mod(f, m) * S.reduce_mod(f, m), m)
