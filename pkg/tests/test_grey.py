"""Tests for the grey forecasting model."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hostrank.errors import ValidationError
from hostrank.grey import (
    TimeSeries,
    class_ratio_bounds,
    fit_gm11,
    forecast_indicator,
    forecast_series,
    predict,
)
from hostrank.selection import CityProfile


def geometric(q: float, n: int, c: float = 1.0) -> TimeSeries:
    return TimeSeries("geo", 2000, c * q ** np.arange(n))


class TestFit:
    def test_geometric_series_recovers_the_generator(self):
        # the model class is exactly the geometric sequences, so the fitted
        # decay rate must match the generator's -ln q
        q = math.exp(-0.1)
        model = fit_gm11(geometric(q, 4))
        assert model.alpha == pytest.approx(0.1, abs=1e-12)
        assert np.max(np.abs(model.residuals)) < 1e-12

    def test_constant_series(self):
        model = fit_gm11(TimeSeries("c", 0, np.full(4, 3.5)))
        assert model.alpha == 0.0
        assert model.mu == 3.5
        assert predict(model, 0) == pytest.approx([3.5] * 4, abs=1e-9)

    def test_short_series_rejected(self):
        with pytest.raises(ValidationError, match=">= 4"):
            fit_gm11(TimeSeries("short", 0, np.array([1.0, 2.0, 3.0])))

    def test_nonpositive_series_rejected(self):
        with pytest.raises(ValidationError, match="nonpositive"):
            fit_gm11(TimeSeries("neg", 0, np.array([1.0, -2.0, 3.0, 4.0])))

    def test_class_ratio_violation_warns_but_fits(self):
        lo, hi = class_ratio_bounds(4)
        values = np.array([1.0, 1.0, 1.0, hi * 2])  # one wild backward ratio
        with pytest.warns(UserWarning, match="class-ratio"):
            model = fit_gm11(TimeSeries("wild", 0, values))
        assert not model.class_ratio_ok

    def test_diagnostics_reported(self):
        rng = np.random.default_rng(0)
        values = np.exp(-0.05 * np.arange(8)) * (1 + rng.uniform(-0.01, 0.01, 8))
        model = fit_gm11(TimeSeries("noisy", 0, values))
        assert model.variance_ratio < 0.5
        assert model.fitted_cumulative[0] == values[0]
        # smoothness ratios x0(k) / x1(k-1), trending down for a smooth series
        assert model.smoothness == pytest.approx(
            values[1:] / np.cumsum(values)[:-1], abs=1e-15
        )
        assert np.all(np.diff(model.smoothness) < 0)
        assert model.relative_residuals == pytest.approx(
            model.residuals / values, abs=1e-15
        )


class TestPredict:
    def test_horizon_zero_returns_in_sample_only(self):
        model = fit_gm11(geometric(0.9, 5))
        assert predict(model, 0).shape == (5,)

    def test_geometric_extrapolation(self):
        q = math.exp(-0.1)
        model = fit_gm11(geometric(q, 4))
        out = predict(model, 3)
        assert out[4:] == pytest.approx([q**4, q**5, q**6], rel=1e-9)

    def test_constant_extrapolation(self):
        model = fit_gm11(TimeSeries("c", 0, np.full(4, 2.0)))
        assert predict(model, 5) == pytest.approx([2.0] * 9, abs=1e-9)

    def test_negative_horizon_rejected(self):
        model = fit_gm11(geometric(0.9, 4))
        with pytest.raises(ValidationError, match="nonnegative"):
            predict(model, -1)

    def test_first_prediction_equals_first_observation(self):
        model = fit_gm11(geometric(1.2, 6, c=3.0))
        assert predict(model, 2)[0] == 3.0


class TestForecastSeries:
    def test_history_preserved_verbatim(self):
        history = TimeSeries("snow", 2017, np.array([40.0, 41.0, 39.5, 40.5]))
        out = forecast_series(history, 2023)
        assert len(out) == 7
        assert np.array_equal(out.values[:4], history.values)
        assert out.start_period == 2017

    def test_negative_values_shift_and_match_direct_oracle(self):
        import warnings

        temps = np.array([-12.0, -11.5, -12.5, -11.8, -12.2])
        history = TimeSeries("temp", 2016, temps)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # shifted series trips the ratio band
            out = forecast_series(history, 2024)
            # oracle: fit the shifted (positive) series directly, unshift after
            shift = 1.0 - temps.min()
            shifted_model = fit_gm11(TimeSeries("temp", 2016, temps + shift))
        expected_tail = predict(shifted_model, 4)[5:] - shift
        assert out.values[5:] == pytest.approx(expected_tail, abs=0)
        assert np.array_equal(out.values[:5], temps)

    def test_until_before_history_end_rejected(self):
        history = TimeSeries("x", 2000, np.array([1.0, 2.0, 3.0, 4.0]))
        with pytest.raises(ValidationError, match="precedes"):
            forecast_series(history, 2002)

    def test_until_at_history_end_is_identity(self):
        history = geometric(0.95, 5)
        out = forecast_series(history, history.last_period)
        assert np.array_equal(out.values, history.values)


class TestForecastIndicator:
    def _city(self, values):
        return CityProfile(
            name="Testville", country="X", gdp=1.0, sports_score=1.0,
            climate={"feb_snow_cm": TimeSeries("Testville/feb_snow_cm", 2018, values)},
        )

    def test_four_point_history_three_ahead(self):
        city = self._city(np.array([40.0, 41.0, 40.5, 41.5]))
        out = forecast_indicator(city, "feb_snow_cm", 2024)
        assert len(out) == 7
        assert np.array_equal(out.values[:4], city.climate["feb_snow_cm"].values)

    def test_three_point_history_rejected(self):
        city = self._city(np.array([40.0, 41.0, 40.5]))
        with pytest.raises(ValidationError, match="need >= 4"):
            forecast_indicator(city, "feb_snow_cm", 2024)

    def test_missing_series_rejected(self):
        city = self._city(np.array([40.0, 41.0, 40.5, 41.0]))
        with pytest.raises(ValidationError, match="no series"):
            forecast_indicator(city, "feb_temp_c", 2024)


class TestGreyProperties:
    @given(
        q=st.floats(min_value=0.7, max_value=1.3),
        n=st.integers(min_value=4, max_value=12),
        c=st.floats(min_value=0.1, max_value=100.0),
    )
    @settings(max_examples=60)
    def test_exact_on_geometric_sequences(self, q, n, c):
        series = geometric(q, n, c)
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # long series can trip the ratio band
            model = fit_gm11(series)
            out = predict(model, 3)
        expected = c * q ** np.arange(n + 3)
        assert np.max(np.abs(out - expected) / expected) < 1e-9

    @given(
        q=st.floats(min_value=0.8, max_value=1.2),
        n=st.integers(min_value=4, max_value=10),
    )
    @settings(max_examples=40)
    def test_inverse_ago_consistency(self, q, n):
        """Cumulative sums of the original-scale output reproduce the
        cumulative predictions to double precision."""
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # long series can trip the ratio band
            model = fit_gm11(geometric(q, n))
        out = predict(model, 4)
        x1 = np.cumsum(out)
        ref = model.fitted_cumulative
        assert np.allclose(x1[:n], ref, rtol=1e-12, atol=0)

    @given(offset=st.integers(min_value=-3000, max_value=3000))
    @settings(max_examples=30)
    def test_time_shift_invariance(self, offset):
        base = TimeSeries("a", 2000, np.array([5.0, 5.5, 5.2, 5.8, 6.0]))
        moved = TimeSeries("a", 2000 + offset, base.values)
        out_a = forecast_series(base, 2000 + 7)
        out_b = forecast_series(moved, 2000 + offset + 7)
        assert np.array_equal(out_a.values, out_b.values)
