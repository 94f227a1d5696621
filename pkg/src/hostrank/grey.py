"""Grey forecasting with the single-variable first-order model.

The model accumulates the series (x1 = cumsum x0), fits the whitened
equation dx1/dt + alpha * x1 = mu, and predicts through the general
solution

    x1_hat(k+1) = (x0(1) - mu/alpha) * exp(-alpha k) + mu/alpha,

recovering original-scale forecasts by first differences. The least
squares runs on the standard midpoint background values
z(k) = (x1(k) + x1(k-1)) / 2; its raw coefficients (a, b) describe the
discrete relation x0(k) = b - a z(k) and are then mapped to the
continuous pair

    alpha = ln((2 + a) / (2 - a)),    mu = b * alpha / a,

which is the exact discrete-to-continuous correspondence: data that
satisfy the discrete relation without residual (any geometric series)
are reproduced and extrapolated by the exponential solution to machine
precision. As a -> 0 the mapping tends to (a, b); below 1e-12 the
exponential degenerates to linear cumulative growth and forecasts
equal mu.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import NumericError, ValidationError

if TYPE_CHECKING:  # pragma: no cover
    from .selection import CityProfile

__all__ = [
    "TimeSeries",
    "GreyModel",
    "class_ratio_bounds",
    "fit_gm11",
    "predict",
    "forecast_series",
    "forecast_indicator",
]

_MIN_LENGTH = 4
_ALPHA_EPS = 1e-12
_COEF_LIMIT = 2.0


@dataclass(frozen=True)
class TimeSeries:
    """A labelled, evenly spaced series starting at ``start_period``.

    Fitting requires at least four strictly positive observations;
    series holding raw data (e.g. sub-zero temperatures) may violate
    that and must be shifted before fitting (see
    :func:`forecast_series`).
    """

    label: str
    start_period: int
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=float)
        if vals.ndim != 1:
            raise ValidationError("time series values must be 1-D")
        if not np.all(np.isfinite(vals)):
            raise ValidationError(f"series {self.label!r} contains non-finite values")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.values.size

    @property
    def periods(self) -> np.ndarray:
        return self.start_period + np.arange(self.values.size)

    @property
    def last_period(self) -> int:
        return self.start_period + self.values.size - 1

    def value_at(self, period: int) -> float:
        idx = period - self.start_period
        if not 0 <= idx < self.values.size:
            raise ValidationError(
                f"period {period} outside series {self.label!r} "
                f"({self.start_period}..{self.last_period})"
            )
        return float(self.values[idx])


@dataclass(frozen=True)
class GreyModel:
    """Fitted grey model: developing coefficient, control coefficient, diagnostics.

    ``fitted_cumulative`` starts at the first observation exactly;
    ``midpoint_coefficients`` are the raw least-squares pair before the
    continuous mapping. ``smoothness`` records the ratios
    x0(k) / x1(k-1) for k >= 2 (a falling trend marks a series the model
    suits); ``variance_ratio`` is the posterior ratio of residual to
    data spread (smaller is better).
    """

    alpha: float
    mu: float
    source: TimeSeries
    fitted_cumulative: np.ndarray
    residuals: np.ndarray
    midpoint_coefficients: tuple[float, float]
    class_ratio_ok: bool
    smoothness: np.ndarray
    variance_ratio: float

    def __post_init__(self) -> None:
        for name in ("fitted_cumulative", "residuals", "smoothness"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def relative_residuals(self) -> np.ndarray:
        return self.residuals / self.source.values


def class_ratio_bounds(n: int) -> tuple[float, float]:
    """Admissible band for the backward ratios x0(k-1)/x0(k) of an n-point series."""
    return math.exp(-2.0 / (n + 1)), math.exp(2.0 / (n + 1))


def _check_class_ratios(values: np.ndarray, label: str) -> bool:
    lo, hi = class_ratio_bounds(values.size)
    ratios = values[:-1] / values[1:]
    ok = bool(np.all((ratios > lo) & (ratios < hi)))
    if not ok:
        warnings.warn(
            f"series {label!r} fails the class-ratio test "
            f"(ratios outside ({lo:.4f}, {hi:.4f})); fit may extrapolate poorly",
            stacklevel=3,
        )
    return ok


def _cumulative_curve(alpha: float, mu: float, first: float, count: int) -> np.ndarray:
    k = np.arange(count, dtype=float)
    if abs(alpha) < _ALPHA_EPS:
        # Removable singularity: linear cumulative growth.
        out = first + mu * k
    else:
        out = (first - mu / alpha) * np.exp(-alpha * k) + mu / alpha
    out[0] = first  # anchored exactly; (first - c) + c need not round back
    return out


def fit_gm11(series: TimeSeries) -> GreyModel:
    """Fit the grey model to a positive series of length >= 4.

    A failed class-ratio test only warns; the caller decides whether a
    poorly conditioned series is acceptable. A dispersion-free series
    is handled exactly (alpha = 0, mu = the constant).
    """
    x0 = series.values
    n = x0.size
    if n < _MIN_LENGTH:
        raise ValidationError(
            f"series {series.label!r} has {n} observations; need >= {_MIN_LENGTH}"
        )
    if np.any(x0 <= 0):
        raise ValidationError(
            f"series {series.label!r} has nonpositive values; shift before fitting"
        )
    ratio_ok = _check_class_ratios(x0, series.label)
    cumulative = np.cumsum(x0)
    smoothness = x0[1:] / cumulative[:-1]

    if x0.max() == x0.min():
        c = float(x0[0])
        fitted1 = c * np.arange(1, n + 1, dtype=float)
        return GreyModel(
            alpha=0.0,
            mu=c,
            source=series,
            fitted_cumulative=fitted1,
            residuals=np.zeros(n),
            midpoint_coefficients=(0.0, c),
            class_ratio_ok=ratio_ok,
            smoothness=smoothness,
            variance_ratio=0.0,
        )

    x1 = cumulative
    z = 0.5 * (x1[1:] + x1[:-1])
    design = np.column_stack([-z, np.ones(n - 1)])
    coef, _, rank, _ = np.linalg.lstsq(design, x0[1:], rcond=None)
    if rank < 2:
        raise NumericError(f"singular normal equations for series {series.label!r}")
    a, b = float(coef[0]), float(coef[1])
    if abs(a) >= _COEF_LIMIT:
        raise NumericError(
            f"development coefficient {a!r} outside the stable range "
            f"(-{_COEF_LIMIT}, {_COEF_LIMIT}) for series {series.label!r}"
        )
    if abs(a) < _ALPHA_EPS:
        alpha, mu = a, b
    else:
        alpha = math.log((_COEF_LIMIT + a) / (_COEF_LIMIT - a))
        mu = b * alpha / a

    fitted1 = _cumulative_curve(alpha, mu, float(x0[0]), n)
    fitted0 = np.concatenate([[fitted1[0]], np.diff(fitted1)])
    residuals = x0 - fitted0
    spread = float(np.std(x0))
    variance_ratio = float(np.std(residuals[1:]) / spread) if spread > 0 else 0.0
    return GreyModel(
        alpha=alpha,
        mu=mu,
        source=series,
        fitted_cumulative=fitted1,
        residuals=residuals,
        midpoint_coefficients=(a, b),
        class_ratio_ok=ratio_ok,
        smoothness=smoothness,
        variance_ratio=variance_ratio,
    )


def predict(model: GreyModel, horizon: int) -> np.ndarray:
    """In-sample fitted values plus ``horizon`` original-scale forecasts.

    Returns length n + horizon; the first entry equals the first
    observation exactly, and cumulative sums of the result reproduce
    the cumulative predictions.
    """
    if horizon < 0:
        raise ValidationError("horizon must be nonnegative")
    n = len(model.source)
    x1 = _cumulative_curve(model.alpha, model.mu, float(model.source.values[0]), n + horizon)
    return np.concatenate([[x1[0]], np.diff(x1)])


def forecast_series(series: TimeSeries, until: int) -> TimeSeries:
    """History concatenated with grey forecasts through period ``until``.

    Series containing nonpositive values (e.g. temperatures) are
    shifted by 1 - min before fitting and shifted back after, so the
    returned history is always the input verbatim.
    """
    if until < series.last_period:
        raise ValidationError(
            f"until={until} precedes the last observation ({series.last_period})"
        )
    horizon = until - series.last_period
    lowest = float(series.values.min())
    shift = 1.0 - lowest if lowest <= 0.0 else 0.0
    fit_input = series if shift == 0.0 else TimeSeries(
        label=series.label,
        start_period=series.start_period,
        values=series.values + shift,
    )
    model = fit_gm11(fit_input)
    tail = predict(model, horizon)[len(series):] - shift
    return TimeSeries(
        label=series.label,
        start_period=series.start_period,
        values=np.concatenate([series.values, tail]),
    )


def forecast_indicator(city: "CityProfile", indicator: str, until: int) -> TimeSeries:
    """Forecast one of a city's climate series through ``until``."""
    if indicator not in city.climate:
        raise ValidationError(
            f"city {city.name!r} has no series for {indicator!r}"
        )
    series = city.climate[indicator]
    if len(series) < _MIN_LENGTH:
        raise ValidationError(
            f"city {city.name!r} has only {len(series)} observations of "
            f"{indicator!r}; need >= {_MIN_LENGTH}"
        )
    return forecast_series(series, until)
