"""Robustness analysis: random feature substitution and response surfaces.

Substitution trials replace a seeded random subset of the selected
feature group with draws from the unselected indicators, renormalize
weights over the new group from its total weights, and record how each
alternative's evaluation score moves. Every trial derives its random
stream from (seed, trial index), so runs are reproducible and
schedule-independent.

The response-surface side builds three-level second-order designs,
fits a full quadratic by least squares, and locates box-constrained
extrema exactly via stationary-point plus boundary enumeration.
"""

from __future__ import annotations

import io
import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .combining import FeatureSelection, TotalWeights, weighted_score
from .errors import ConfigError, NumericError, ValidationError
from .indicators import DecisionMatrix, IndicatorHierarchy, IndicatorId
from .selection import CityProfile, FeatureScaler

__all__ = [
    "PerturbationConfig",
    "TrialRecord",
    "SensitivityReport",
    "BBDesign",
    "QuadraticSurface",
    "SurfaceExtrema",
    "factor_substitution",
    "bbd_design",
    "fit_response_surface",
    "surface_extrema",
]


@dataclass(frozen=True)
class PerturbationConfig:
    """Substitution-trial parameters. ``n_swap=0`` runs identity trials."""

    seed: int
    n_swap: int = 5
    trials: int = 1

    def __post_init__(self) -> None:
        if self.seed < 0:
            raise ConfigError("seed must be a nonnegative integer")
        if self.n_swap < 0:
            raise ConfigError("n_swap must be nonnegative")
        if self.trials < 1:
            raise ConfigError("need at least one trial")


@dataclass(frozen=True)
class TrialRecord:
    """One substitution trial: what was swapped and how the scores moved."""

    index: int
    removed: tuple[IndicatorId, ...]
    added: tuple[IndicatorId, ...]
    chi: dict[str, float]
    abs_deviation: dict[str, float]
    rel_deviation: dict[str, float]


@dataclass(frozen=True)
class SensitivityReport:
    """Baseline scores, per-trial records, and deviation summaries."""

    config: PerturbationConfig
    baseline: dict[str, float]
    trials: tuple[TrialRecord, ...]
    summary: dict[str, dict[str, float]]

    def to_csv_text(self) -> str:
        """Deterministic serialization; byte-identical for identical configs."""
        out = io.StringIO()
        out.write("section,trial,alternative,swapped_out,swapped_in,chi,abs_dev,rel_dev\n")
        for alt in self.baseline:
            out.write(f"baseline,,{alt},,,{self.baseline[alt]!r},,\n")
        for t in self.trials:
            removed = "|".join(str(i) for i in t.removed)
            added = "|".join(str(i) for i in t.added)
            for alt in t.chi:
                out.write(
                    f"trial,{t.index},{alt},{removed},{added},"
                    f"{t.chi[alt]!r},{t.abs_deviation[alt]!r},{t.rel_deviation[alt]!r}\n"
                )
        for alt, stats in self.summary.items():
            for key, value in stats.items():
                out.write(f"summary,,{alt},{key},,{value!r},,\n")
        return out.getvalue()


def factor_substitution(
    selection: FeatureSelection,
    omega: TotalWeights,
    data: DecisionMatrix,
    config: PerturbationConfig,
    hierarchy: IndicatorHierarchy,
) -> SensitivityReport:
    """Seeded random feature-substitution trials against a baseline.

    Each trial draws ``n_swap`` unselected indicators and ``n_swap``
    positions in the feature group, installs the substitutes at those
    positions, renormalizes the group weights from total weights, and
    re-scores every alternative in ``data``. Identity trials (no swap)
    deviate by exactly zero.
    """
    if config.n_swap > selection.k:
        raise ConfigError(
            f"n_swap={config.n_swap} exceeds the feature-group size {selection.k}"
        )
    omega_by_id = omega.by_id()
    unselected = [i for i in omega.ids if i not in set(selection.ids)]
    if len(unselected) < config.n_swap:
        raise ValidationError(
            f"only {len(unselected)} unselected indicators available; "
            f"need {config.n_swap}"
        )

    alternatives = {label: data.row(label) for label in data.rows}
    baseline = _score_group(selection.ids, selection.gamma, alternatives, hierarchy)

    trials: list[TrialRecord] = []
    for t in range(config.trials):
        rng = np.random.default_rng([config.seed, t])
        if config.n_swap == 0:
            group = list(selection.ids)
            removed: tuple[IndicatorId, ...] = ()
            added: tuple[IndicatorId, ...] = ()
        else:
            positions = sorted(
                rng.choice(selection.k, size=config.n_swap, replace=False).tolist()
            )
            picks = sorted(
                rng.choice(len(unselected), size=config.n_swap, replace=False).tolist()
            )
            group = list(selection.ids)
            removed = tuple(group[p] for p in positions)
            added = tuple(unselected[p] for p in picks)
            for pos, sub in zip(positions, added):
                group[pos] = sub
        gamma = np.array([omega_by_id[i] for i in group])
        total = gamma.sum()
        if total <= 0:
            raise NumericError("substituted group carries no total weight")
        gamma = gamma / total
        chi = _score_group(tuple(group), gamma, alternatives, hierarchy)
        abs_dev = {alt: chi[alt] - baseline[alt] for alt in chi}
        rel_dev = {
            alt: (abs_dev[alt] / abs(baseline[alt]) if baseline[alt] != 0 else float("nan"))
            for alt in chi
        }
        trials.append(
            TrialRecord(
                index=t, removed=removed, added=added,
                chi=chi, abs_deviation=abs_dev, rel_deviation=rel_dev,
            )
        )

    summary: dict[str, dict[str, float]] = {}
    for alt in baseline:
        devs = np.array([abs(t.abs_deviation[alt]) for t in trials])
        summary[alt] = {
            "mean_abs_dev": float(devs.mean()),
            "max_abs_dev": float(devs.max()),
            "std_abs_dev": float(devs.std()),
        }
    all_devs = np.array(
        [abs(t.abs_deviation[alt]) for t in trials for alt in baseline]
    )
    summary["(overall)"] = {
        "mean_abs_dev": float(all_devs.mean()),
        "max_abs_dev": float(all_devs.max()),
        "std_abs_dev": float(all_devs.std()),
    }
    return SensitivityReport(
        config=config, baseline=baseline, trials=tuple(trials), summary=summary
    )


def _score_group(
    ids: tuple[IndicatorId, ...],
    gamma: np.ndarray,
    alternatives: dict[str, dict[IndicatorId, float]],
    hierarchy: IndicatorHierarchy,
) -> dict[str, float]:
    """Min-max scale the group's columns across alternatives and score each."""
    profiles = [
        CityProfile(name=label, country="", gdp=0.0, sports_score=0.0, indicators=vals)
        for label, vals in alternatives.items()
    ]
    scaler = FeatureScaler.fit(profiles, ids, hierarchy)
    return {p.name: weighted_score(gamma, scaler.transform(p)) for p in profiles}


@dataclass(frozen=True)
class BBDesign:
    """Three-level design: edge-midpoint points plus center replicates.

    For k >= 3 every non-center point sets exactly two factors to +-1,
    giving 4 * k(k-1)/2 points before the centers; k = 2 falls back to
    the full two-level factorial with centers.
    """

    factor_count: int
    points: np.ndarray
    center_replicates: int

    def __post_init__(self) -> None:
        pts = np.array(self.points, dtype=float)
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]


def bbd_design(k: int, center_replicates: int = 3) -> BBDesign:
    """Build the three-level second-order design for ``k`` factors."""
    if k < 2:
        raise ValidationError("response-surface designs need at least 2 factors")
    if center_replicates < 0:
        raise ValidationError("center replicate count must be nonnegative")
    rows: list[np.ndarray] = []
    signs = ((-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0))
    if k == 2:
        for s in signs:
            rows.append(np.array(s))
    else:
        for i, j in itertools.combinations(range(k), 2):
            for si, sj in signs:
                point = np.zeros(k)
                point[i] = si
                point[j] = sj
                rows.append(point)
    rows.extend(np.zeros(k) for _ in range(center_replicates))
    return BBDesign(factor_count=k, points=np.vstack(rows), center_replicates=center_replicates)


@dataclass(frozen=True)
class QuadraticSurface:
    """Full second-order polynomial in k factors with fit diagnostics.

    Coefficient layout: intercept, k linear terms, k(k-1)/2 pairwise
    interaction terms in lexicographic pair order, k square terms.
    """

    factor_count: int
    intercept: float
    linear: np.ndarray
    interactions: np.ndarray
    squares: np.ndarray
    r_squared: float
    residual_norm: float

    def __post_init__(self) -> None:
        for name in ("linear", "interactions", "squares"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def coefficient_count(self) -> int:
        k = self.factor_count
        return 1 + k + k * (k - 1) // 2 + k

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return _design_matrix(pts, self.factor_count) @ self._coef_vector()

    def evaluate_one(self, point: Sequence[float]) -> float:
        return float(self.evaluate(np.asarray(point))[0])

    def hessian(self) -> np.ndarray:
        k = self.factor_count
        h = np.zeros((k, k))
        for idx, (i, j) in enumerate(itertools.combinations(range(k), 2)):
            h[i, j] = h[j, i] = self.interactions[idx]
        h[np.diag_indices(k)] = 2.0 * self.squares
        return h

    def gradient_at(self, point: np.ndarray) -> np.ndarray:
        return self.linear + self.hessian() @ np.asarray(point, dtype=float)

    def _coef_vector(self) -> np.ndarray:
        return np.concatenate(
            [[self.intercept], self.linear, self.interactions, self.squares]
        )


def _design_matrix(points: np.ndarray, k: int) -> np.ndarray:
    cols = [np.ones(points.shape[0])]
    cols.extend(points[:, i] for i in range(k))
    cols.extend(points[:, i] * points[:, j] for i, j in itertools.combinations(range(k), 2))
    cols.extend(points[:, i] ** 2 for i in range(k))
    return np.column_stack(cols)


def fit_response_surface(
    design: BBDesign | np.ndarray,
    responses: Sequence[float],
) -> QuadraticSurface:
    """Least-squares fit of the full quadratic to design-point responses."""
    points = design.points if isinstance(design, BBDesign) else np.atleast_2d(np.asarray(design, dtype=float))
    y = np.asarray(responses, dtype=float)
    if y.shape != (points.shape[0],):
        raise ValidationError(
            f"got {y.shape[0] if y.ndim else 0} responses for {points.shape[0]} design points"
        )
    k = points.shape[1]
    x = _design_matrix(points, k)
    n_coef = x.shape[1]
    if np.linalg.matrix_rank(x) < n_coef:
        raise NumericError(
            "design matrix is rank-deficient; the full quadratic is not identifiable"
        )
    coef, _, _, _ = np.linalg.lstsq(x, y, rcond=None)
    fitted = x @ coef
    ss_res = float(((y - fitted) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    if np.ptp(y) == 0.0 or ss_tot == 0.0:
        # constant responses: the intercept-only fit is already perfect
        r_squared = 1.0
    else:
        r_squared = 1.0 - ss_res / ss_tot
    n_pairs = k * (k - 1) // 2
    return QuadraticSurface(
        factor_count=k,
        intercept=float(coef[0]),
        linear=coef[1 : 1 + k],
        interactions=coef[1 + k : 1 + k + n_pairs],
        squares=coef[1 + k + n_pairs :],
        r_squared=r_squared,
        residual_norm=ss_res**0.5,
    )


@dataclass(frozen=True)
class SurfaceExtrema:
    """Box-constrained extrema of a quadratic surface and response ranges.

    ``span`` is the absolute response range max - min; relative ranges
    divide a span by the absolute response at the box center (infinite
    when the center response is zero). Per-factor entries vary one
    factor with the others held at center.
    """

    min_point: np.ndarray
    min_value: float
    max_point: np.ndarray
    max_value: float
    baseline: float
    span: float
    per_factor_span: np.ndarray
    per_factor_range: np.ndarray
    joint_range: float

    def __post_init__(self) -> None:
        for name in ("min_point", "max_point", "per_factor_span", "per_factor_range"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


_BOUND_TOL = 1e-12


def _box_candidates(
    surface: QuadraticSurface,
    lows: np.ndarray,
    highs: np.ndarray,
    free_mask: np.ndarray,
    fixed_point: np.ndarray,
) -> list[np.ndarray]:
    """Candidate extremum points on one face given which coordinates float."""
    k = surface.factor_count
    free = np.flatnonzero(free_mask)
    if free.size == 0:
        return [fixed_point.copy()]
    h = surface.hessian()
    g0 = surface.linear
    fixed = np.flatnonzero(~free_mask)
    # Stationary point of the quadratic restricted to the free coordinates.
    rhs = -(g0[free] + h[np.ix_(free, fixed)] @ fixed_point[fixed])
    try:
        sol = np.linalg.solve(h[np.ix_(free, free)], rhs)
    except np.linalg.LinAlgError:
        return []
    point = fixed_point.copy()
    point[free] = sol
    inside = np.all(point[free] >= lows[free] - _BOUND_TOL) and np.all(
        point[free] <= highs[free] + _BOUND_TOL
    )
    if not inside:
        return []
    point[free] = np.clip(point[free], lows[free], highs[free])
    return [point]


def surface_extrema(
    surface: QuadraticSurface,
    box: Sequence[tuple[float, float]],
) -> SurfaceExtrema:
    """Exact box-constrained extrema by stationary-point and face enumeration.

    Every way of pinning a subset of coordinates to a bound is
    enumerated; the quadratic restricted to the remaining coordinates
    is solved for its stationary point and kept when it falls inside
    the box. This is exact for quadratics and needs no iterative
    optimizer. Surfaces with singular (sub-)Hessians, e.g. purely
    additive ones, simply contribute no interior candidates and resolve
    on the box corners.
    """
    k = surface.factor_count
    bounds = np.asarray(box, dtype=float)
    if bounds.shape != (k, 2):
        raise ValidationError(f"box must give (low, high) for each of {k} factors")
    lows, highs = bounds[:, 0], bounds[:, 1]
    if np.any(lows > highs):
        raise ValidationError("box has low > high")

    candidates: list[np.ndarray] = []
    for combo in itertools.product((0, 1, 2), repeat=k):
        fixed_point = np.zeros(k)
        free_mask = np.zeros(k, dtype=bool)
        for i, state in enumerate(combo):
            if state == 0:
                fixed_point[i] = lows[i]
            elif state == 1:
                fixed_point[i] = highs[i]
            else:
                free_mask[i] = True
        candidates.extend(
            _box_candidates(surface, lows, highs, free_mask, fixed_point)
        )

    values = np.array([surface.evaluate_one(p) for p in candidates])
    i_min = int(np.argmin(values))
    i_max = int(np.argmax(values))
    span = float(values[i_max] - values[i_min])

    center = (lows + highs) / 2.0
    baseline = surface.evaluate_one(center)

    def relative(value: float) -> float:
        return value / abs(baseline) if baseline != 0.0 else float("inf")

    per_factor_span = np.empty(k)
    for i in range(k):
        sub_candidates = [center.copy()]
        for bound in (lows[i], highs[i]):
            p = center.copy()
            p[i] = bound
            sub_candidates.append(p)
        # Interior 1-D stationary point along axis i.
        mask = np.zeros(k, dtype=bool)
        mask[i] = True
        sub_candidates.extend(_box_candidates(surface, lows, highs, mask, center.copy()))
        vals = np.array([surface.evaluate_one(p) for p in sub_candidates])
        per_factor_span[i] = vals.max() - vals.min()

    return SurfaceExtrema(
        min_point=candidates[i_min],
        min_value=float(values[i_min]),
        max_point=candidates[i_max],
        max_value=float(values[i_max]),
        baseline=baseline,
        span=span,
        per_factor_span=per_factor_span,
        per_factor_range=np.array([relative(s) for s in per_factor_span]),
        joint_range=relative(span),
    )
