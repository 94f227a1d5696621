"""Candidate screening, suitability scoring, ranking, scheme comparison, SWOT.

Screening runs in stages: a coarse cut on national GDP and sports
standing, then for winter events a hard climate gate (forecast February
mean temperature below 0 C and at least 30 cm of February snowfall,
with an ideal band of -17..-10 C), or for summer events a medal-points
cut. Survivors are separated by a suitability score

    total = s_base + s_evaluate,

where s_evaluate is the feature-weighted evaluation score of the city's
min-max scaled feature values. Scheme comparison aggregates a 1/3/5/7/9
impact grade per feature with the same feature weights.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Iterable, Mapping, Sequence

import numpy as np

from .combining import FeatureSelection, evaluate_chi
from .errors import ConfigError, ValidationError
from .grey import TimeSeries, forecast_indicator
from .indicators import IndicatorHierarchy, IndicatorId, Polarity

__all__ = [
    "FEB_TEMP",
    "FEB_SNOW",
    "CityProfile",
    "ClimateRequirement",
    "ClimateAssessment",
    "SuitabilityScore",
    "MedalTally",
    "SchemeId",
    "ImpactScale",
    "SchemePlan",
    "SchemeComparison",
    "SwotRecord",
    "Cutoff",
    "FeatureScaler",
    "screen_candidates",
    "winter_climate_filter",
    "medal_points",
    "suitability_score",
    "score_cities",
    "rank_cities",
    "compare_schemes",
    "swot_report",
]

#: Keys of the climate series used by the winter gate.
FEB_TEMP = "feb_temp_c"
FEB_SNOW = "feb_snow_cm"


@dataclass(frozen=True)
class CityProfile:
    """Everything known about one candidate city."""

    name: str
    country: str
    gdp: float
    sports_score: float
    climate: Mapping[str, TimeSeries] = field(default_factory=dict)
    indicators: Mapping[IndicatorId, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "climate", dict(self.climate))
        object.__setattr__(self, "indicators", dict(self.indicators))

    @property
    def key(self) -> tuple[str, str]:
        return (self.name, self.country)


@dataclass(frozen=True)
class ClimateRequirement:
    """Hard winter thresholds; the ideal band must sit below the temperature cap."""

    max_feb_temp: float = 0.0
    ideal_temp_range: tuple[float, float] = (-17.0, -10.0)
    min_feb_snow: float = 30.0

    def __post_init__(self) -> None:
        lo, hi = self.ideal_temp_range
        if not lo <= hi:
            raise ValidationError(f"ideal temperature range reversed: ({lo}, {hi})")
        if hi >= self.max_feb_temp:
            raise ValidationError(
                "ideal temperature range must lie below the maximum temperature"
            )


@dataclass(frozen=True)
class ClimateAssessment:
    """Winter-gate outcome for one city at the forecast horizon."""

    city: CityProfile
    feb_temp: float
    feb_snow: float
    passed: bool
    ideal: bool


@dataclass(frozen=True)
class SuitabilityScore:
    """Score decomposition; the total is the exact sum of its parts."""

    s_base: float
    s_evaluate: float
    total: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "total", self.s_base + self.s_evaluate)


@dataclass(frozen=True)
class MedalTally:
    """Medal counts with the 5 / 1 / 0.5 points convention."""

    gold: int
    silver: int
    bronze: int

    def __post_init__(self) -> None:
        if min(self.gold, self.silver, self.bronze) < 0:
            raise ValidationError("medal counts must be nonnegative")

    @property
    def points(self) -> float:
        return 5.0 * self.gold + 1.0 * self.silver + 0.5 * self.bronze


def medal_points(tally: MedalTally) -> float:
    return tally.points


class SchemeId(str, Enum):
    ORIGINAL = "Original"
    A = "A"
    B = "B"
    C = "C"
    D = "D"


class ImpactScale(IntEnum):
    """Five-level impact grade; only the odd values exist."""

    NO_EFFECT = 1
    SLIGHTLY_FAVORABLE = 3
    QUITE_FAVORABLE = 5
    EXTREMELY_FAVORABLE = 7
    ABSOLUTELY_FAVORABLE = 9


@dataclass(frozen=True)
class SchemePlan:
    """A hosting scheme and its per-feature impact grades."""

    id: SchemeId
    description: str
    impacts: Mapping[IndicatorId, ImpactScale]

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "impacts",
            {k: ImpactScale(v) for k, v in dict(self.impacts).items()},
        )


@dataclass(frozen=True)
class SchemeComparison:
    """Aggregate impact of one plan plus its per-feature contributions."""

    plan: SchemePlan
    aggregate: float
    contributions: dict[IndicatorId, float]


@dataclass(frozen=True)
class SwotRecord:
    """Structured qualitative entries for one city; never derived, only stored."""

    city: str
    strengths: tuple[str, ...] = ()
    weaknesses: tuple[str, ...] = ()
    opportunities: tuple[str, ...] = ()
    threats: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        for name in ("strengths", "weaknesses", "opportunities", "threats"):
            object.__setattr__(self, name, tuple(getattr(self, name)))


@dataclass(frozen=True)
class Cutoff:
    """A screening cutoff: keep the best N (rank) or everything >= v (value)."""

    kind: str
    amount: float

    def __post_init__(self) -> None:
        if self.kind not in ("rank", "value"):
            raise ConfigError(f"unknown cutoff kind {self.kind!r}")
        if self.kind == "rank" and self.amount < 1:
            raise ConfigError("rank cutoff must be at least 1")

    @classmethod
    def rank(cls, n: int) -> "Cutoff":
        return cls("rank", float(n))

    @classmethod
    def value(cls, v: float) -> "Cutoff":
        return cls("value", float(v))


def _ranks(pool: Sequence[CityProfile], metric) -> dict[tuple[str, str], int]:
    ordered = sorted(pool, key=lambda c: (-metric(c), c.name, c.country))
    return {c.key: i + 1 for i, c in enumerate(ordered)}


def screen_candidates(
    pool: Sequence[CityProfile],
    gdp_cutoff: Cutoff,
    sports_cutoff: Cutoff,
) -> list[CityProfile]:
    """First-stage screen on GDP and sports standing.

    Cities passing both cutoffs are returned stable-sorted by combined
    rank (GDP rank plus sports rank, names breaking ties). An
    over-tight cutoff yields an empty list with a warning rather than
    an error.
    """
    if not pool:
        raise ValidationError("candidate pool is empty")
    keys = [c.key for c in pool]
    if len(set(keys)) != len(keys):
        dup = next(k for i, k in enumerate(keys) if k in keys[:i])
        raise ValidationError(f"duplicate city in pool: {dup[0]!r} ({dup[1]})")

    gdp_rank = _ranks(pool, lambda c: c.gdp)
    sports_rank = _ranks(pool, lambda c: c.sports_score)

    def passes(city: CityProfile, cutoff: Cutoff, rank: int, value: float) -> bool:
        if cutoff.kind == "rank":
            return rank <= cutoff.amount
        return value >= cutoff.amount

    survivors = [
        c
        for c in pool
        if passes(c, gdp_cutoff, gdp_rank[c.key], c.gdp)
        and passes(c, sports_cutoff, sports_rank[c.key], c.sports_score)
    ]
    if not survivors:
        warnings.warn("screening cutoffs exclude every city", stacklevel=2)
        return []
    survivors.sort(key=lambda c: (gdp_rank[c.key] + sports_rank[c.key], c.name, c.country))
    return survivors


def winter_climate_filter(
    cities: Sequence[CityProfile],
    requirement: ClimateRequirement,
    until: int,
) -> list[ClimateAssessment]:
    """Grey-forecast each city's February climate to ``until`` and gate it.

    Pass requires forecast mean temperature strictly below the cap and
    snowfall at or above the minimum; the ideal flag additionally needs
    the temperature inside the ideal band.
    """
    out: list[ClimateAssessment] = []
    for city in cities:
        temp = forecast_indicator(city, FEB_TEMP, until).value_at(until)
        snow = forecast_indicator(city, FEB_SNOW, until).value_at(until)
        passed = temp < requirement.max_feb_temp and snow >= requirement.min_feb_snow
        lo, hi = requirement.ideal_temp_range
        ideal = passed and lo <= temp <= hi
        out.append(
            ClimateAssessment(
                city=city, feb_temp=float(temp), feb_snow=float(snow),
                passed=passed, ideal=ideal,
            )
        )
    return out


@dataclass(frozen=True)
class FeatureScaler:
    """Min-max scaling of feature values across the set of compared cities.

    Positive-polarity features map their observed range onto [0, 1];
    negative ones are flipped so that less is better. A feature with no
    spread across the set carries no ranking information and scales to
    a neutral 0.5.
    """

    ids: tuple[IndicatorId, ...]
    mins: np.ndarray
    maxs: np.ndarray
    flip: np.ndarray

    def __post_init__(self) -> None:
        for name in ("mins", "maxs", "flip"):
            arr = np.array(getattr(self, name))
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @classmethod
    def fit(
        cls,
        cities: Sequence[CityProfile],
        ids: Sequence[IndicatorId],
        hierarchy: IndicatorHierarchy,
    ) -> "FeatureScaler":
        if not cities:
            raise ValidationError("cannot fit a scaler on an empty city set")
        grid = np.array([[_feature_value(c, i) for i in ids] for c in cities])
        flip = np.array(
            [hierarchy.spec(i).polarity is Polarity.NEGATIVE for i in ids]
        )
        return cls(
            ids=tuple(ids),
            mins=grid.min(axis=0),
            maxs=grid.max(axis=0),
            flip=flip,
        )

    def transform(self, city: CityProfile) -> np.ndarray:
        raw = np.array([_feature_value(city, i) for i in self.ids])
        span = self.maxs - self.mins
        with np.errstate(invalid="ignore", divide="ignore"):
            scaled = np.where(span > 0, (raw - self.mins) / span, 0.5)
        scaled = np.clip(scaled, 0.0, 1.0)
        return np.where(self.flip & (span > 0), 1.0 - scaled, scaled)


def _feature_value(city: CityProfile, indicator: IndicatorId) -> float:
    try:
        return float(city.indicators[indicator])
    except KeyError:
        raise ValidationError(
            f"city {city.name!r} is missing a value for feature {indicator}"
        ) from None


def suitability_score(
    city: CityProfile,
    s_base: float,
    selection: FeatureSelection,
    scaler: FeatureScaler,
) -> SuitabilityScore:
    """Base score plus the evaluation score of the city's scaled features."""
    xi = scaler.transform(city)
    return SuitabilityScore(s_base=float(s_base), s_evaluate=evaluate_chi(selection, xi))


def score_cities(
    cities: Sequence[CityProfile],
    s_base: Mapping[str, float],
    selection: FeatureSelection,
    hierarchy: IndicatorHierarchy,
    *,
    default_base: float | None = None,
) -> list[tuple[CityProfile, SuitabilityScore]]:
    """Score every city against the others, scaling features across the set."""
    scaler = FeatureScaler.fit(cities, selection.ids, hierarchy)
    out = []
    for city in cities:
        if city.name in s_base:
            base = float(s_base[city.name])
        elif default_base is not None:
            base = float(default_base)
        else:
            raise ConfigError(f"no base score configured for city {city.name!r}")
        out.append((city, suitability_score(city, base, selection, scaler)))
    return out


def rank_cities(
    scores: Iterable[tuple[CityProfile | str, SuitabilityScore]],
) -> list[tuple[CityProfile | str, SuitabilityScore]]:
    """Order by descending total; equal totals fall back to alphabetical names."""
    entries = list(scores)
    if not entries:
        raise ValidationError("nothing to rank")

    def name_of(c) -> str:
        return c if isinstance(c, str) else c.name

    return sorted(entries, key=lambda e: (-e[1].total, name_of(e[0])))


def compare_schemes(
    plans: Sequence[SchemePlan],
    selection: FeatureSelection,
) -> list[SchemeComparison]:
    """Aggregate impact of each plan over the feature group, best first.

    Every plan must grade exactly the selected features; the aggregate
    is the feature-weighted sum of its grades, so an all-ones plan
    scores 1 and an all-nines plan scores 9.
    """
    results = []
    wanted = set(selection.ids)
    for plan in plans:
        have = set(plan.impacts)
        missing = wanted - have
        extra = have - wanted
        if missing or extra:
            parts = []
            if missing:
                parts.append("missing " + ", ".join(str(i) for i in sorted(missing)))
            if extra:
                parts.append("extraneous " + ", ".join(str(i) for i in sorted(extra)))
            raise ValidationError(
                f"plan {plan.id.value} impacts do not cover the feature group: "
                + "; ".join(parts)
            )
        contributions = {
            ind: float(g) * float(plan.impacts[ind])
            for ind, g in zip(selection.ids, selection.gamma)
        }
        results.append(
            SchemeComparison(
                plan=plan,
                aggregate=float(sum(contributions.values())),
                contributions=contributions,
            )
        )
    results.sort(key=lambda r: (-r.aggregate, r.plan.id.value))
    return results


def swot_report(records: Sequence[SwotRecord]) -> str:
    """Render stored SWOT entries; pure passthrough, no computation."""
    sections = []
    for rec in records:
        lines = [f"== {rec.city} =="]
        for title, items in (
            ("Strengths", rec.strengths),
            ("Weaknesses", rec.weaknesses),
            ("Opportunities", rec.opportunities),
            ("Threats", rec.threats),
        ):
            lines.append(f"{title}:")
            lines.extend(f"  - {item}" for item in items)
        sections.append("\n".join(lines))
    return "\n\n".join(sections) + ("\n" if sections else "")
