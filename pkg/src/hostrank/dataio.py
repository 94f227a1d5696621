"""Loaders for the file formats consumed by the CLI.

Formats are documented in docs/data-format.md: JSON for structured
inputs (hierarchy, judgment matrices, city pools with embedded series,
plans, SWOT records), delimiter-separated text for flat tables
(decision matrix, simple pools, climate observations).
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import IO, Mapping, Sequence

import numpy as np

from .errors import ConfigError, ValidationError
from .grey import TimeSeries
from .indicators import IndicatorId
from .selection import CityProfile, ClimateRequirement, SchemeId, SchemePlan, SwotRecord

__all__ = [
    "load_judgments",
    "load_pool",
    "load_climate_csv",
    "merge_climate",
    "load_plans",
    "load_swot",
    "load_requirement",
]


def _read_text(source: str | Path | IO[str]) -> str:
    if isinstance(source, (str, Path)):
        return Path(source).read_text(encoding="utf-8")
    return source.read()


def load_judgments(source: str | Path | IO[str]) -> dict[str, list[list[float]]]:
    """Judgment matrices keyed by level name ('primary' or a category letter)."""
    obj = json.loads(_read_text(source))
    if not isinstance(obj, dict):
        raise ConfigError("judgments file must map level names to nested arrays")
    return {str(k): v for k, v in obj.items()}


def _series_from_obj(label: str, entry: Mapping) -> TimeSeries:
    return TimeSeries(
        label=label,
        start_period=int(entry["start_period"]),
        values=np.asarray(entry["values"], dtype=float),
    )


def load_pool(source: str | Path | IO[str]) -> list[CityProfile]:
    """Load a city pool from JSON (rich profiles) or CSV (flat metrics)."""
    text = _read_text(source)
    if text.lstrip()[:1] == "{":
        return _pool_from_json(text)
    return _pool_from_csv(text)


def _pool_from_json(text: str) -> list[CityProfile]:
    obj = json.loads(text)
    cities = []
    for entry in obj["cities"]:
        climate = {
            str(var): _series_from_obj(f"{entry['name']}/{var}", series)
            for var, series in entry.get("climate", {}).items()
        }
        indicators = {
            IndicatorId.parse(k): float(v)
            for k, v in entry.get("indicators", {}).items()
        }
        cities.append(
            CityProfile(
                name=str(entry["name"]),
                country=str(entry.get("country", "")),
                gdp=float(entry.get("gdp", 0.0)),
                sports_score=float(entry.get("sports_score", 0.0)),
                climate=climate,
                indicators=indicators,
            )
        )
    _check_unique(cities)
    return cities


def _pool_from_csv(text: str) -> list[CityProfile]:
    reader = csv.DictReader(io.StringIO(text))
    required = {"name", "country", "gdp", "sports_score"}
    if reader.fieldnames is None or not required.issubset(reader.fieldnames):
        raise ValidationError(
            f"pool file must have columns {sorted(required)}, "
            f"got {reader.fieldnames}"
        )
    cities = []
    for row in reader:
        try:
            cities.append(
                CityProfile(
                    name=row["name"].strip(),
                    country=row["country"].strip(),
                    gdp=float(row["gdp"]),
                    sports_score=float(row["sports_score"]),
                )
            )
        except ValueError as exc:
            raise ValidationError(
                f"bad numeric value in pool row {row['name']!r}: {exc}"
            ) from None
    _check_unique(cities)
    return cities


def _check_unique(cities: Sequence[CityProfile]) -> None:
    keys = [c.key for c in cities]
    if len(set(keys)) != len(keys):
        dup = next(k for i, k in enumerate(keys) if k in keys[:i])
        raise ValidationError(f"duplicate city {dup[0]!r} ({dup[1]}) in pool")


def load_climate_csv(source: str | Path | IO[str]) -> dict[str, dict[str, TimeSeries]]:
    """Observations as rows (city, variable, period, value), assembled into series.

    Periods for each (city, variable) must form a contiguous run.
    """
    reader = csv.DictReader(io.StringIO(_read_text(source)))
    required = {"city", "variable", "period", "value"}
    if reader.fieldnames is None or not required.issubset(reader.fieldnames):
        raise ValidationError(
            f"climate file must have columns {sorted(required)}, got {reader.fieldnames}"
        )
    buckets: dict[tuple[str, str], list[tuple[int, float]]] = {}
    for row in reader:
        key = (row["city"].strip(), row["variable"].strip())
        try:
            buckets.setdefault(key, []).append(
                (int(row["period"]), float(row["value"]))
            )
        except ValueError as exc:
            raise ValidationError(f"bad climate row for {key}: {exc}") from None
    out: dict[str, dict[str, TimeSeries]] = {}
    for (city, var), points in buckets.items():
        points.sort()
        periods = [p for p, _ in points]
        if periods != list(range(periods[0], periods[0] + len(periods))):
            raise ValidationError(
                f"climate series {city}/{var} has gaps or duplicate periods"
            )
        out.setdefault(city, {})[var] = TimeSeries(
            label=f"{city}/{var}",
            start_period=periods[0],
            values=np.array([v for _, v in points]),
        )
    return out


def merge_climate(
    cities: Sequence[CityProfile],
    climate: Mapping[str, Mapping[str, TimeSeries]],
) -> list[CityProfile]:
    """Attach externally loaded climate series, overriding embedded ones."""
    out = []
    for c in cities:
        extra = climate.get(c.name)
        if not extra:
            out.append(c)
            continue
        merged = dict(c.climate)
        merged.update(extra)
        out.append(
            CityProfile(
                name=c.name, country=c.country, gdp=c.gdp,
                sports_score=c.sports_score, climate=merged,
                indicators=c.indicators,
            )
        )
    return out


def load_plans(source: str | Path | IO[str]) -> list[SchemePlan]:
    """Hosting schemes with per-feature impact grades."""
    obj = json.loads(_read_text(source))
    plans = []
    for entry in obj["plans"]:
        impacts = {
            IndicatorId.parse(k): int(v) for k, v in entry["impacts"].items()
        }
        try:
            plans.append(
                SchemePlan(
                    id=SchemeId(entry["id"]),
                    description=str(entry.get("description", "")),
                    impacts=impacts,
                )
            )
        except ValueError as exc:
            raise ValidationError(f"bad plan entry {entry.get('id')!r}: {exc}") from None
    return plans


def load_swot(source: str | Path | IO[str]) -> list[SwotRecord]:
    obj = json.loads(_read_text(source))
    return [
        SwotRecord(
            city=str(e["city"]),
            strengths=tuple(e.get("strengths", ())),
            weaknesses=tuple(e.get("weaknesses", ())),
            opportunities=tuple(e.get("opportunities", ())),
            threats=tuple(e.get("threats", ())),
        )
        for e in obj["records"]
    ]


def load_requirement(obj: Mapping | None) -> ClimateRequirement:
    """Climate requirement from its config block; defaults when absent."""
    if obj is None:
        return ClimateRequirement()
    return ClimateRequirement(
        max_feb_temp=float(obj.get("max_feb_temp", 0.0)),
        ideal_temp_range=tuple(obj.get("ideal_temp_range", (-17.0, -10.0))),
        min_feb_snow=float(obj.get("min_feb_snow", 30.0)),
    )
