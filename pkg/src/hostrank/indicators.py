"""Indicator hierarchy, decision-matrix container, and input validation.

The evaluation system is a two-level tree: five primary categories with
lettered ids A-E (economy, human, sociocultural, political,
environmental), each owning a fixed run of numbered secondary
indicators (A1-A6, B1-B7, C1-C7, D1-D5, E1-E5; 30 in total). Every
downstream stage -- weighting, feature selection, screening -- consumes
the types defined here.

All types are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import IO, Mapping

import numpy as np

from .errors import ValidationError

__all__ = [
    "Category",
    "CATEGORY_SIZES",
    "Polarity",
    "IndicatorId",
    "IndicatorSpec",
    "IndicatorHierarchy",
    "Violation",
    "DecisionMatrix",
    "all_indicator_ids",
    "default_hierarchy",
    "load_hierarchy",
    "validate_hierarchy",
    "load_decision_matrix",
    "serialize_decision_matrix",
]


class Category(str, Enum):
    """Primary indicator category, keyed by its letter."""

    ECONOMY = "A"
    HUMAN = "B"
    SOCIOCULTURAL = "C"
    POLITICAL = "D"
    ENVIRONMENTAL = "E"

    @property
    def title(self) -> str:
        return self.name.capitalize()


#: Number of secondary indicators per category. These bounds are fixed;
#: reduced hierarchies may use a subset but never indices outside them.
CATEGORY_SIZES: dict[Category, int] = {
    Category.ECONOMY: 6,
    Category.HUMAN: 7,
    Category.SOCIOCULTURAL: 7,
    Category.POLITICAL: 5,
    Category.ENVIRONMENTAL: 5,
}


class Polarity(str, Enum):
    """Whether larger raw values are desirable (+) or harmful (-)."""

    POSITIVE = "+"
    NEGATIVE = "-"


_ID_PATTERN = re.compile(r"^([A-E])(\d{1,2})$")


@dataclass(frozen=True, order=True)
class IndicatorId:
    """Identifier of one secondary indicator, e.g. A5.

    Ordering is lexicographic by (category letter, index), which is the
    canonical hierarchy order and the deterministic tie-break used by
    feature selection.
    """

    category: Category
    index: int

    def __post_init__(self) -> None:
        limit = CATEGORY_SIZES[self.category]
        if not 1 <= self.index <= limit:
            raise ValidationError(
                f"indicator index {self.index} out of range 1..{limit} "
                f"for category {self.category.value}"
            )

    def __str__(self) -> str:
        return f"{self.category.value}{self.index}"

    @classmethod
    def parse(cls, text: str) -> "IndicatorId":
        m = _ID_PATTERN.match(text.strip())
        if m is None:
            raise ValidationError(f"unknown indicator {text!r}")
        return cls(Category(m.group(1)), int(m.group(2)))


def all_indicator_ids() -> tuple[IndicatorId, ...]:
    """All 30 indicator ids in hierarchy order."""
    return tuple(
        IndicatorId(cat, i)
        for cat in Category
        for i in range(1, CATEGORY_SIZES[cat] + 1)
    )


@dataclass(frozen=True)
class IndicatorSpec:
    """One secondary indicator: id, display name, polarity, optional ideal band.

    ``ideal_interval`` is the (a, b) value band treated as fully
    satisfactory by interval normalization; values outside it are scored
    down linearly.
    """

    id: IndicatorId
    name: str
    polarity: Polarity = Polarity.POSITIVE
    ideal_interval: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if self.ideal_interval is not None:
            a, b = self.ideal_interval
            if not a <= b:
                raise ValidationError(
                    f"ideal interval for {self.id} has a > b: ({a}, {b})"
                )
            object.__setattr__(self, "ideal_interval", (float(a), float(b)))


@dataclass(frozen=True)
class Violation:
    """One validation finding; data, not an exception."""

    field: str
    rule: str
    message: str


@dataclass(frozen=True)
class IndicatorHierarchy:
    """The two-level indicator tree plus primary-category weights.

    ``reduced=True`` marks deliberately small hierarchies (subsets of
    the 30) used by screening stages and tests; full coverage is then
    not demanded by :func:`validate_hierarchy`.
    """

    specs: tuple[IndicatorSpec, ...]
    primary_weights: Mapping[Category, float]
    reduced: bool = False
    _by_id: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "specs", tuple(self.specs))
        object.__setattr__(
            self,
            "primary_weights",
            {Category(k): float(v) for k, v in dict(self.primary_weights).items()},
        )
        object.__setattr__(self, "_by_id", {s.id: s for s in self.specs})

    @property
    def ids(self) -> tuple[IndicatorId, ...]:
        return tuple(s.id for s in self.specs)

    @property
    def categories(self) -> tuple[Category, ...]:
        seen: list[Category] = []
        for s in self.specs:
            if s.id.category not in seen:
                seen.append(s.id.category)
        return tuple(sorted(seen, key=lambda c: c.value))

    def spec(self, indicator: IndicatorId) -> IndicatorSpec:
        try:
            return self._by_id[indicator]
        except KeyError:
            raise ValidationError(f"indicator {indicator} not in hierarchy") from None

    def by_category(self, category: Category) -> tuple[IndicatorSpec, ...]:
        return tuple(s for s in self.specs if s.id.category == category)


_DEFAULT_NAMES: dict[str, tuple[str, Polarity]] = {
    "A1": ("gdp growth contribution", Polarity.POSITIVE),
    "A2": ("tourism revenue uplift", Polarity.POSITIVE),
    "A3": ("employment rate change", Polarity.POSITIVE),
    "A4": ("infrastructure investment return", Polarity.POSITIVE),
    "A5": ("hosting cost overrun", Polarity.NEGATIVE),
    "A6": ("event operating revenue", Polarity.POSITIVE),
    "B1": ("athlete satisfaction", Polarity.POSITIVE),
    "B2": ("spectator attendance index", Polarity.POSITIVE),
    "B3": ("resident approval rate", Polarity.POSITIVE),
    "B4": ("volunteer participation", Polarity.POSITIVE),
    "B5": ("public health pressure", Polarity.NEGATIVE),
    "B6": ("sport participation growth", Polarity.POSITIVE),
    "B7": ("venue accessibility", Polarity.POSITIVE),
    "C1": ("international image gain", Polarity.POSITIVE),
    "C2": ("sporting spirit promotion", Polarity.POSITIVE),
    "C3": ("cultural exchange activity", Polarity.POSITIVE),
    "C4": ("wealth gap widening", Polarity.NEGATIVE),
    "C5": ("civic pride index", Polarity.POSITIVE),
    "C6": ("media exposure value", Polarity.POSITIVE),
    "C7": ("urban renewal effect", Polarity.POSITIVE),
    "D1": ("regional policy support", Polarity.POSITIVE),
    "D2": ("international relations gain", Polarity.POSITIVE),
    "D3": ("governance transparency pressure", Polarity.NEGATIVE),
    "D4": ("security risk exposure", Polarity.NEGATIVE),
    "D5": ("political stability impact", Polarity.POSITIVE),
    "E1": ("air quality improvement", Polarity.POSITIVE),
    "E2": ("green space expansion", Polarity.POSITIVE),
    "E3": ("waste generation", Polarity.NEGATIVE),
    "E4": ("carbon emission pressure", Polarity.NEGATIVE),
    "E5": ("renewable energy adoption", Polarity.POSITIVE),
}


def default_hierarchy(
    primary_weights: Mapping[Category, float] | None = None,
) -> IndicatorHierarchy:
    """Full 30-indicator hierarchy with uniform primary weights by default."""
    if primary_weights is None:
        primary_weights = {c: 1.0 / len(Category) for c in Category}
    specs = tuple(
        IndicatorSpec(IndicatorId.parse(key), name, polarity)
        for key, (name, polarity) in _DEFAULT_NAMES.items()
    )
    return IndicatorHierarchy(specs=specs, primary_weights=primary_weights)


def load_hierarchy(source: str | Path | IO[str]) -> IndicatorHierarchy:
    """Load a hierarchy from its JSON file form (see docs/data-format.md)."""
    obj = json.loads(_read_text(source))
    specs = []
    for entry in obj["indicators"]:
        interval = entry.get("ideal_interval")
        specs.append(
            IndicatorSpec(
                id=IndicatorId.parse(entry["id"]),
                name=entry.get("name", entry["id"]),
                polarity=Polarity(entry.get("polarity", "+")),
                ideal_interval=tuple(interval) if interval else None,
            )
        )
    weights = {Category(k): float(v) for k, v in obj["primary_weights"].items()}
    return IndicatorHierarchy(
        specs=tuple(specs),
        primary_weights=weights,
        reduced=bool(obj.get("reduced", False)),
    )


_WEIGHT_SUM_TOL = 1e-9


def validate_hierarchy(h: IndicatorHierarchy) -> list[Violation]:
    """Check hierarchy invariants; an empty list means the hierarchy is usable.

    Violations are returned as data rather than raised so callers can
    report all problems at once.
    """
    out: list[Violation] = []

    seen: set[IndicatorId] = set()
    for s in h.specs:
        if s.id in seen:
            out.append(
                Violation("specs", "duplicate", f"indicator {s.id} appears twice")
            )
        seen.add(s.id)

    if not h.reduced:
        missing = [str(i) for i in all_indicator_ids() if i not in seen]
        if missing:
            out.append(
                Violation(
                    "specs",
                    "coverage",
                    "missing indicators: " + ", ".join(missing),
                )
            )

    cats = set(h.categories)
    wkeys = set(h.primary_weights)
    if cats != wkeys:
        out.append(
            Violation(
                "primary_weights",
                "weight-coverage",
                f"weight keys {sorted(c.value for c in wkeys)} do not match "
                f"categories present {sorted(c.value for c in cats)}",
            )
        )
    if any(w < 0 for w in h.primary_weights.values()):
        out.append(
            Violation("primary_weights", "weight-range", "negative category weight")
        )
    total = sum(h.primary_weights.values())
    if abs(total - 1.0) > _WEIGHT_SUM_TOL:
        out.append(
            Violation(
                "primary_weights",
                "weight-sum",
                f"category weights sum to {total!r}, expected 1",
            )
        )
    return out


@dataclass(frozen=True)
class DecisionMatrix:
    """Samples (cities or years) x indicators matrix of raw values.

    Values are dense float64 with no missing cells; ingestion either
    rejects gaps or imputes them explicitly, never silently produces
    NaN.
    """

    rows: tuple[str, ...]
    cols: tuple[IndicatorId, ...]
    values: np.ndarray
    units: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "cols", tuple(self.cols))
        vals = np.array(self.values, dtype=float)
        if vals.shape != (len(self.rows), len(self.cols)):
            raise ValidationError(
                f"value shape {vals.shape} does not match "
                f"{len(self.rows)} rows x {len(self.cols)} columns"
            )
        if not np.all(np.isfinite(vals)):
            raise ValidationError("matrix contains missing or non-finite cells")
        if len(set(self.rows)) != len(self.rows):
            raise ValidationError("duplicate sample label")
        if len(set(self.cols)) != len(self.cols):
            raise ValidationError("duplicate indicator column")
        if self.units is not None:
            units = tuple(str(u) for u in self.units)
            if len(units) != len(self.cols):
                raise ValidationError("units do not match the column count")
            object.__setattr__(self, "units", units)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def m(self) -> int:
        return len(self.cols)

    def column(self, indicator: IndicatorId) -> np.ndarray:
        try:
            j = self.cols.index(indicator)
        except ValueError:
            raise ValidationError(f"indicator {indicator} not in matrix") from None
        return self.values[:, j]

    def row(self, label: str) -> dict[IndicatorId, float]:
        try:
            i = self.rows.index(label)
        except ValueError:
            raise ValidationError(f"sample {label!r} not in matrix") from None
        return {c: float(v) for c, v in zip(self.cols, self.values[i])}


def _read_text(source: str | Path | IO[str]) -> str:
    if isinstance(source, (str, Path)):
        return Path(source).read_text(encoding="utf-8")
    return source.read()


def _sniff_delimiter(sample: str) -> str:
    try:
        return csv.Sniffer().sniff(sample, delimiters=",;\t").delimiter
    except csv.Error:
        return ","


def load_decision_matrix(
    source: str | Path | IO[str],
    hierarchy: IndicatorHierarchy,
    *,
    impute_missing: bool = False,
) -> DecisionMatrix:
    """Load a decision matrix from delimiter-separated text or its JSON form.

    The header row names indicators by id string and the first column
    holds sample labels. Columns are reordered to hierarchy order no
    matter how the file orders them. Empty cells are rejected unless
    ``impute_missing`` is set, in which case they receive the column
    mean of the present values.
    """
    text = _read_text(source)
    if text.lstrip()[:1] in ("{", "["):
        labels, ids, grid, units = _parse_json_matrix(text)
    else:
        labels, ids, grid, units = _parse_delimited_matrix(text)

    known = set(hierarchy.ids)
    for ind in ids:
        if ind not in known:
            raise ValidationError(f"unknown indicator {ind!r}")
    if len(set(ids)) != len(ids):
        raise ValidationError("duplicate indicator column in header")
    missing_cols = [str(i) for i in hierarchy.ids if i not in set(ids)]
    if missing_cols:
        raise ValidationError(
            "missing indicator columns: " + ", ".join(missing_cols)
        )
    if len(set(labels)) != len(labels):
        dup = next(lab for i, lab in enumerate(labels) if lab in labels[:i])
        raise ValidationError(f"duplicate sample label {dup!r}")

    arr = np.array(grid, dtype=float)  # may contain NaN placeholders here
    if np.isnan(arr).any():
        if not impute_missing:
            i, j = np.argwhere(np.isnan(arr))[0]
            raise ValidationError(
                f"missing cell at row {labels[i]!r}, column {ids[j]}"
            )
        for j in range(arr.shape[1]):
            col = arr[:, j]
            mask = np.isnan(col)
            if mask.all():
                raise ValidationError(
                    f"column {ids[j]} has no values to impute from"
                )
            col[mask] = col[~mask].mean()

    # Reorder columns to hierarchy order regardless of input order.
    order = [ids.index(i) for i in hierarchy.ids]
    if units is not None:
        units = tuple(units[j] for j in order)
    return DecisionMatrix(
        rows=tuple(labels), cols=tuple(hierarchy.ids), values=arr[:, order],
        units=units,
    )


def _parse_delimited_matrix(text: str):
    delim = _sniff_delimiter(text[:2048])
    reader = csv.reader(io.StringIO(text), delimiter=delim)
    rows = [r for r in reader if r and any(cell.strip() for cell in r)]
    if len(rows) < 2:
        raise ValidationError("matrix file needs a header row and at least one sample")
    header = [c.strip() for c in rows[0]]
    ids = [IndicatorId.parse(tok) for tok in header[1:]]
    labels: list[str] = []
    grid: list[list[float]] = []
    for raw in rows[1:]:
        if len(raw) != len(header):
            raise ValidationError(
                f"column count mismatch at row {raw[0]!r}: "
                f"expected {len(header)}, got {len(raw)}"
            )
        labels.append(raw[0].strip())
        parsed: list[float] = []
        for ind, cell in zip(ids, raw[1:]):
            cell = cell.strip()
            if cell == "":
                parsed.append(float("nan"))
                continue
            try:
                parsed.append(float(cell))
            except ValueError:
                raise ValidationError(
                    f"non-numeric cell {cell!r} at row {raw[0].strip()!r}, "
                    f"column {ind}"
                ) from None
        grid.append(parsed)
    return labels, ids, grid, None


def _parse_json_matrix(text: str):
    obj = json.loads(text)
    labels = [str(r) for r in obj["rows"]]
    ids = [IndicatorId.parse(tok) for tok in obj["columns"]]
    units = obj.get("units")
    if units is not None:
        if len(units) != len(ids):
            raise ValidationError("units list does not match the column count")
        units = [str(u) for u in units]
    grid: list[list[float]] = []
    for label, row in zip(labels, obj["values"]):
        if len(row) != len(ids):
            raise ValidationError(
                f"column count mismatch at row {label!r}: "
                f"expected {len(ids)}, got {len(row)}"
            )
        parsed = []
        for ind, cell in zip(ids, row):
            if cell is None:
                parsed.append(float("nan"))
            elif isinstance(cell, (int, float)):
                parsed.append(float(cell))
            else:
                raise ValidationError(
                    f"non-numeric cell {cell!r} at row {label!r}, column {ind}"
                )
        grid.append(parsed)
    return labels, ids, grid, units


def serialize_decision_matrix(matrix: DecisionMatrix) -> str:
    """Write the matrix back to CSV text.

    Floats use ``repr`` so that reloading reproduces every finite value
    bit-exactly.
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["sample", *[str(c) for c in matrix.cols]])
    for label, row in zip(matrix.rows, matrix.values):
        writer.writerow([label, *[repr(float(v)) for v in row]])
    return out.getvalue()
