"""Batch command-line front end.

Subcommands: weights, evaluate, forecast, screen (winter|summer),
compare-schemes, sensitivity, rsm. Every run loads one JSON
configuration file, computes its stage completely, and only then
writes output tables, so a failing stage leaves no partial outputs.

Exit codes: 0 success, 2 configuration errors, 3 data-validation
errors, 4 numeric errors.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .ahp import ahp_weights
from .dataio import (
    load_climate_csv,
    load_judgments,
    load_plans,
    load_pool,
    load_requirement,
    load_swot,
    merge_climate,
)
from .entropy import entropy_weights, positivize_matrix, vector_normalize
from .errors import ConfigError, NumericError, ValidationError
from .grey import forecast_indicator
from .indicators import (
    DecisionMatrix,
    IndicatorHierarchy,
    IndicatorId,
    load_decision_matrix,
    load_hierarchy,
)
from .pipeline import WeightingOutputs, compute_weights, evaluate_alternatives
from .reporting import Provenance, format_number, hash_bytes, render_table
from .selection import (
    CityProfile,
    Cutoff,
    FeatureScaler,
    compare_schemes,
    rank_cities,
    score_cities,
    screen_candidates,
    swot_report,
    winter_climate_filter,
)
from .sensitivity import (
    PerturbationConfig,
    factor_substitution,
    fit_response_surface,
    surface_extrema,
)

__all__ = ["RunConfig", "RunReport", "run", "main"]

OUTPUT_DIR_ENV = "HOSTRANK_OUTDIR"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VALIDATION = 3
EXIT_NUMERIC = 4

_PATH_KEYS = ("hierarchy", "judgments", "decision_matrix", "pool", "plans", "swot", "climate")


@dataclass(frozen=True)
class RunConfig:
    """One parsed configuration file with resolved input paths."""

    path: Path
    raw: dict
    config_hash: str

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        p = Path(path)
        if not p.is_file():
            raise ConfigError(f"config file not found: {p}")
        data = p.read_bytes()
        try:
            raw = json.loads(data.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ConfigError(f"config file {p} is not valid JSON: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError("config root must be a JSON object")
        cfg = cls(path=p, raw=raw, config_hash=hash_bytes(data))
        for key in _PATH_KEYS:
            if raw.get(key) is not None:
                resolved = cfg.resolve(raw[key])
                if not resolved.is_file():
                    raise ConfigError(f"config key {key!r} points at missing file {resolved}")
        return cfg

    def resolve(self, value: str) -> Path:
        p = Path(value)
        return p if p.is_absolute() else (self.path.parent / p)

    def input_path(self, key: str) -> Path:
        value = self.raw.get(key)
        if value is None:
            raise ConfigError(f"config key {key!r} is required for this subcommand")
        return self.resolve(value)

    def optional_path(self, key: str) -> Path | None:
        value = self.raw.get(key)
        return None if value is None else self.resolve(value)

    def section(self, *keys: str) -> dict:
        node: Any = self.raw
        for key in keys:
            if not isinstance(node, dict) or key not in node:
                return {}
            node = node[key]
        return node if isinstance(node, dict) else {}

    @property
    def seed(self) -> int:
        return int(self.raw.get("seed", 0))

    @property
    def output_dir(self) -> Path:
        # Input paths resolve against the config file; the output directory
        # is working-directory relative so runs stay out of the fixture tree.
        override = os.environ.get(OUTPUT_DIR_ENV)
        if override:
            return Path(override)
        return Path(self.raw.get("output_dir", "out"))


@dataclass(frozen=True)
class RunReport:
    """Stage outputs held in memory until the stage has fully succeeded."""

    stage: str
    provenance: Provenance
    outputs: dict[str, str] = field(default_factory=dict)
    summary: list[str] = field(default_factory=list)

    def write(self, outdir: Path) -> list[Path]:
        outdir.mkdir(parents=True, exist_ok=True)
        written = []
        for name, content in self.outputs.items():
            target = outdir / name
            target.write_text(content, encoding="utf-8")
            written.append(target)
        return written


def _provenance(cfg: RunConfig, invocation: str, seed: int | None = None) -> Provenance:
    return Provenance(
        config_hash=cfg.config_hash,
        seed=cfg.seed if seed is None else seed,
        version=__version__,
        invocation=invocation,
    )


def _load_inputs(cfg: RunConfig) -> tuple[IndicatorHierarchy, dict, DecisionMatrix]:
    hierarchy = load_hierarchy(cfg.input_path("hierarchy"))
    judgments = load_judgments(cfg.input_path("judgments"))
    matrix = load_decision_matrix(
        cfg.input_path("decision_matrix"),
        hierarchy,
        impute_missing=bool(cfg.section("ingestion").get("impute_missing", False)),
    )
    return hierarchy, judgments, matrix


def _weighting(cfg: RunConfig, feature_count: int | None = None) -> WeightingOutputs:
    hierarchy, judgments, matrix = _load_inputs(cfg)
    wcfg = cfg.section("weighting")
    coverage = wcfg.get("coverage_target")
    k = feature_count if feature_count is not None else wcfg.get("feature_count", 10)
    return compute_weights(
        hierarchy,
        judgments,
        matrix,
        mode=wcfg.get("mode", "per_category"),
        feature_count=None if coverage is not None else int(k),
        coverage_target=coverage,
    )


def _load_cities(cfg: RunConfig, pool_path: str | Path | None) -> list[CityProfile]:
    path = Path(pool_path) if pool_path is not None else cfg.input_path("pool")
    if not path.is_file():
        raise ConfigError(f"pool file not found: {path}")
    cities = load_pool(path)
    climate_path = cfg.optional_path("climate")
    if climate_path is not None:
        cities = merge_climate(cities, load_climate_csv(climate_path))
    return cities


def _features_table(w: WeightingOutputs, prov: Provenance) -> str:
    rows = []
    acc = 0.0
    omega = w.total.by_id()
    for rank, (ind, g) in enumerate(zip(w.selection.ids, w.selection.gamma), start=1):
        acc += omega[ind]
        rows.append((rank, str(ind), float(g), float(omega[ind]), acc))
    return render_table(
        ["rank", "indicator", "gamma", "omega", "cumulative_omega"], rows, prov
    )


# ---------------------------------------------------------------------------
# subcommand handlers


def _ahp_tables(subjective, prov: Provenance) -> dict[str, str]:
    return {
        "ahp_categories.csv": render_table(
            ["category", "weight"],
            [(c.value, v) for c, v in subjective.category_weights.items()],
            prov,
        ),
        "ahp_indicators.csv": render_table(
            ["indicator", "weight"],
            [(str(i), v) for i, v in subjective.indicator_weights.items()],
            prov,
        ),
        "ahp_consistency.csv": render_table(
            ["matrix", "lambda_max", "ci", "ri", "cr", "passed"],
            [
                (key, r.lambda_max, r.ci, r.ri, r.cr, r.passed)
                for key, r in subjective.reports.items()
            ],
            prov,
        ),
    }


def _entropy_table(cols, ent, prov: Provenance) -> str:
    return render_table(
        ["indicator", "entropy", "weight"],
        [
            (str(i), float(e), float(hw))
            for i, e, hw in zip(cols, ent.entropies, ent.weights)
        ],
        prov,
    )


def _cmd_weights(cfg: RunConfig, args: argparse.Namespace) -> RunReport:
    prov = _provenance(cfg, f"weights --method {args.method}")
    outputs: dict[str, str] = {}
    summary: list[str] = []

    if args.method == "ahp":
        hierarchy, judgments, _ = _load_inputs(cfg)
        subjective = ahp_weights(hierarchy, judgments)
        outputs.update(_ahp_tables(subjective, prov))
        u_sum = sum(subjective.category_weights.values())
        summary.append(f"subjective category weights sum: {format_number(u_sum)}")
    elif args.method == "entropy":
        hierarchy, _, matrix = _load_inputs(cfg)
        ent = entropy_weights(vector_normalize(positivize_matrix(matrix, hierarchy)))
        outputs["entropy.csv"] = _entropy_table(matrix.cols, ent, prov)
        summary.append(
            f"entropy weights sum: {format_number(float(ent.weights.sum()))}"
        )
    else:  # combined
        w = _weighting(cfg)
        outputs.update(_ahp_tables(w.ahp, prov))
        outputs["entropy.csv"] = _entropy_table(w.matrix.cols, w.entropy, prov)
        combined_rows = []
        for cat, cw in w.per_category.items():
            for spec, weight in zip(w.hierarchy.by_category(cat), cw.weights):
                combined_rows.append((str(spec.id), cat.value, float(weight)))
        outputs["combined.csv"] = render_table(
            ["indicator", "category", "weight"], combined_rows, prov
        )
        outputs["total.csv"] = render_table(
            ["indicator", "omega"],
            [(str(i), float(o)) for i, o in zip(w.total.ids, w.total.omega)],
            prov,
        )
        outputs["features.csv"] = _features_table(w, prov)
        summary.append(
            f"total weights sum: {format_number(float(w.total.omega.sum()))}"
        )
        summary.append(
            f"feature group: {', '.join(str(i) for i in w.selection.ids)} "
            f"(coverage {format_number(w.selection.coverage)})"
        )
    return RunReport(stage="weights", provenance=prov, outputs=outputs, summary=summary)


def _cmd_evaluate(cfg: RunConfig, args: argparse.Namespace) -> RunReport:
    prov = _provenance(cfg, f"evaluate --features {args.features}")
    w = _weighting(cfg, feature_count=args.features)
    scores = evaluate_alternatives(w.matrix, w.hierarchy, w.selection)
    ranked = sorted(scores, key=lambda s: (-s[1], s[0]))
    outputs = {
        "evaluation.csv": render_table(
            ["rank", "alternative", "chi"],
            [(i + 1, name, val) for i, (name, val) in enumerate(ranked)],
            prov,
        ),
        "features.csv": _features_table(w, prov),
    }
    top = ranked[0]
    return RunReport(
        stage="evaluate",
        provenance=prov,
        outputs=outputs,
        summary=[f"top alternative: {top[0]} (chi {format_number(top[1])})"],
    )


def _cmd_forecast(cfg: RunConfig, args: argparse.Namespace) -> RunReport:
    prov = _provenance(cfg, f"forecast --indicator {args.indicator} --until {args.until}")
    cities = _load_cities(cfg, args.pool)
    if args.city is not None:
        cities = [c for c in cities if c.name == args.city]
        if not cities:
            raise ValidationError(f"city {args.city!r} not in pool")
    else:
        cities = [c for c in cities if args.indicator in c.climate]
        if not cities:
            raise ValidationError(f"no city in the pool has series {args.indicator!r}")
    rows = []
    for city in cities:
        history_len = len(city.climate[args.indicator]) if args.indicator in city.climate else 0
        series = forecast_indicator(city, args.indicator, args.until)
        for offset, (period, value) in enumerate(zip(series.periods, series.values)):
            rows.append((city.name, int(period), float(value), offset >= history_len))
    outputs = {
        "forecast.csv": render_table(
            ["city", "period", "value", "forecast"], rows, prov
        )
    }
    return RunReport(
        stage="forecast",
        provenance=prov,
        outputs=outputs,
        summary=[f"forecast {args.indicator} to {args.until} for {len(cities)} cities"],
    )


def _screen_common_tables(
    ranked, scaler: FeatureScaler, selection, prov: Provenance, prefix: str
) -> dict[str, str]:
    ranking_rows = [
        (i + 1, c.name, c.country, s.s_base, s.s_evaluate, s.total)
        for i, (c, s) in enumerate(ranked)
    ]
    feature_rows = []
    for c, _ in ranked:
        xi = scaler.transform(c)
        for ind, g, value in zip(selection.ids, selection.gamma, xi):
            feature_rows.append((c.name, str(ind), float(value), float(g), float(g) * float(value)))
    return {
        f"{prefix}_ranking.csv": render_table(
            ["rank", "city", "country", "s_base", "s_evaluate", "total"],
            ranking_rows,
            prov,
        ),
        f"{prefix}_features.csv": render_table(
            ["city", "indicator", "scaled_value", "gamma", "contribution"],
            feature_rows,
            prov,
        ),
    }


def _stage1(cfg: RunConfig, cities: list[CityProfile]) -> list[CityProfile]:
    """Coarse GDP/sports cut applied before any season-specific screen."""
    s1 = cfg.section("screen", "stage1")
    if not s1:
        return list(cities)
    kept = screen_candidates(
        cities,
        gdp_cutoff=Cutoff.rank(int(s1.get("gdp_rank", len(cities)))),
        sports_cutoff=Cutoff.rank(int(s1.get("sports_rank", len(cities)))),
    )
    return kept


def _cmd_screen_winter(cfg: RunConfig, args: argparse.Namespace) -> RunReport:
    prov = _provenance(cfg, "screen winter")
    w = _weighting(cfg)
    scfg = cfg.section("screen", "winter")
    cities = _stage1(cfg, _load_cities(cfg, args.pool))

    excluded = set(scfg.get("exclude", ()))
    unknown = excluded - {c.name for c in cities}
    if unknown:
        warnings.warn(f"exclusion list names absent from the pool: {sorted(unknown)}")
    candidates = [c for c in cities if c.name not in excluded]
    if not candidates:
        raise ValidationError("every pool city is excluded")

    requirement = load_requirement(scfg.get("requirement"))
    until = int(scfg.get("until", 2050))
    assessments = winter_climate_filter(candidates, requirement, until)
    climate_rows = [
        (a.city.name, a.feb_temp, a.feb_snow, a.passed, a.ideal) for a in assessments
    ]
    passers = [a.city for a in assessments if a.passed]
    if not passers:
        raise ValidationError("no city passes the winter climate gate")

    scored = score_cities(
        passers,
        scfg.get("s_base", {}),
        w.selection,
        w.hierarchy,
        default_base=scfg.get("default_s_base"),
    )
    ranked = rank_cities(scored)
    scaler = FeatureScaler.fit(passers, w.selection.ids, w.hierarchy)

    outputs = {
        "winter_climate.csv": render_table(
            ["city", "feb_temp_c", "feb_snow_cm", "passed", "ideal"],
            climate_rows,
            prov,
        ),
        **_screen_common_tables(ranked, scaler, w.selection, prov, "winter"),
    }
    top_city, top_score = ranked[0]
    return RunReport(
        stage="screen winter",
        provenance=prov,
        outputs=outputs,
        summary=[
            f"climate gate: {len(passers)}/{len(candidates)} cities pass",
            f"top winter host: {top_city.name} (total {format_number(top_score.total)})",
        ],
    )


def _cmd_screen_summer(cfg: RunConfig, args: argparse.Namespace) -> RunReport:
    prov = _provenance(cfg, "screen summer")
    w = _weighting(cfg)
    scfg = cfg.section("screen", "summer")
    hierarchy, matrix = w.hierarchy, w.matrix
    stage1 = _stage1(cfg, _load_cities(cfg, args.pool))

    sports_rank = int(scfg.get("sports_rank", 8))
    shortlist = screen_candidates(
        stage1,
        gdp_cutoff=Cutoff.rank(len(stage1)),
        sports_cutoff=Cutoff.rank(sports_rank),
    )
    screen_rows = [
        (i + 1, c.name, c.country, c.sports_score) for i, c in enumerate(shortlist)
    ]

    profiles = []
    for c in shortlist:
        profiles.append(
            CityProfile(
                name=c.name, country=c.country, gdp=c.gdp,
                sports_score=c.sports_score, climate=c.climate,
                indicators=matrix.row(c.name),
            )
        )
    scored = score_cities(
        profiles,
        scfg.get("s_base", {}),
        w.selection,
        hierarchy,
        default_base=scfg.get("default_s_base", 0.5),
    )
    ranked = rank_cities(scored)
    scaler = FeatureScaler.fit(profiles, w.selection.ids, hierarchy)

    outputs = {
        "summer_screen.csv": render_table(
            ["rank", "city", "country", "sports_score"], screen_rows, prov
        ),
        **_screen_common_tables(ranked, scaler, w.selection, prov, "summer"),
    }
    swot_path = cfg.optional_path("swot")
    if swot_path is not None:
        records = load_swot(swot_path)
        outputs["swot_report.txt"] = "\n".join(prov.header_lines()) + "\n" + swot_report(records)
    top_city, top_score = ranked[0]
    return RunReport(
        stage="screen summer",
        provenance=prov,
        outputs=outputs,
        summary=[
            f"stage-1 keeps {len(stage1)} cities, sports screen keeps {len(shortlist)}",
            f"top summer host: {top_city.name} (total {format_number(top_score.total)})",
        ],
    )


def _cmd_compare_schemes(cfg: RunConfig, args: argparse.Namespace) -> RunReport:
    prov = _provenance(cfg, "compare-schemes")
    w = _weighting(cfg)
    plans_path = Path(args.plans) if args.plans is not None else cfg.input_path("plans")
    if not plans_path.is_file():
        raise ConfigError(f"plans file not found: {plans_path}")
    plans = load_plans(plans_path)
    results = compare_schemes(plans, w.selection)
    outputs = {
        "schemes.csv": render_table(
            ["rank", "plan", "aggregate", "description"],
            [
                (i + 1, r.plan.id.value, r.aggregate, r.plan.description)
                for i, r in enumerate(results)
            ],
            prov,
        ),
        "scheme_features.csv": render_table(
            ["plan", "indicator", "impact", "gamma", "contribution"],
            [
                (
                    r.plan.id.value,
                    str(ind),
                    int(r.plan.impacts[ind]),
                    float(g),
                    r.contributions[ind],
                )
                for r in results
                for ind, g in zip(w.selection.ids, w.selection.gamma)
            ],
            prov,
        ),
    }
    best = results[0]
    return RunReport(
        stage="compare-schemes",
        provenance=prov,
        outputs=outputs,
        summary=[
            f"best plan: {best.plan.id.value} "
            f"(aggregate {format_number(best.aggregate)})"
        ],
    )


def _cmd_sensitivity(cfg: RunConfig, args: argparse.Namespace) -> RunReport:
    scfg = cfg.section("sensitivity")
    seed = args.seed if args.seed is not None else cfg.seed
    trials = args.trials if args.trials is not None else int(scfg.get("trials", 20))
    prov = _provenance(cfg, f"sensitivity --seed {seed} --trials {trials}", seed=seed)
    w = _weighting(cfg)
    pconfig = PerturbationConfig(
        seed=seed,
        n_swap=args.n_swap if args.n_swap is not None else int(scfg.get("n_swap", 5)),
        trials=trials,
    )
    report = factor_substitution(w.selection, w.total, w.matrix, pconfig, w.hierarchy)
    payload = "\n".join(prov.header_lines()) + "\n" + report.to_csv_text()
    overall = report.summary["(overall)"]
    return RunReport(
        stage="sensitivity",
        provenance=prov,
        outputs={"sensitivity.csv": payload},
        summary=[
            f"{pconfig.trials} trials, swap size {pconfig.n_swap}",
            "deviation mean/max/std: "
            + "/".join(
                format_number(overall[k])
                for k in ("mean_abs_dev", "max_abs_dev", "std_abs_dev")
            ),
        ],
    )


def _parse_factor(token: str, selection) -> int:
    """Accept a feature by 1-based position ('1', 'xi1', 'ξ1') or indicator id ('A5')."""
    token = token.strip()
    lowered = token.lower()
    if lowered.startswith("xi") and lowered[2:].isdigit():
        token = lowered[2:]
    elif lowered.startswith("ξ") and lowered[1:].isdigit():
        token = lowered[1:]
    if token.isdigit():
        pos = int(token) - 1
        if not 0 <= pos < selection.k:
            raise ConfigError(f"factor position {token} outside 1..{selection.k}")
        return pos
    try:
        ind = IndicatorId.parse(token)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from None
    try:
        return selection.ids.index(ind)
    except ValueError:
        raise ConfigError(f"factor {token} is not in the selected feature group") from None


def _cmd_rsm(cfg: RunConfig, args: argparse.Namespace) -> RunReport:
    prov = _provenance(cfg, f"rsm --factors {args.factors} --grid {args.grid}")
    w = _weighting(cfg)
    hierarchy, matrix = w.hierarchy, w.matrix
    rcfg = cfg.section("rsm")

    positions = [_parse_factor(tok, w.selection) for tok in args.factors.split(",")]
    if len(positions) < 2 or len(positions) > 3:
        raise ConfigError("rsm expects two or three factors")
    if len(set(positions)) != len(positions):
        raise ConfigError("rsm factors must be distinct")
    if args.grid < 3:
        raise ConfigError("grid needs at least 3 levels per factor")

    baseline_name = rcfg.get("baseline_alternative", matrix.rows[0])
    if baseline_name not in matrix.rows:
        raise ConfigError(f"baseline alternative {baseline_name!r} not in the decision matrix")
    profiles = [
        CityProfile(name=label, country="", gdp=0.0, sports_score=0.0,
                    indicators=matrix.row(label))
        for label in matrix.rows
    ]
    scaler = FeatureScaler.fit(profiles, w.selection.ids, hierarchy)
    xi = scaler.transform(next(p for p in profiles if p.name == baseline_name))

    span = float(rcfg.get("span", 0.5))
    nominal = w.selection.gamma[positions]
    box = [(g * (1.0 - span), g * (1.0 + span)) for g in nominal]
    axes = [np.linspace(lo, hi, args.grid) for lo, hi in box]
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.column_stack([m.ravel() for m in mesh])

    def response(weight_rows: np.ndarray) -> np.ndarray:
        gammas = np.tile(w.selection.gamma, (weight_rows.shape[0], 1))
        gammas[:, positions] = weight_rows
        return gammas @ xi

    responses = response(points)
    factor_names = [str(w.selection.ids[p]) for p in positions]
    grid_rows = [
        (*[float(v) for v in point], float(r)) for point, r in zip(points, responses)
    ]

    surface = fit_response_surface(points, responses)
    extrema = surface_extrema(surface, box)

    coef_rows = [("intercept", surface.intercept)]
    coef_rows += [(f"linear[{name}]", float(c)) for name, c in zip(factor_names, surface.linear)]
    for (i, j), c in zip(itertools.combinations(range(len(positions)), 2), surface.interactions):
        coef_rows.append((f"interaction[{factor_names[i]}*{factor_names[j]}]", float(c)))
    coef_rows += [(f"square[{name}]", float(c)) for name, c in zip(factor_names, surface.squares)]
    coef_rows.append(("r_squared", surface.r_squared))

    extrema_rows = [
        ("min_value", extrema.min_value),
        ("max_value", extrema.max_value),
        ("baseline", extrema.baseline),
        ("joint_relative_range", extrema.joint_range),
    ]
    extrema_rows += [
        (f"relative_range[{name}]", float(r))
        for name, r in zip(factor_names, extrema.per_factor_range)
    ]

    outputs = {
        "rsm_grid.csv": render_table([*factor_names, "response"], grid_rows, prov),
        "rsm_surface.csv": render_table(["term", "value"], coef_rows, prov),
        "rsm_extrema.csv": render_table(["quantity", "value"], extrema_rows, prov),
    }
    return RunReport(
        stage="rsm",
        provenance=prov,
        outputs=outputs,
        summary=[
            f"baseline alternative: {baseline_name}",
            f"fit R^2: {format_number(surface.r_squared)}",
            "relative ranges: "
            + ", ".join(
                f"{name}={format_number(float(r))}"
                for name, r in zip(factor_names, extrema.per_factor_range)
            )
            + f", joint={format_number(extrema.joint_range)}",
        ],
    )


# ---------------------------------------------------------------------------
# entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hostrank",
        description="Batch multi-criteria host-city evaluation pipeline",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name: str, **kwargs) -> argparse.ArgumentParser:
        p = sub.add_parser(name, **kwargs)
        p.add_argument("--config", required=True, help="path to the run configuration JSON")
        return p

    p = add("weights", help="compute indicator weights")
    p.add_argument("--method", choices=("ahp", "entropy", "combined"), default="combined")

    p = add("evaluate", help="score every decision-matrix row")
    p.add_argument("--features", type=int, default=10, help="feature-group size")

    p = add("forecast", help="grey-forecast a climate series")
    p.add_argument("--pool", help="city pool file (defaults to the config's pool)")
    p.add_argument("--indicator", required=True, help="series name, e.g. feb_temp_c")
    p.add_argument("--until", type=int, required=True, help="last forecast period")
    p.add_argument("--city", help="restrict to one city")

    p = add("screen", help="run a screening pipeline")
    p.add_argument("season", choices=("winter", "summer"))
    p.add_argument("--pool", help="city pool file (defaults to the config's pool)")

    p = add("compare-schemes", help="aggregate scheme impacts over the feature group")
    p.add_argument("--plans", help="plans file (defaults to the config's plans)")

    p = add("sensitivity", help="random feature-substitution trials")
    p.add_argument("--seed", type=int, help="RNG seed (defaults to the config seed)")
    p.add_argument("--trials", type=int, help="trial count (defaults to the config)")
    p.add_argument("--n-swap", type=int, dest="n_swap", help="features replaced per trial")

    p = add("rsm", help="response-surface grid over feature-weight perturbations")
    p.add_argument("--factors", required=True, help="comma-separated feature ids or 1-based positions")
    p.add_argument("--grid", type=int, default=25, help="levels per factor")

    return parser


_HANDLERS = {
    "weights": _cmd_weights,
    "evaluate": _cmd_evaluate,
    "forecast": _cmd_forecast,
    "compare-schemes": _cmd_compare_schemes,
    "sensitivity": _cmd_sensitivity,
    "rsm": _cmd_rsm,
}


def run(config: str | Path, subcommand: str, **options) -> RunReport:
    """Programmatic entry point mirroring the CLI subcommands."""
    argv = [subcommand]
    if subcommand == "screen":
        argv.append(str(options.pop("season")))
    argv += ["--config", str(config)]
    for key, value in options.items():
        if value is None:
            continue
        argv += [f"--{key.replace('_', '-')}", str(value)]
    parser = _build_parser()
    args = parser.parse_args(argv)
    _, report = _dispatch(args)
    return report


def _dispatch(args: argparse.Namespace) -> tuple[RunConfig, RunReport]:
    cfg = RunConfig.load(args.config)
    if args.subcommand == "screen":
        handler = _cmd_screen_winter if args.season == "winter" else _cmd_screen_summer
    else:
        handler = _HANDLERS[args.subcommand]
    return cfg, handler(cfg, args)


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg, report = _dispatch(args)
        written = report.write(cfg.output_dir)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    print(f"[{report.stage}] config {report.provenance.config_hash[:12]} seed {report.provenance.seed}")
    for line in report.summary:
        print(f"  {line}")
    for path in written:
        print(f"  wrote {path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
