"""Command-line entry point.

Subcommands cover the full pipeline: `synth` writes a deterministic dataset,
`fleet` prints the adoption projection, `build-days` extracts the paired
curtailment days, `simulate` runs the control schemes and writes the report
JSON, and `report` renders a written report as text tables.

Exit codes: 0 success, 1 usage error, 2 config or data error, 3 solver
error. Each subcommand validates its inputs fully before creating any
output file, so a failing invocation never leaves partial artifacts.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from . import __version__, dataio, synth
from .control import SchemeSpec
from .errors import ConfigError, DataError, SolverError, UsageError
from .fleet import fleet_daily_energy, project_fleet
from .sim import (
    WIN_TIE_TOL_MWH,
    build_scenario,
    format_gwh,
    report_to_dict,
    run_year,
)

SCHEME_CHOICES = ("bau", "open-loop", "mpc")

RUN_CONFIG_REQUIRED = frozenset(
    {
        "fleet_config",
        "load_csv",
        "capacity_factors_csv",
        "hourly_distribution_csv",
        "scenario_config",
        "schemes",
        "p_max",
    }
)
RUN_CONFIG_OPTIONAL = frozenset({"manifest_json", "seed", "golden_report"})

DATASET_PATH_KEYS = (
    "fleet_config",
    "load_csv",
    "capacity_factors_csv",
    "hourly_distribution_csv",
    "scenario_config",
)

SYNTH_PARAM_KEYS = frozenset(
    {"wind_mw", "solar_mw", "population_growth_factor", "base_load_mw"}
)


class _Parser(argparse.ArgumentParser):
    """Argparse parser that reports problems as UsageError (exit 1)."""

    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="evshift", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"evshift {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p_synth = sub.add_parser("synth", help="generate a synthetic one-year dataset")
    p_synth.add_argument("--out", required=True, help="output directory")
    p_synth.add_argument("--seed", type=int, default=synth.DEFAULT_SEED)
    p_synth.add_argument("--config", help="JSON file with generator settings")
    p_synth.set_defaults(func=_cmd_synth)

    p_fleet = sub.add_parser("fleet", help="print the EV adoption projection")
    p_fleet.add_argument("--config", help="fleet config JSON (default: bundled)")
    p_fleet.set_defaults(func=_cmd_fleet)

    p_days = sub.add_parser("build-days", help="write the paired curtailment days as CSV")
    p_days.add_argument("--config", required=True, help="run config JSON")
    p_days.add_argument("--out", help="output directory (default: config directory)")
    p_days.set_defaults(func=_cmd_build_days)

    p_sim = sub.add_parser("simulate", help="run control schemes and write the report JSON")
    p_sim.add_argument("--config", required=True, help="run config JSON")
    p_sim.add_argument("--out", help="output directory (default: config directory)")
    p_sim.add_argument(
        "--scheme",
        action="append",
        choices=SCHEME_CHOICES,
        default=None,
        help="scheme to run (repeatable; default: schemes from the run config)",
    )
    p_sim.add_argument(
        "--step-hours",
        action="append",
        type=int,
        default=None,
        help="MPC step size, one per mpc occurrence of --scheme, in order",
    )
    p_sim.add_argument("--p-max", type=float, default=None, help="override config p_max")
    p_sim.add_argument("--parallel", type=int, default=1, help="max concurrent day simulations")
    p_sim.add_argument(
        "--verbose",
        action="store_true",
        help="also write per-day trace and remaining-excess CSVs",
    )
    p_sim.add_argument(
        "--bless",
        action="store_true",
        help="rewrite the golden report named by the run config instead of comparing",
    )
    p_sim.set_defaults(func=_cmd_simulate)

    p_rep = sub.add_parser("report", help="render a report JSON as text tables")
    p_rep.add_argument("--config", required=True, help="report JSON written by simulate")
    p_rep.set_defaults(func=_cmd_report)

    return parser


def _cmd_synth(args) -> int:
    params = synth.SynthParams()
    if args.config:
        raw = dataio.read_json(args.config)
        if not isinstance(raw, dict):
            raise ConfigError(f"{args.config}: generator settings must be a JSON object")
        unknown = set(raw) - SYNTH_PARAM_KEYS
        if unknown:
            raise ConfigError(f"{args.config}: unknown generator settings {sorted(unknown)}")
        params = synth.SynthParams(**raw)
    manifest = synth.synth_dataset(args.out, seed=args.seed, params=params)
    print(
        f"wrote dataset to {args.out}: seed {args.seed}, "
        f"{manifest['curtailment_day_count']} curtailment days"
    )
    return 0


def _cmd_fleet(args) -> int:
    path = Path(args.config) if args.config else dataio.bundled_path("fleet_config.json")
    params = dataio.read_fleet_config(path)
    projection = project_fleet(params)
    print(f"{'year':>6} {'market share':>13} {'EV count':>12}")
    for year, share, count in zip(
        projection.years, projection.market_shares, projection.ev_counts
    ):
        print(f"{year:>6} {share:>13.3f} {count:>12,.0f}")
    final = float(projection.ev_counts[-1])
    daily = fleet_daily_energy(final, params.km_per_ev_day, params.kwh_per_km)
    print(f"{params.end_year} fleet: {final:,.0f} EVs, {daily:,.0f} MWh/day charging demand")
    return 0


def _load_run_config(path_str: str):
    """Parse a run config and resolve its file references."""
    path = Path(path_str)
    cfg = dataio.read_json(path)
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: run config must be a JSON object")
    missing = RUN_CONFIG_REQUIRED - set(cfg)
    if missing:
        raise ConfigError(f"{path}: missing run config keys {sorted(missing)}")
    unknown = set(cfg) - RUN_CONFIG_REQUIRED - RUN_CONFIG_OPTIONAL
    if unknown:
        raise ConfigError(f"{path}: unknown run config keys {sorted(unknown)}")
    base = path.parent
    for key in DATASET_PATH_KEYS:
        ref = base / cfg[key]
        if not ref.is_file():
            raise ConfigError(f"{path}: {key} refers to missing file {ref}")
    return cfg, base


def _build_run_scenario(cfg, base: Path):
    fleet_params = dataio.read_fleet_config(base / cfg["fleet_config"])
    distribution = dataio.read_hourly_distribution_csv(base / cfg["hourly_distribution_csv"])
    fleet_params = dataclasses.replace(fleet_params, hourly_distribution=distribution)
    load = dataio.read_load_csv(base / cfg["load_csv"])
    wind_cf, solar_cf = dataio.read_capacity_factors_csv(base / cfg["capacity_factors_csv"])
    cap, growth = dataio.read_scenario_config(base / cfg["scenario_config"])
    return build_scenario(fleet_params, load, wind_cf, solar_cf, cap, growth), cap, growth


def _cmd_build_days(args) -> int:
    cfg, base = _load_run_config(args.config)
    scenario, _, _ = _build_run_scenario(cfg, base)
    out = Path(args.out) if args.out else base
    out.mkdir(parents=True, exist_ok=True)
    target = out / "curtailment_days.csv"
    dataio.write_curtailment_days_csv(target, scenario.days)
    print(f"wrote {len(scenario.days)} curtailment days to {target}")
    return 0


def _schemes_from_flags(kinds, step_hours, p_max: float) -> list[SchemeSpec]:
    steps = list(step_hours or [])
    specs = []
    try:
        for kind in kinds:
            if kind == "mpc":
                if not steps:
                    raise UsageError("each mpc --scheme needs a matching --step-hours")
                specs.append(SchemeSpec("mpc", steps.pop(0), p_max))
            elif kind == "bau":
                specs.append(SchemeSpec("bau", p_max=0.0))
            else:
                specs.append(SchemeSpec("open_loop", p_max=p_max))
    except ConfigError as exc:
        # Bad flag combinations (step size, p_max range) are usage errors.
        raise UsageError(str(exc)) from exc
    if steps:
        raise UsageError("more --step-hours values than mpc schemes")
    return specs


def _schemes_from_config(cfg, p_max: float) -> list[SchemeSpec]:
    entries = cfg["schemes"]
    if not isinstance(entries, list) or not entries:
        raise ConfigError("run config schemes must be a non-empty list")
    specs = []
    for entry in entries:
        if not isinstance(entry, dict) or "kind" not in entry:
            raise ConfigError(f"malformed scheme entry {entry!r}")
        kind = entry["kind"]
        effective = 0.0 if kind == "bau" else p_max
        specs.append(SchemeSpec(kind, entry.get("step_hours"), effective))
    return specs


def _write_verbose_csvs(out: Path, report, scenario) -> None:
    days_dir = out / "days"
    days_dir.mkdir(parents=True, exist_ok=True)
    by_index = {day.day_index: day for day in scenario.days}
    for record in report.days:
        day = by_index[record.day_index]
        bau_left = np.maximum(day.actual_excess - scenario.bau_profile, 0.0)
        for result in record.results:
            stem = f"day{record.day_index:03d}_{result.scheme.label}"
            dataio.write_trace_csv(
                days_dir / f"{stem}_trace.csv",
                result.realized_load,
                result.deferral,
                result.excess_source,
            )
            scheme_left = np.maximum(day.actual_excess - result.realized_load, 0.0)
            dataio.write_remaining_excess_csv(
                days_dir / f"{stem}_excess.csv", bau_left, scheme_left
            )


def _cmd_simulate(args) -> int:
    cfg, base = _load_run_config(args.config)
    p_max = args.p_max if args.p_max is not None else cfg["p_max"]
    if args.step_hours and not args.scheme:
        raise UsageError("--step-hours requires --scheme mpc")
    if args.scheme:
        schemes = _schemes_from_flags(args.scheme, args.step_hours, p_max)
    else:
        schemes = _schemes_from_config(cfg, p_max)
    if args.parallel < 1:
        raise UsageError("--parallel must be at least 1")

    scenario, cap, growth = _build_run_scenario(cfg, base)
    report = run_year(scenario.days, scenario.bau_profile, schemes, parallel=args.parallel)

    sample_days: list[int] = []
    if cfg.get("manifest_json"):
        manifest_path = base / cfg["manifest_json"]
        if manifest_path.is_file():
            manifest = dataio.read_json(manifest_path)
            sample_days = [int(i) for i in manifest.get("sample_day_indices", [])]
    scenario_info = {
        "dataset_files": {key: cfg[key] for key in DATASET_PATH_KEYS},
        "seed": cfg.get("seed"),
        "p_max": p_max,
        "wind_mw": cap.wind_mw,
        "solar_mw": cap.solar_mw,
        "population_growth_factor": growth,
        "ev_count": scenario.ev_count,
        "daily_energy_mwh": scenario.daily_energy_mwh,
        "sample_day_indices": sample_days,
    }
    payload = dataio.dumps_json(report_to_dict(report, scenario_info)).encode()

    golden = None
    if cfg.get("golden_report"):
        golden = base / cfg["golden_report"]
        if not args.bless:
            if not golden.is_file():
                raise DataError(f"golden report {golden} does not exist (run with --bless)")
            if golden.read_bytes() != payload:
                raise DataError(f"report does not match golden {golden}")
    elif args.bless:
        raise UsageError("--bless requires a golden_report entry in the run config")

    out = Path(args.out) if args.out else base
    out.mkdir(parents=True, exist_ok=True)
    report_path = out / "report.json"
    report_path.write_bytes(payload)
    if golden is not None and args.bless:
        golden.parent.mkdir(parents=True, exist_ok=True)
        golden.write_bytes(payload)
        print(f"blessed golden report {golden}")
    if args.verbose:
        _write_verbose_csvs(out, report, scenario)

    print(f"wrote {report_path}: {report.curtailment_day_count} curtailment days")
    for agg in report.aggregates:
        print(
            f"  {agg.scheme.label:10s} additional RES {format_gwh(agg.total_additional_res_mwh):>8} GWh"
            f"  win {agg.win_fraction:.3f}  worse-than-BAU days {agg.worse_than_bau_days}"
        )
    return 0


def _require_keys(data: dict, keys, context: str) -> None:
    missing = set(keys) - set(data)
    if missing:
        raise DataError(f"{context}: missing keys {sorted(missing)}")


def _cmd_report(args) -> int:
    data = dataio.read_json(args.config)
    if not isinstance(data, dict):
        raise DataError(f"{args.config}: report must be a JSON object")
    _require_keys(data, ("scenario", "curtailment_day_count", "schemes", "days"), args.config)

    scn = data["scenario"]
    print(
        f"{data['curtailment_day_count']} curtailment days; "
        f"p_max {scn.get('p_max')}, seed {scn.get('seed')}, "
        f"wind {scn.get('wind_mw')} MW, solar {scn.get('solar_mw')} MW"
    )
    print(f"{'scheme':<12} {'additional RES (GWh)':>21} {'win':>6} {'worse days':>11}")
    labels = []
    for entry in data["schemes"]:
        _require_keys(
            entry,
            ("kind", "step_hours", "total_additional_res_mwh", "win_fraction", "worse_than_bau_days"),
            "scheme aggregate",
        )
        label = f"mpc-{entry['step_hours']}" if entry["kind"] == "mpc" else entry["kind"].replace("_", "-")
        labels.append(label)
        print(
            f"{label:<12} {format_gwh(entry['total_additional_res_mwh']):>21} "
            f"{entry['win_fraction']:>6.3f} {entry['worse_than_bau_days']:>11}"
        )

    sample = scn.get("sample_day_indices") or []
    if sample:
        by_index = {day["day_index"]: day for day in data["days"]}
        print("sample days (additional RES used, MWh; * marks best):")
        print(f"{'day':>5} " + " ".join(f"{label:>14}" for label in labels))
        for idx in sample:
            day = by_index.get(idx)
            if day is None:
                raise DataError(f"sample day {idx} is not in the report")
            values = [day["schemes"][label]["additional_res_used_mwh"] for label in labels]
            best = max(values)
            cells = [
                f"{value:,.1f}" + ("*" if value >= best - WIN_TIE_TOL_MWH else " ")
                for value in values
            ]
            print(f"{idx:>5} " + " ".join(f"{cell:>14}" for cell in cells))
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "func", None):
            parser.print_usage(sys.stderr)
            return 1
        return args.func(args)
    except UsageError as exc:
        print(f"evshift: error: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, DataError) as exc:
        print(f"evshift: error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"evshift: solver error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
