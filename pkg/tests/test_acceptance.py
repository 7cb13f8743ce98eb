"""Acceptance gate: one test per shipped criterion, each recorded as a
PASS/FAIL line in the terminal summary with its measured numbers."""

import json
import time
from contextlib import contextmanager

import numpy as np
import pytest

from evshift import cli, dataio
from evshift.control import SchemeSpec, run_bau, run_day, run_mpc, run_open_loop
from evshift.fleet import fleet_daily_energy, project_fleet
from evshift.grid import CurtailmentDay
from evshift.optimizer import ShiftInstance, curtailment, oracle_search, solve_shift


@contextmanager
def criterion(log, num, desc):
    outcome = {"ok": False, "detail": ""}
    try:
        yield outcome
        outcome["ok"] = True
    finally:
        log.append((num, desc, outcome["ok"], outcome["detail"]))


def test_criterion_01_fleet_calibration(acceptance_log):
    with criterion(acceptance_log, 1, "fleet 2035 count and daily energy within 0.5%") as out:
        params = dataio.read_fleet_config(dataio.bundled_path("fleet_config.json"))
        project_fleet(params)  # warm-up so the timed call measures the math
        start = time.perf_counter()
        projection = project_fleet(params)
        count = projection.count_for(2035)
        daily = fleet_daily_energy(count, params.km_per_ev_day, params.kwh_per_km)
        elapsed = time.perf_counter() - start
        assert count == pytest.approx(9_450_000, rel=5e-3)
        assert daily == pytest.approx(82_443, rel=5e-3)
        assert elapsed < 1e-3
        out["detail"] = f"{count:,.0f} EVs, {daily:,.0f} MWh/day, {elapsed * 1e3:.3f} ms"


def test_criterion_02_lp_within_oracle_bounds(acceptance_log):
    with criterion(acceptance_log, 2, "LP <= grid oracle on 500 random instances") as out:
        rng = np.random.default_rng(20240814)
        start = time.perf_counter()
        violations = 0
        big_gaps = 0
        worst_gap = 0.0
        for _ in range(500):
            h = int(rng.integers(1, 7))
            inst = ShiftInstance(
                excess=rng.integers(0, 21, h).astype(float),
                demand=rng.integers(0, 21, h).astype(float),
                carry_in=0.0,
                p_max=float(rng.choice([0.25, 0.5, 1.0])),
            )
            _, sol = solve_shift(inst)
            grid_best = oracle_search(inst, grid_steps=50)
            if sol.curtailed_mwh > grid_best + 1e-6:
                violations += 1
            gap = grid_best - sol.curtailed_mwh
            total_excess = float(inst.excess.sum())
            if total_excess > 0:
                worst_gap = max(worst_gap, gap / total_excess)
            if gap > 0.01 * total_excess + 1e-12:
                big_gaps += 1
        elapsed = time.perf_counter() - start
        assert violations == 0
        assert 500 - big_gaps >= 495
        assert elapsed < 30.0
        out["detail"] = (
            f"{violations} violations, {big_gaps} gaps > 1%, "
            f"worst gap {worst_gap:.3%}, {elapsed:.1f} s"
        )


def test_criterion_03_hand_derived_instance(acceptance_log):
    with criterion(acceptance_log, 3, "hand-derived 4-hour instance solves exactly") as out:
        inst = ShiftInstance(
            excess=[0.0, 0.0, 20.0, 0.0], demand=[10.0] * 4, carry_in=0.0, p_max=0.5
        )
        solve_shift(inst)  # warm-up
        start = time.perf_counter()
        plan, sol = solve_shift(inst)
        elapsed = time.perf_counter() - start
        assert sol.curtailed_mwh == pytest.approx(2.5, abs=1e-6)
        assert plan.uptake == pytest.approx([0.5, 0.5, 0.0, 0.0], abs=1e-6)
        assert elapsed < 1e-3
        out["detail"] = f"curtailment {sol.curtailed_mwh}, {elapsed * 1e3:.3f} ms"


def test_criterion_04_conservation_every_day(acceptance_log, scenario42, report42):
    with criterion(acceptance_log, 4, "load conservation on every seed-42 day and scheme") as out:
        expected = float(scenario42.bau_profile.sum())
        checked = 0
        for record in report42.days:
            for result in record.results:
                total = float(result.realized_load.sum())
                assert abs(total - expected) <= 1e-6 * expected
                checked += 1
        out["detail"] = f"{checked} day/scheme pairs, 0 violations"


def test_criterion_05_perfect_forecast_equivalence(acceptance_log, scenario42):
    with criterion(acceptance_log, 5, "perfect forecast makes MPC match open loop") as out:
        bau = scenario42.bau_profile
        start = time.perf_counter()
        worst = 0.0
        for day in scenario42.days[:50]:
            perfect = CurtailmentDay(day.day_index, day.actual_excess, day.actual_excess)
            reference = run_open_loop(perfect, bau, p_max=0.5)
            for step in (3, 6):
                result = run_mpc(perfect, bau, p_max=0.5, step_hours=step)
                diff = abs(result.realized_curtailment - reference.realized_curtailment)
                worst = max(worst, diff)
                assert diff <= 1e-6
        elapsed = time.perf_counter() - start
        assert elapsed < 5.0
        out["detail"] = f"50 days, worst |diff| {worst:.2e} MWh, {elapsed:.1f} s"


def test_criterion_06_bau_neutrality(acceptance_log, scenario42):
    with criterion(acceptance_log, 6, "p_max=0 reproduces BAU bit-for-bit") as out:
        bau = scenario42.bau_profile
        specs = (
            SchemeSpec("open_loop", p_max=0.0),
            SchemeSpec("mpc", 3, p_max=0.0),
            SchemeSpec("mpc", 6, p_max=0.0),
        )
        for day in scenario42.days[:10]:
            reference = dataio.dumps_json(run_bau(day, bau).realized_load)
            for spec in specs:
                serialized = dataio.dumps_json(run_day(spec, day, bau).realized_load)
                assert serialized == reference
        out["detail"] = "10 days x 3 schemes, identical serialized loads"


def test_criterion_07_open_loop_dominates_on_forecast(acceptance_log, scenario42, report42):
    with criterion(acceptance_log, 7, "open-loop never loses to BAU on the forecast") as out:
        bau = scenario42.bau_profile
        by_index = {day.day_index: day for day in scenario42.days}
        for record in report42.days:
            day = by_index[record.day_index]
            plan_load = record.results[0].realized_load  # open-loop slot
            planned = curtailment(day.forecast_excess, plan_load)
            reference = curtailment(day.forecast_excess, bau)
            assert planned <= reference + 1e-9
        out["detail"] = f"{len(report42.days)} days"


def test_criterion_08_adversarial_open_loop(acceptance_log):
    with criterion(acceptance_log, 8, "forecast mismatch can push open-loop below BAU") as out:
        forecast = np.zeros(24)
        forecast[2] = 20.0
        actual = np.zeros(24)
        actual[0] = 20.0
        day = CurtailmentDay(0, forecast, actual)
        result = run_open_loop(day, np.full(24, 10.0), p_max=0.5)
        assert result.additional_res_used < 0
        out["detail"] = f"additional RES {result.additional_res_used} MWh"


def test_criterion_09_golden_end_to_end(acceptance_log, golden_dir, tmp_path):
    with criterion(acceptance_log, 9, "full pipeline matches the committed golden report") as out:
        workdir = tmp_path / "pipeline"
        start = time.perf_counter()
        assert cli.main(["synth", "--out", str(workdir), "--seed", "42"]) == 0
        assert (
            cli.main(
                ["simulate", "--config", str(workdir / "run_config.json"), "--out", str(workdir)]
            )
            == 0
        )
        elapsed = time.perf_counter() - start
        produced = (workdir / "report.json").read_bytes()
        golden = (golden_dir / "report_seed42.json").read_bytes()
        assert produced == golden
        report = json.loads(golden)
        totals = {
            (entry["kind"], entry["step_hours"]): entry["total_additional_res_mwh"]
            for entry in report["schemes"]
        }
        worse = {
            (entry["kind"], entry["step_hours"]): entry["worse_than_bau_days"]
            for entry in report["schemes"]
        }
        assert totals[("mpc", 3)] > totals[("mpc", 6)] > totals[("open_loop", None)] > 0
        assert worse[("mpc", 6)] == 0
        assert elapsed < 10.0
        out["detail"] = (
            f"mpc-3 {totals[('mpc', 3)] / 1e3:.1f} > mpc-6 {totals[('mpc', 6)] / 1e3:.1f}"
            f" > open-loop {totals[('open_loop', None)] / 1e3:.1f} GWh, "
            f"worse(mpc-6)={worse[('mpc', 6)]}, {elapsed:.1f} s"
        )


def test_criterion_10_byte_determinism(acceptance_log, tmp_path):
    with criterion(acceptance_log, 10, "byte-identical outputs across runs and parallelism") as out:
        outputs = []
        for name, workers in (("a", "1"), ("b", "4")):
            workdir = tmp_path / name
            assert cli.main(["synth", "--out", str(workdir), "--seed", "42"]) == 0
            config = str(workdir / "run_config.json")
            assert cli.main(["build-days", "--config", config, "--out", str(workdir)]) == 0
            assert (
                cli.main(
                    ["simulate", "--config", config, "--out", str(workdir), "--parallel", workers]
                )
                == 0
            )
            outputs.append(workdir)
        first, second = outputs
        compared = []
        for filename in (
            "load.csv",
            "capacity_factors.csv",
            "manifest.json",
            "curtailment_days.csv",
            "report.json",
        ):
            assert (first / filename).read_bytes() == (second / filename).read_bytes()
            compared.append(filename)
        out["detail"] = f"{len(compared)} artifacts identical with parallel 1 vs 4"
