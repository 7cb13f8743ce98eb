import dataclasses
from pathlib import Path

import pytest

from evshift import dataio, synth
from evshift.control import SchemeSpec
from evshift.sim import build_scenario, run_year

GOLDEN_DIR = Path(__file__).parent / "golden"

# test_acceptance appends (number, description, passed, detail) tuples; the
# terminal summary prints one line per criterion even when assertions fail.
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, desc, ok, detail in sorted(ACCEPTANCE_RESULTS):
        line = f"criterion {num:2d} {'PASS' if ok else 'FAIL'} - {desc}"
        if detail:
            line += f" [{detail}]"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_RESULTS


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN_DIR


def load_dataset_scenario(dataset_dir):
    """Build a Scenario from a dataset directory the way the CLI does."""
    base = Path(dataset_dir)
    fleet = dataio.read_fleet_config(base / "fleet_config.json")
    distribution = dataio.read_hourly_distribution_csv(base / "hourly_distribution.csv")
    fleet = dataclasses.replace(fleet, hourly_distribution=distribution)
    load = dataio.read_load_csv(base / "load.csv")
    wind_cf, solar_cf = dataio.read_capacity_factors_csv(base / "capacity_factors.csv")
    cap, growth = dataio.read_scenario_config(base / "scenario_config.json")
    return build_scenario(fleet, load, wind_cf, solar_cf, cap, growth)


@pytest.fixture(scope="session")
def dataset42(tmp_path_factory):
    out = tmp_path_factory.mktemp("dataset42")
    manifest = synth.synth_dataset(out, seed=42)
    return out, manifest


@pytest.fixture(scope="session")
def scenario42(dataset42):
    directory, _ = dataset42
    return load_dataset_scenario(directory)


@pytest.fixture(scope="session")
def report42(scenario42):
    schemes = [SchemeSpec("open_loop"), SchemeSpec("mpc", 6), SchemeSpec("mpc", 3)]
    return run_year(scenario42.days, scenario42.bau_profile, schemes, parallel=2)
