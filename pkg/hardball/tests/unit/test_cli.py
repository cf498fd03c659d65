import json
import logging

import pandas as pd
import pytest
from typer.testing import CliRunner

from hardball.cli.commands import CLAIMS, exit_code_for, parse_n_range
from hardball.cli.main import app
from hardball.errors import EventBudgetExceeded, InvalidInput, NoGap, SimultaneousCollision, ZeroEnergy

runner = CliRunner()


@pytest.fixture(autouse=True)
def restore_root_logger():
    root = logging.getLogger()
    before, level = list(root.handlers), root.level
    yield
    for handler in list(root.handlers):
        if handler not in before:
            root.removeHandler(handler)
    root.setLevel(level)


def _invoke(*args):
    return runner.invoke(app, [str(a) for a in args])


def _json(path):
    return json.loads(path.read_text())


def test_simulate_line_of_four(tmp_path):
    result = _invoke("simulate", "--scenario", "line", "--n", 4, "--out", tmp_path)
    assert result.exit_code == 0, result.output
    summary = _json(tmp_path / "summary.json")
    assert summary["collisions"] == 6
    assert summary["terminal"] is True
    assert len((tmp_path / "events.jsonl").read_text().splitlines()) == 7


def test_simulate_head_on_writes_one_event(tmp_path):
    result = _invoke("simulate", "--scenario", "head-on", "--out", tmp_path)
    assert result.exit_code == 0, result.output
    lines = (tmp_path / "events.jsonl").read_text().splitlines()
    assert len(lines) == 2
    assert json.loads(lines[1])["pair"] == [0, 1]


def test_simulate_is_byte_identical_across_runs(tmp_path):
    for name in ("a", "b"):
        result = _invoke("simulate", "--scenario", "random", "--n", 5, "--seed", 3, "--out", tmp_path / name)
        assert result.exit_code == 0, result.output
    for filename in ("events.jsonl", "summary.json"):
        assert (tmp_path / "a" / filename).read_bytes() == (tmp_path / "b" / filename).read_bytes()


def test_simulate_budget_exit_code(tmp_path):
    result = _invoke("simulate", "--scenario", "line", "--n", 4, "--max-events", 2, "--out", tmp_path)
    assert result.exit_code == 3
    lines = (tmp_path / "events.jsonl").read_text().splitlines()
    assert len(lines) == 3
    assert json.loads(lines[0])["terminal"] is False
    assert not (tmp_path / "summary.json").exists()


def test_simulate_simultaneous_collision_exit_code(tmp_path):
    state = tmp_path / "chain.json"
    state.write_text(
        json.dumps(
            {
                "dimension": 2,
                "centers": [[-3.0, 0.0], [0.0, 0.0], [3.0, 0.0]],
                "velocities": [[1.0, 0.0], [0.0, 0.0], [-1.0, 0.0]],
            }
        )
    )
    result = _invoke("simulate", "--state", state, "--out", tmp_path / "out")
    assert result.exit_code == 2


def test_missing_scenario_source_is_rejected(tmp_path):
    assert _invoke("simulate", "--n", 4, "--out", tmp_path).exit_code == 1


def test_two_scenario_sources_are_rejected(tmp_path):
    state = tmp_path / "state.json"
    state.write_text("{}")
    result = _invoke("simulate", "--scenario", "line", "--state", state, "--out", tmp_path)
    assert result.exit_code == 1


def test_verify_random_instances_pass(tmp_path):
    result = _invoke("verify", "--scenario", "random", "--n", 4, "--instances", 20, "--seed", 1, "--out", tmp_path)
    report = _json(tmp_path / "verify.json")
    assert result.exit_code == 0, report["failed_claims"]
    assert report["passed"] is True
    assert len(report["instances"]) == 20
    assert set(report["instances"][0]["claims"]) == set(CLAIMS)
    claims = report["instances"][0]["claims"]
    assert claims["phi_delta_bound"]["collisions"] >= 0
    assert claims["phi_delta_bound"]["passed"] is True
    assert claims["S_bound"]["window"][0] == 0.0


def test_verify_head_on_passes_every_claim(tmp_path):
    result = _invoke("--tol-mono", "1e-7", "verify", "--scenario", "head-on", "--out", tmp_path)
    assert result.exit_code == 0, result.output
    report = _json(tmp_path / "verify.json")
    assert report["failed_claims"] == []


def test_verify_replayed_log_passes(tmp_path):
    assert _invoke("simulate", "--scenario", "line", "--n", 4, "--out", tmp_path).exit_code == 0
    result = _invoke("verify", "--events", tmp_path / "events.jsonl", "--out", tmp_path / "check")
    assert result.exit_code == 0, result.output


def test_verify_flags_tampered_log(tmp_path):
    assert _invoke("simulate", "--scenario", "line", "--n", 4, "--out", tmp_path).exit_code == 0
    path = tmp_path / "events.jsonl"
    lines = path.read_text().splitlines()
    event = json.loads(lines[1])
    event["post_velocities"] = [[-c for c in v] for v in event["post_velocities"]]
    lines[1] = json.dumps(event)
    path.write_text("\n".join(lines) + "\n")

    result = _invoke("verify", "--events", path, "--out", tmp_path / "check")
    assert result.exit_code == 1
    assert "F_monotone" in _json(tmp_path / "check" / "verify.json")["failed_claims"]


def test_bounds_range_writes_one_row_per_n(tmp_path):
    result = _invoke("bounds", "--n-range", "3..10", "--delta", 0.5, "--rho", 0.2, "--out", tmp_path)
    assert result.exit_code == 0, result.output
    table = pd.read_csv(tmp_path / "bounds.csv")
    assert list(table["n"]) == list(range(3, 11))
    assert table["log10_phi_delta"].is_monotonic_increasing


def test_bounds_single_n(tmp_path):
    assert _invoke("bounds", "--n", 3, "--out", tmp_path).exit_code == 0
    assert len(pd.read_csv(tmp_path / "bounds.csv")) == 1


def test_bounds_rejects_malformed_range(tmp_path):
    assert _invoke("bounds", "--n-range", "3-x", "--out", tmp_path).exit_code == 1


def test_bounds_rejects_delta_out_of_range(tmp_path):
    assert _invoke("bounds", "--n", 4, "--delta", 1.5, "--out", tmp_path).exit_code == 1


def test_search_witness_reproduces_its_count(tmp_path):
    result = _invoke("search", "--n", 3, "--trials", 20, "--seed", 0, "--out", tmp_path)
    assert result.exit_code == 0, result.output
    found = _json(tmp_path / "search.json")["collisions"]
    assert found >= 3

    replay = _invoke("simulate", "--state", tmp_path / "best_state.json", "--out", tmp_path / "replay")
    assert replay.exit_code == 0, replay.output
    assert _json(tmp_path / "replay" / "summary.json")["collisions"] == found


def test_cluster_of_head_on(tmp_path):
    result = _invoke("cluster", "--scenario", "head-on", "--rho", 0.2, "--out", tmp_path)
    assert result.exit_code == 0, result.output
    cluster = _json(tmp_path / "cluster.json")
    assert cluster["balls"] == [0, 1]
    assert cluster["rho_connected"] is True
    assert cluster["meets_floor"] is True


def test_schema_command(tmp_path):
    assert _invoke("schema", "--out", tmp_path).exit_code == 0
    assert "properties" in _json(tmp_path / "state.schema.json")
    assert "event" in _json(tmp_path / "event_log.schema.json")


def test_invalid_tolerance_exits_one(tmp_path):
    result = _invoke("--tol-contact", 0, "simulate", "--scenario", "line", "--out", tmp_path)
    assert result.exit_code == 1


def test_exit_code_for(line4_trajectory):
    assert exit_code_for(EventBudgetExceeded(1, line4_trajectory)) == 3
    assert exit_code_for(SimultaneousCollision(1.0, [(0, 1), (1, 2)])) == 2
    assert exit_code_for(ZeroEnergy("still")) == 2
    assert exit_code_for(NoGap("none")) == 1


def test_parse_n_range():
    assert parse_n_range("3..5") == [3, 4, 5]
    assert parse_n_range("7") == [7]
    for bad in ("3-x", "1..4", "6..3"):
        with pytest.raises(InvalidInput):
            parse_n_range(bad)
