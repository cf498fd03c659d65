"""Command bodies behind the CLI: each takes a validated RunConfig and returns an exit code."""

from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from hardball.analysis import anchor_at_t0, check_F_monotone, check_lemma_suite
from hardball.clusters import (
    SEPARATION_DISTANCE,
    cross_collisions_after,
    dense_cluster_search,
    is_rho_connected,
    min_cross_distance,
    upcrossings,
    velocity_gap_partition,
)
from hardball.config import Generator, RunConfig, Settings, Tolerances
from hardball.dynamics import SystemState, is_normalized, normalize_frame
from hardball.engine import Trajectory, extend_backward, simulate
from hardball.errors import (
    ContactDrift,
    EventBudgetExceeded,
    HardballError,
    InvalidInput,
    InvalidState,
    SamplingExhausted,
    SimultaneousCollision,
    ZeroEnergy,
)
from hardball.infra.persistence import StateStore, json_schemas, read_event_log, write_event_log
from hardball.scenarios import (
    bounds_table,
    collision_budget,
    head_on,
    line_of_balls,
    partition_times,
    random_admissible,
    search_max_collisions,
    upcrossing_bound,
)
from hardball.scenarios.generators import Scenario

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CLAIM_FAILED = 1
EXIT_DEGENERATE = 2
EXIT_BUDGET = 3

CLAIMS = (
    "lemma_angle_dwn",
    "lemma_angle_cut",
    "lemma_norm_bound",
    "lemma_angle_x",
    "lemma_norm_increasing",
    "F_monotone",
    "separation_T_star",
    "upcrossing_spacing",
    "S_bound",
    "phi_delta_bound",
)
SPACING_SLACK = 1e-9
SPAN_FACTOR = 1.25
CUT_FRACTION = 0.8


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, EventBudgetExceeded):
        return EXIT_BUDGET
    if isinstance(exc, (SimultaneousCollision, ZeroEnergy, InvalidState, ContactDrift, SamplingExhausted)):
        return EXIT_DEGENERATE
    return EXIT_CLAIM_FAILED


def _finite(value: Optional[float]) -> Optional[float]:
    if value is None or not math.isfinite(value):
        return None
    return float(value)


def _jsonable(value: Any) -> Any:
    """Non-finite floats become null; tuples become lists."""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (float, np.floating)):
        return _finite(float(value))
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def write_json(path: Path, payload: Any) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_jsonable(payload), indent=2, sort_keys=True, allow_nan=False) + "\n")
    return path


def _instance_seeds(seed: int, instances: int) -> List[int]:
    if instances == 1:
        return [seed]
    return [int(child.generate_state(1)[0]) for child in np.random.SeedSequence(seed).spawn(instances)]


def build_scenario(config: RunConfig, seed: Optional[int] = None) -> Scenario:
    """The generated scenario named in the config."""
    seed = config.seed if seed is None else seed
    if config.generator is Generator.LINE:
        return line_of_balls(config.n, config.d, config.spacing)
    if config.generator is Generator.RANDOM:
        return random_admissible(config.n, config.d, seed=seed, box_scale=config.box_scale)
    if config.generator is Generator.HEAD_ON:
        return head_on(config.d)
    raise InvalidInput("no generator selected")


def load_initial_state(config: RunConfig) -> SystemState:
    """Initial state from --state or --scenario, moved to the normalized frame if needed."""
    if config.state_file is not None:
        state = StateStore(config.state_file).load()
    else:
        state = build_scenario(config).state
    if not is_normalized(state, config.tolerances):
        state = normalize_frame(state, config.tolerances)
    return state


# --- simulate ---------------------------------------------------------------


def summarize(traj: Trajectory, config: RunConfig) -> Dict[str, Any]:
    summary: Dict[str, Any] = {
        "collisions": traj.collision_count,
        "terminal": traj.terminal,
        "delta_observed": _finite(traj.delta_observed),
        "pairs": [list(p) for p in traj.pair_sequence],
        "x0_norm": None,
        "t0": None,
    }
    try:
        full = traj if traj.backward_complete else extend_backward(traj, config.max_events, config.tolerances)
        anchored, t0 = anchor_at_t0(full, config.tolerances)
        summary["t0"] = t0
        summary["x0_norm"] = float(np.linalg.norm(anchored.evaluate(0.0).phase_position))
    except HardballError as e:
        logger.warning("t0_unavailable", extra={"error": str(e)})
    return summary


def cmd_simulate(config: RunConfig) -> int:
    initial = load_initial_state(config)
    try:
        traj = simulate(initial, max_events=config.max_events, horizon=config.horizon, tolerances=config.tolerances)
    except EventBudgetExceeded as e:
        # keep what was simulated; the caller maps the error to its exit code
        write_event_log(config.out / "events.jsonl", e.partial)
        raise
    write_event_log(config.out / "events.jsonl", traj)
    summary = summarize(traj, config)
    write_json(config.out / "summary.json", summary)
    logger.info("simulate_finished", extra={"collisions": summary["collisions"], "out": str(config.out)})
    return EXIT_OK


# --- verify -----------------------------------------------------------------


@dataclass(frozen=True)
class InstanceReport:
    label: str
    claims: Dict[str, Dict[str, Any]]

    @property
    def failed(self) -> List[str]:
        return [name for name in CLAIMS if not self.claims[name]["passed"]]


def _failed_claim(name: str, error: BaseException) -> Dict[str, Any]:
    return {"claim": name, "passed": False, "notes": [f"{type(error).__name__}: {error}"]}


def _guarded(name: str, check: Callable[[], Dict[str, Any]]) -> Dict[str, Any]:
    try:
        return check()
    except HardballError as e:
        logger.info("claim_errored", extra={"claim": name, "error": str(e)})
        return _failed_claim(name, e)


def _f_monotone(traj: Trajectory, samples: Sequence[float], tolerances: Tolerances) -> Dict[str, Any]:
    axes = [check_F_monotone(traj, j, samples, tolerances) for j in range(traj.dimension)]
    return {
        "claim": "F_monotone",
        "passed": all(r.passed for r in axes),
        "worst_violation": max(r.worst_violation for r in axes),
        "axes": {r.claim: r.to_dict() for r in axes},
    }


def _separation(traj: Trajectory) -> Dict[str, Any]:
    x0_norm = float(np.linalg.norm(traj.evaluate(0.0).phase_position))
    T, T_star = partition_times(traj.n, x0_norm)
    partition = velocity_gap_partition(traj, T)
    distance = min_cross_distance(traj, partition, T_star)
    late = cross_collisions_after(traj, partition, T_star)
    return {
        "claim": "separation_T_star",
        "passed": distance > SEPARATION_DISTANCE and not late,
        "T": T,
        "T_star": T_star,
        "n1": list(partition.n1),
        "n2": list(partition.n2),
        "min_cross_distance": _finite(distance),
        "cross_collisions_after": len(late),
    }


def _upcrossing_claims(traj: Trajectory, start: float, rho: float) -> Dict[str, Dict[str, Any]]:
    """Upcrossings S(start, inf) of a trajectory anchored at t0 = 0."""
    stop = math.inf if traj.terminal else traj.end
    ledger = upcrossings(traj, start, stop, rho)
    spacing = ledger.min_even_spacing()
    bound = upcrossing_bound(traj.n, rho)
    total = ledger.total
    within = total == 0 or math.log10(total) <= bound.log10_value
    window = [start, _finite(stop)]
    return {
        "upcrossing_spacing": {
            "claim": "upcrossing_spacing",
            "passed": spacing >= rho / 2.0 - SPACING_SLACK,
            "min_spacing": _finite(spacing),
            "required": rho / 2.0,
            "window": window,
        },
        "S_bound": {
            "claim": "S_bound",
            "passed": within,
            "total": total,
            "log10_bound": bound.log10_value,
            "window": window,
        },
    }


def _phi_delta(traj: Trajectory) -> Dict[str, Any]:
    """Collision count against φ_δ(n) at the observed δ."""
    count = traj.collision_count
    budget = collision_budget(traj.n, traj.delta_observed)
    return {
        "claim": "phi_delta_bound",
        "passed": count == 0 or math.log10(count) <= budget,
        "collisions": count,
        "delta_observed": _finite(traj.delta_observed),
        "log10_bound": _finite(budget),
        "complete": traj.terminal and traj.backward_complete,
    }


def verify_trajectory(traj: Trajectory, config: RunConfig, label: str = "0") -> InstanceReport:
    """Every claim on one trajectory; a claim that raises counts as failed."""
    tol = config.tolerances
    claims: Dict[str, Dict[str, Any]] = {}
    try:
        full = traj if traj.backward_complete else extend_backward(traj, config.max_events, tol)
        anchored, t0 = anchor_at_t0(full, tol)
    except HardballError as e:
        logger.info("anchor_failed", extra={"instance": label, "error": str(e)})
        for name in CLAIMS:
            if name not in ("F_monotone", "phi_delta_bound"):
                claims[name] = _failed_claim(name, e)
        times = [ev.time for ev in traj.events]
        lo, hi = (min(times), max(times)) if times else (traj.initial.time, traj.initial.time + 1.0)
        samples = np.linspace(lo - 1.0, hi + 1.0, config.samples).tolist()
        claims["F_monotone"] = _guarded("F_monotone", lambda: _f_monotone(traj, samples, tol))
        claims["phi_delta_bound"] = _guarded("phi_delta_bound", lambda: _phi_delta(traj))
        return InstanceReport(label, claims)

    span = SPAN_FACTOR * max([abs(t) for t in anchored.event_times] + [1.0])
    samples = np.linspace(-span, span, config.samples).tolist()
    cut_times = np.linspace(0.0, CUT_FRACTION * span, config.cuts).tolist()

    def lemmas() -> Dict[str, Dict[str, Any]]:
        return {r.claim: r.to_dict() for r in check_lemma_suite(anchored, cut_times, samples, tol)}

    try:
        claims.update(lemmas())
    except HardballError as e:
        for name in CLAIMS[:5]:
            claims[name] = _failed_claim(name, e)
    claims["F_monotone"] = _guarded("F_monotone", lambda: _f_monotone(anchored, samples, tol))
    claims["separation_T_star"] = _guarded("separation_T_star", lambda: _separation(anchored))
    try:
        claims.update(_upcrossing_claims(anchored, 0.0, config.rho))
    except HardballError as e:
        for name in ("upcrossing_spacing", "S_bound"):
            claims[name] = _failed_claim(name, e)
    claims["phi_delta_bound"] = _guarded("phi_delta_bound", lambda: _phi_delta(anchored))
    report = InstanceReport(label, claims)
    logger.debug("instance_verified", extra={"instance": label, "t0": t0, "failed": report.failed})
    return report


def _verify_generated(config: RunConfig, seed: int) -> InstanceReport:
    state = normalize_frame(build_scenario(config, seed).state, config.tolerances)
    traj = simulate(state, max_events=config.max_events, tolerances=config.tolerances)
    return verify_trajectory(traj, config, label=str(seed))


def cmd_verify(config: RunConfig, settings: Settings) -> int:
    if config.events_file is not None:
        reports = [verify_trajectory(read_event_log(config.events_file), config, label=config.events_file.name)]
    elif config.state_file is not None:
        traj = simulate(load_initial_state(config), max_events=config.max_events, tolerances=config.tolerances)
        reports = [verify_trajectory(traj, config, label=config.state_file.name)]
    else:
        seeds = _instance_seeds(config.seed, config.instances)
        with ThreadPoolExecutor(max_workers=min(settings.threads, len(seeds))) as pool:
            reports = list(pool.map(lambda s: _verify_generated(config, s), seeds))

    failed = sorted({name for report in reports for name in report.failed})
    payload = {
        "passed": not failed,
        "failed_claims": failed,
        "instances": [{"instance": r.label, "failed": r.failed, "claims": r.claims} for r in reports],
    }
    write_json(config.out / "verify.json", payload)
    logger.info("verify_finished", extra={"instances": len(reports), "failed": failed})
    return EXIT_OK if not failed else EXIT_CLAIM_FAILED


# --- bounds -----------------------------------------------------------------


def parse_n_range(text: str) -> List[int]:
    """``"a..b"`` (inclusive) or a single integer."""
    lo_text, sep, hi_text = text.partition("..")
    try:
        lo = int(lo_text)
        hi = int(hi_text) if sep else lo
    except ValueError as e:
        raise InvalidInput(f"malformed n range {text!r}; expected a..b") from e
    if lo < 2 or hi < lo:
        raise InvalidInput(f"n range {text!r} must satisfy 2 <= a <= b")
    return list(range(lo, hi + 1))


def cmd_bounds(config: RunConfig, n_range: Optional[str] = None) -> int:
    n_values = parse_n_range(n_range) if n_range else [config.n]
    table = bounds_table(n_values, config.delta, config.rho)
    path = config.out / "bounds.csv"
    path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(path, index=False, float_format="%.17g")
    logger.info("bounds_written", extra={"rows": len(table), "path": str(path)})
    return EXIT_OK


# --- search / cluster -------------------------------------------------------


def cmd_search(config: RunConfig) -> int:
    result = search_max_collisions(
        config.n,
        config.d,
        trials=config.trials,
        seed=config.seed,
        max_events=config.max_events,
        box_scale=config.box_scale,
        tolerances=config.tolerances,
    )
    StateStore(config.out / "best_state.json").save(result.best.state)
    budget = collision_budget(config.n, result.delta_observed)
    write_json(
        config.out / "search.json",
        {
            "n": config.n,
            "d": config.d,
            "seed": config.seed,
            "trials": result.trials,
            "accepted": result.accepted,
            "collisions": result.count,
            "delta_observed": _finite(result.delta_observed),
            "log10_phi_delta": _finite(budget),
            "within_phi_delta": result.count == 0 or math.log10(result.count) <= budget,
            "counts_seen": sorted(result.witnesses),
        },
    )
    return EXIT_OK


def cmd_cluster(config: RunConfig) -> int:
    initial = load_initial_state(config)
    traj = simulate(initial, max_events=config.max_events, tolerances=config.tolerances)
    cluster = dense_cluster_search(traj, config.rho, start=initial.time)
    connected = is_rho_connected(traj, cluster.balls, cluster.interval, config.rho, config.tolerances)
    write_json(
        config.out / "cluster.json",
        {
            "balls": list(cluster.balls),
            "interval": [cluster.interval[0], _finite(cluster.interval[1])],
            "count": cluster.count,
            "rho": cluster.rho,
            "intervals": cluster.intervals,
            "total": cluster.total,
            "pigeonhole_floor": cluster.pigeonhole_floor,
            "meets_floor": cluster.count >= cluster.pigeonhole_floor,
            "rho_connected": connected,
        },
    )
    logger.info("cluster_found", extra={"balls": list(cluster.balls), "count": cluster.count})
    return EXIT_OK if connected else EXIT_CLAIM_FAILED


def cmd_schema(out: Path) -> int:
    schemas = json_schemas()
    write_json(out / "state.schema.json", schemas["state"])
    write_json(out / "event_log.schema.json", schemas["event_log"])
    return EXIT_OK


__all__ = [
    "CLAIMS",
    "EXIT_BUDGET",
    "EXIT_CLAIM_FAILED",
    "EXIT_DEGENERATE",
    "EXIT_OK",
    "InstanceReport",
    "build_scenario",
    "cmd_bounds",
    "cmd_cluster",
    "cmd_schema",
    "cmd_search",
    "cmd_simulate",
    "cmd_verify",
    "exit_code_for",
    "load_initial_state",
    "parse_n_range",
    "summarize",
    "verify_trajectory",
]
