from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Optional

import typer
from pydantic import ValidationError

from hardball.cli.commands import (
    EXIT_CLAIM_FAILED,
    cmd_bounds,
    cmd_cluster,
    cmd_schema,
    cmd_search,
    cmd_simulate,
    cmd_verify,
    exit_code_for,
)
from hardball.config import Command, Generator, RunConfig, Settings, Tolerances, load_settings
from hardball.errors import HardballError
from hardball.infra.logging import setup_logging

logger = logging.getLogger(__name__)

app = typer.Typer(add_completion=False, help="Exact event-driven hard-ball simulator and claim verifier.")


@dataclass
class CliState:
    settings: Settings
    tolerances: Tolerances


@app.callback()
def configure(
    ctx: typer.Context,
    log_level: Optional[str] = typer.Option(None, help="Logging level (default from HARDBALL_LOG_LEVEL)"),
    json_logs: Optional[bool] = typer.Option(None, "--json-logs/--plain-logs", help="Render logs as JSON lines"),
    tol_contact: Optional[float] = typer.Option(None, help="Contact distance tolerance"),
    tol_overlap: Optional[float] = typer.Option(None, help="Allowed overlap in the initial state"),
    tol_conserve: Optional[float] = typer.Option(None, help="Energy/momentum conservation tolerance"),
    tol_zero: Optional[float] = typer.Option(None, help="Threshold below which a quantity is zero"),
    tol_simultaneous: Optional[float] = typer.Option(None, help="Window within which collisions are simultaneous"),
    tol_mono: Optional[float] = typer.Option(None, help="Allowed increase of a monotone functional"),
    tol_t0: Optional[float] = typer.Option(None, help="Width at which the t0 bisection stops"),
    tol_drift_abort: Optional[float] = typer.Option(None, help="Contact drift that aborts a run"),
) -> None:
    """Global options; tolerances default to HARDBALL_TOLERANCES__* and then to built-in values."""
    settings = load_settings()
    setup_logging(log_level or settings.log_level, json_format=settings.json_logs if json_logs is None else json_logs)
    overrides = {
        "contact": tol_contact,
        "overlap": tol_overlap,
        "conserve": tol_conserve,
        "zero": tol_zero,
        "simultaneous": tol_simultaneous,
        "mono": tol_mono,
        "t0": tol_t0,
        "drift_abort": tol_drift_abort,
    }
    try:
        tolerances = Tolerances(**{**settings.tolerances.model_dump(), **{k: v for k, v in overrides.items() if v is not None}})
    except ValidationError as e:
        typer.echo(f"invalid tolerance: {e}", err=True)
        raise typer.Exit(code=EXIT_CLAIM_FAILED)
    ctx.obj = CliState(settings=settings, tolerances=tolerances)


def _run(ctx: typer.Context, command: Command, body: Callable[[RunConfig, Settings], int], **fields: Any) -> None:
    """Validate the invocation, run ``body`` and map failures onto the exit-code contract."""
    state: CliState = ctx.obj
    params: Dict[str, Any] = {k: v for k, v in fields.items() if v is not None}
    params.setdefault("max_events", state.settings.max_events)
    try:
        config = RunConfig(command=command, tolerances=state.tolerances, **params)
    except ValidationError as e:
        typer.echo(f"invalid arguments: {e}", err=True)
        raise typer.Exit(code=EXIT_CLAIM_FAILED)

    try:
        code = body(config, state.settings)
    except HardballError as e:
        code = exit_code_for(e)
        logger.error("command_failed", extra={"command": command.value, "error": str(e), "exit_code": code})
        typer.echo(f"{command.value} failed: {e}", err=True)
    if code:
        raise typer.Exit(code=code)


@app.command(name="simulate")
def simulate_command(
    ctx: typer.Context,
    scenario: Optional[Generator] = typer.Option(None, help="Generated scenario"),
    state: Optional[Path] = typer.Option(None, help="Initial state JSON file"),
    n: Optional[int] = typer.Option(None, help="Number of balls"),
    d: Optional[int] = typer.Option(None, help="Dimension"),
    seed: Optional[int] = typer.Option(None, help="Seed of the random scenario"),
    spacing: Optional[float] = typer.Option(None, help="Centre spacing of the line scenario"),
    box_scale: Optional[float] = typer.Option(None, help="Box scale of the random scenario"),
    max_events: Optional[int] = typer.Option(None, help="Collision budget (default from HARDBALL_MAX_EVENTS)"),
    horizon: Optional[float] = typer.Option(None, help="Stop simulating at this time"),
    out: Path = typer.Option(Path("out"), help="Output directory"),
) -> None:
    """Simulate one scenario; writes events.jsonl and summary.json."""
    _run(
        ctx,
        Command.SIMULATE,
        lambda config, _: cmd_simulate(config),
        generator=scenario,
        state_file=state,
        n=n,
        d=d,
        seed=seed,
        spacing=spacing,
        box_scale=box_scale,
        max_events=max_events,
        horizon=horizon,
        out=out,
    )


@app.command(name="verify")
def verify_command(
    ctx: typer.Context,
    scenario: Optional[Generator] = typer.Option(None, help="Generated scenario"),
    state: Optional[Path] = typer.Option(None, help="Initial state JSON file"),
    events: Optional[Path] = typer.Option(None, help="Event log (JSONL) to replay and check"),
    n: Optional[int] = typer.Option(None, help="Number of balls"),
    d: Optional[int] = typer.Option(None, help="Dimension"),
    seed: Optional[int] = typer.Option(None, help="Seed of the random scenario"),
    instances: Optional[int] = typer.Option(None, help="Number of generated instances"),
    rho: Optional[float] = typer.Option(None, help="Contact-graph slack ρ"),
    samples: Optional[int] = typer.Option(None, help="Sample times per check grid"),
    cuts: Optional[int] = typer.Option(None, help="Number of cut times"),
    max_events: Optional[int] = typer.Option(None, help="Collision budget"),
    out: Path = typer.Option(Path("out"), help="Output directory"),
) -> None:
    """Run every claim check; exit 1 lists the failing claims."""
    _run(
        ctx,
        Command.VERIFY,
        cmd_verify,
        generator=scenario,
        state_file=state,
        events_file=events,
        n=n,
        d=d,
        seed=seed,
        instances=instances,
        rho=rho,
        samples=samples,
        cuts=cuts,
        max_events=max_events,
        out=out,
    )


@app.command(name="bounds")
def bounds_command(
    ctx: typer.Context,
    n: Optional[int] = typer.Option(None, help="Single number of balls"),
    n_range: Optional[str] = typer.Option(None, help="Inclusive range a..b of n"),
    delta: Optional[float] = typer.Option(None, help="Closest-approach margin δ in (0, 1]"),
    rho: Optional[float] = typer.Option(None, help="Contact-graph slack ρ"),
    out: Path = typer.Option(Path("out"), help="Output directory"),
) -> None:
    """Write the table of closed-form bounds as bounds.csv."""
    _run(
        ctx,
        Command.BOUNDS,
        lambda config, _: cmd_bounds(config, n_range),
        n=n,
        delta=delta,
        rho=rho,
        out=out,
    )


@app.command(name="search")
def search_command(
    ctx: typer.Context,
    n: Optional[int] = typer.Option(None, help="Number of balls"),
    d: Optional[int] = typer.Option(None, help="Dimension"),
    seed: Optional[int] = typer.Option(None, help="Search seed"),
    trials: Optional[int] = typer.Option(None, help="Number of annealing trials"),
    box_scale: Optional[float] = typer.Option(None, help="Box scale of random draws"),
    max_events: Optional[int] = typer.Option(10_000, help="Collision budget per candidate"),
    out: Path = typer.Option(Path("out"), help="Output directory"),
) -> None:
    """Search for a state with many collisions; writes best_state.json."""
    _run(
        ctx,
        Command.SEARCH,
        lambda config, _: cmd_search(config),
        n=n,
        d=d,
        seed=seed,
        trials=trials,
        box_scale=box_scale,
        max_events=max_events,
        out=out,
    )


@app.command(name="cluster")
def cluster_command(
    ctx: typer.Context,
    scenario: Optional[Generator] = typer.Option(None, help="Generated scenario"),
    state: Optional[Path] = typer.Option(None, help="Initial state JSON file"),
    n: Optional[int] = typer.Option(None, help="Number of balls"),
    d: Optional[int] = typer.Option(None, help="Dimension"),
    seed: Optional[int] = typer.Option(None, help="Seed of the random scenario"),
    rho: Optional[float] = typer.Option(None, help="Contact-graph slack ρ"),
    max_events: Optional[int] = typer.Option(None, help="Collision budget"),
    out: Path = typer.Option(Path("out"), help="Output directory"),
) -> None:
    """Extract a dense ρ-connected cluster; writes cluster.json."""
    _run(
        ctx,
        Command.CLUSTER,
        lambda config, _: cmd_cluster(config),
        generator=scenario,
        state_file=state,
        n=n,
        d=d,
        seed=seed,
        rho=rho,
        max_events=max_events,
        out=out,
    )


@app.command(name="schema")
def schema_command(out: Path = typer.Option(Path("docs"), help="Directory for the JSON schemas")) -> None:
    """Write JSON schemas of the state file and the event log."""
    cmd_schema(out)


def main() -> None:
    """CLI entry point."""
    app()


if __name__ == "__main__":
    main()
