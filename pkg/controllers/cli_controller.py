"""
Command-line surface: run, sweep, validate and oracle.

parse_and_dispatch maps outcomes to exit codes: 0 success, 1 usage or
validation failure, 2 experiment or output failure.
"""
import logging
from pathlib import Path
from typing import List, Optional, Sequence

import click
import typer
from pydantic import ValidationError

from config.scenarios import describe_catalog, get_scenario
from config.settings import get_settings
from controllers.base_controller import (
    CONFIG_OPTION,
    SEED_OPTION,
    SET_OPTION,
    echo_json,
    load_config,
    make_invocation,
    realizations_for,
    theta_mode_for,
)
from controllers.oracle_controller import oracle_app
from models.enums import MetricKind, Scheme, SweepParameter
from repositories.result_repository import ResultRepository
from schemas.experiment_schema import ExperimentResult, Scenario
from services.experiment_service import realization_seeds, run_experiment, summarize_gains
from utils.exceptions import ConfigValidationError, DenseWlanError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_FAILED = 2

app = typer.Typer(
    help="Dense FD WLAN simulator: association, PCS thresholds and throughput curves",
    add_completion=False,
)
app.add_typer(oracle_app, name="oracle")

OUT_OPTION = typer.Option(None, "--out", help="Output directory (default DENSEWLAN_OUT_DIR)")
FAST_OPTION = typer.Option(False, "--fast", help="Use the short realization count")
PAPER_THETA_OPTION = typer.Option(False, "--paper-theta", help="Printed erf form of the contention weight")
REALIZATIONS_OPTION = typer.Option(None, "--realizations", min=1, help="Realizations per point and scheme")


def _write_outputs(scenario: Scenario, result: ExperimentResult, out: Optional[str]) -> Path:
    out_dir = Path(out or get_settings().out_dir) / scenario.name
    ResultRepository(out_dir).save_run(scenario, result, realization_seeds(scenario))
    for gain in summarize_gains(result):
        label = f" [{gain.variant}]" if gain.variant else ""
        typer.echo(
            f"JAPO vs {gain.baseline.value}{label} at {gain.sweep_value:g}: "
            f"{gain.japo:.6g} vs {gain.baseline_value:.6g} ({gain.gain_pct:+.1f}%)"
        )
    typer.echo(f"wrote {len(result.rows)} rows to {out_dir}")
    return out_dir


@app.command("run")
def run(
    config: Optional[str] = CONFIG_OPTION,
    overrides: List[str] = SET_OPTION,
    out: Optional[str] = OUT_OPTION,
    fast: bool = FAST_OPTION,
    paper_theta: bool = PAPER_THETA_OPTION,
    seed: Optional[int] = SEED_OPTION,
    realizations: Optional[int] = REALIZATIONS_OPTION,
    schemes: Optional[List[Scheme]] = typer.Option(
        None, "--scheme", case_sensitive=False, help="Scheme to evaluate (repeatable, default all)"
    ),
):
    """Evaluate one configuration for the chosen schemes."""
    make_invocation(
        "run", config, overrides, out_dir=out, fast=fast, paper_theta=paper_theta, seed=seed,
        realizations=realizations,
    )
    cfg = load_config(config, overrides, seed)
    scenario = Scenario(
        name="run",
        description="single configuration",
        base=cfg,
        sweep_param=SweepParameter.LAMBDA_S,
        sweep_values=(cfg.lambda_s,),
        schemes=tuple(dict.fromkeys(schemes or list(Scheme))),
        metrics=tuple(MetricKind),
        n_realizations=realizations_for(fast, realizations),
        base_seed=cfg.seed,
    )
    result = run_experiment(scenario, theta_mode_for(paper_theta))
    _write_outputs(scenario, result, out)


@app.command("sweep")
def sweep(
    scenario_name: Optional[str] = typer.Option(None, "--scenario", help="Catalog scenario"),
    list_only: bool = typer.Option(False, "--list", help="Print the scenario catalog"),
    config: Optional[str] = CONFIG_OPTION,
    overrides: List[str] = SET_OPTION,
    out: Optional[str] = OUT_OPTION,
    fast: bool = FAST_OPTION,
    paper_theta: bool = PAPER_THETA_OPTION,
    seed: Optional[int] = SEED_OPTION,
    realizations: Optional[int] = REALIZATIONS_OPTION,
):
    """Run a catalog scenario."""
    if list_only:
        for line in describe_catalog():
            typer.echo(line)
        return
    if not scenario_name:
        raise click.UsageError("sweep needs --scenario NAME or --list")
    make_invocation(
        "sweep", config, overrides, out_dir=out, fast=fast, paper_theta=paper_theta, seed=seed,
        realizations=realizations,
    )
    base = load_config(config, overrides, seed)
    scenario = get_scenario(scenario_name, realizations_for(fast, realizations), base=base)
    result = run_experiment(scenario, theta_mode_for(paper_theta))
    _write_outputs(scenario, result, out)


@app.command("validate")
def validate(
    config: Optional[str] = CONFIG_OPTION,
    overrides: List[str] = SET_OPTION,
    seed: Optional[int] = SEED_OPTION,
):
    """Parse and validate a configuration and print it in linear units."""
    make_invocation("validate", config, overrides, seed=seed)
    cfg = load_config(config, overrides, seed)
    echo_json(cfg.model_dump(mode="json"))


def parse_and_dispatch(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one command line and return its exit code

    Args:
        argv: Arguments without the program name

    Returns:
        0 on success, 1 on usage or validation errors, 2 on experiment or IO failure
    """
    args = list(argv or [])
    command = typer.main.get_command(app)
    if not args:
        with click.Context(command, info_name="densewlan") as ctx:
            typer.echo(command.get_help(ctx))
        return EXIT_INVALID

    try:
        code = command.main(args=args, prog_name="densewlan", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return EXIT_INVALID
    except click.Abort:
        return EXIT_INVALID
    except (ConfigValidationError, ValidationError) as e:
        typer.echo(f"invalid configuration: {e}", err=True)
        return EXIT_INVALID
    except (DenseWlanError, ValueError, OSError) as e:
        logger.error(f"command failed: {e}")
        typer.echo(f"error: {e}", err=True)
        return EXIT_FAILED
    return code if isinstance(code, int) else EXIT_OK
