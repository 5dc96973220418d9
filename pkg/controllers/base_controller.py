"""
Shared helpers for the command-line controllers.

Builds the validated configuration from --config/--set/--seed, resolves the
realization count and theta mode, and prints key/value reports.
"""
import json
from typing import Iterable, List, Optional

import typer

from config.constants import HarnessConfig
from models.enums import ThetaMode
from repositories.config_repository import ConfigRepository
from schemas.cli_schema import CliInvocation
from schemas.network_config_schema import NetworkConfig
from services.config_service import build_config

CONFIG_OPTION = typer.Option(None, "--config", help="Config file of key=value lines (dB/dBm units)")
SET_OPTION = typer.Option([], "--set", help="Override one key, e.g. --set pcs_dbm=-60 (repeatable)")
SEED_OPTION = typer.Option(None, "--seed", min=0, help="Base seed")


def make_invocation(subcommand: str, config: Optional[str] = None, overrides: Iterable[str] = (), **flags) -> CliInvocation:
    """Validated record of one command line."""
    return CliInvocation(subcommand=subcommand, config_path=config, overrides=list(overrides), **flags)


def load_config(config: Optional[str], overrides: List[str], seed: Optional[int]) -> NetworkConfig:
    """Defaults, then the config file, then --set, then --seed."""
    file_values = ConfigRepository().load(config) if config else None
    return build_config(file_values, overrides, seed)


def theta_mode_for(paper_theta: bool) -> ThetaMode:
    return ThetaMode.ERF if paper_theta else ThetaMode.NUMERIC


def realizations_for(fast: bool, realizations: Optional[int]) -> int:
    """--realizations wins over --fast; otherwise the full count."""
    if realizations is not None:
        return realizations
    return HarnessConfig.FAST_REALIZATIONS if fast else HarnessConfig.DEFAULT_REALIZATIONS


def echo_report(title: str, values: dict):
    """Print a titled block of `key: value` lines."""
    typer.echo(title)
    for key, value in values.items():
        text = format(value, ".10g") if isinstance(value, float) else str(value)
        typer.echo(f"  {key}: {text}")


def echo_json(payload: dict):
    typer.echo(json.dumps(payload, indent=2, sort_keys=True))


def relative_error(estimate: float, reference: float) -> float:
    if reference == 0:
        return abs(estimate)
    return abs(estimate - reference) / abs(reference)
