"""
Oracle sub-commands: each runs one analytic model next to an independent
reference (simulation, quadrature or exhaustive search) and prints both.
"""
import logging
import math
from typing import List, Optional

import numpy as np
import typer

from config.constants import ThinningConfig
from controllers.base_controller import (
    CONFIG_OPTION,
    SEED_OPTION,
    SET_OPTION,
    echo_report,
    load_config,
    make_invocation,
    relative_error,
    theta_mode_for,
)
from models.enums import Direction
from services.association_service import build_problem, sample_instance, solve_association
from services.contention_service import (
    ContentionService,
    estimate_retention,
    theta_gamma_closed_form,
    theta_numeric,
)
from services.link_metrics_service import (
    config_si_params,
    evaluate_stp_fd,
    fd_link_path_loss,
    sample_si_power,
    stp_direction_analytic,
    stp_monte_carlo,
)
from services.pcs_threshold_service import grid_search_pcs, newton_pcs
from utils.seeding import make_rng
from utils.units import db_to_linear

logger = logging.getLogger(__name__)

oracle_app = typer.Typer(help="Compare an analytic model with its oracle", no_args_is_help=True)


@oracle_app.command("thinning")
def thinning(
    lam: float = typer.Option(0.5, "--lambda", help="PPP intensity"),
    radius: float = typer.Option(0.8, "--radius", help="Carrier-sense radius"),
    n: int = typer.Option(ThinningConfig.DEFAULT_REALIZATIONS, "-n", "--realizations", min=1),
    window: float = typer.Option(ThinningConfig.DEFAULT_WINDOW, "--window", help="Square window side"),
    seed: int = typer.Option(0, "--seed", min=0),
):
    """Analytic vs simulated Matern type-II retention probability."""
    result = estimate_retention(lam, radius, (window, window), n, seed)
    echo_report(
        "thinning",
        {
            "analytic": result.analytic,
            "empirical": result.estimate,
            "stderr": result.stderr,
            "interior_points": result.interior_points,
            "relative_error": result.relative_error,
        },
    )


@oracle_app.command("theta")
def theta(
    pcs_dbm: float = typer.Option(-70.0, "--pcs-dbm", help="PCS threshold in dBm"),
    alpha: float = typer.Option(3.4, "--alpha"),
):
    """Contention weight by quadrature vs the Gamma-function closed form."""
    pcs = db_to_linear(pcs_dbm)
    numeric = theta_numeric(pcs, alpha)
    closed = theta_gamma_closed_form(pcs, alpha)
    echo_report(
        "theta",
        {"quadrature": numeric, "closed_form": closed, "relative_error": relative_error(numeric, closed)},
    )


@oracle_app.command("si-gamma")
def si_gamma(
    config: Optional[str] = CONFIG_OPTION,
    overrides: List[str] = SET_OPTION,
    seed: Optional[int] = SEED_OPTION,
    n: int = typer.Option(100_000, "-n", "--samples", min=2),
):
    """Moments of the Gamma SI law vs a sample drawn from it."""
    make_invocation("oracle", config, overrides, seed=seed)
    cfg = load_config(config, overrides, seed)
    params = config_si_params(cfg)
    samples = sample_si_power(make_rng(cfg.seed), params, n)
    sample_mean = float(np.mean(samples))
    echo_report(
        "si-gamma",
        {
            "shape": params.shape,
            "scale": params.scale,
            "mean": params.mean,
            "sample_mean": sample_mean,
            "variance": params.variance,
            "sample_variance": float(np.var(samples, ddof=1)),
            "relative_error": relative_error(sample_mean, params.mean),
        },
    )


@oracle_app.command("stp")
def stp(
    config: Optional[str] = CONFIG_OPTION,
    overrides: List[str] = SET_OPTION,
    seed: Optional[int] = SEED_OPTION,
    direction: Direction = typer.Option(Direction.UL, "--direction", case_sensitive=False),
    n: int = typer.Option(2_000, "-n", "--realizations", min=1),
    paper_theta: bool = typer.Option(False, "--paper-theta"),
):
    """Analytic STP at the substituted link distance vs Monte-Carlo simulation."""
    make_invocation("oracle", config, overrides, seed=seed, paper_theta=paper_theta)
    cfg = load_config(config, overrides, seed)
    contention = ContentionService(theta_mode_for(paper_theta))
    lt_s, lt_a = contention.hd_active_densities(cfg)
    ell = fd_link_path_loss(cfg)
    if direction is Direction.FD:
        analytic = evaluate_stp_fd(cfg, 1.0, ell, lt_s, lt_a).value
    else:
        analytic = stp_direction_analytic(cfg, direction, 1.0, ell, lt_s, lt_a, include_si=True).value
    estimate = stp_monte_carlo(cfg, direction, n)
    echo_report(
        f"stp ({direction.value})",
        {
            "analytic": analytic,
            "monte_carlo": estimate.estimate,
            "stderr": estimate.stderr,
            "relative_error": relative_error(estimate.estimate, analytic),
        },
    )


@oracle_app.command("newton")
def newton(
    config: Optional[str] = CONFIG_OPTION,
    overrides: List[str] = SET_OPTION,
    seed: Optional[int] = SEED_OPTION,
    paper_theta: bool = typer.Option(False, "--paper-theta"),
    grid_points: int = typer.Option(200, "--grid-points", min=2),
):
    """Newton threshold search vs a log-spaced grid on one sampled instance."""
    make_invocation("oracle", config, overrides, seed=seed, paper_theta=paper_theta)
    cfg = load_config(config, overrides, seed)
    theta_mode = theta_mode_for(paper_theta)
    aps, stas = sample_instance(cfg, cfg.seed)
    problem = build_problem(cfg, aps, stas, theta_mode)
    association = solve_association(problem)
    state = newton_pcs(association.xi, problem, theta_mode=theta_mode)
    grid_gamma, grid_value = grid_search_pcs(association.xi, problem, grid_points, theta_mode)
    echo_report(
        "newton",
        {
            "newton_gamma_mw": state.gamma_pcs,
            "newton_ln_objective": state.log_objective,
            "grid_gamma_mw": grid_gamma,
            "grid_ln_objective": grid_value,
            "bound_mw": state.bound,
            "hit_bound": state.hit_bound,
            "iterations": state.iter,
            "ln_gap": grid_value - state.log_objective if math.isfinite(grid_value) else math.nan,
        },
    )
