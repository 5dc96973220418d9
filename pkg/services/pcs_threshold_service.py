"""
PCS Threshold Service

Selects the PCS threshold Gamma for a fixed association by a truncated Newton
ascent with backtracking, constrained to [GAMMA_MIN, bound]. The default
search runs on ln(objective) over ln(Gamma), which has the same maximizer and
stays finite where the objective underflows.
"""
import logging
import math
from typing import Callable, Optional, Tuple

import numpy as np

from config.constants import NewtonConfig
from models.enums import SearchSpace, ThetaMode
from schemas.optimizer_schema import AssociationProblem, NewtonState
from services.association_service import log_association_objective, pair_log_rates
from services.contention_service import ContentionService, fd_pcs_bound
from utils.exceptions import NonFiniteObjectiveError
from utils.logging_utils import get_stage_logger

logger = logging.getLogger(__name__)
stage_logger = get_stage_logger(__name__, "pcs-newton")


# ============================================================================
# OBJECTIVE
# ============================================================================

class PcsObjective:
    """
    Objective of the threshold search for a fixed association

    Pair path losses are fixed by the instance; the active densities and STPs
    are re-evaluated at every Gamma.
    """

    def __init__(self, problem: AssociationProblem, xi_star: np.ndarray, theta_mode: ThetaMode = ThetaMode.NUMERIC):
        self.problem = problem
        self.xi_star = np.asarray(xi_star, dtype=float)
        self.contention = ContentionService(theta_mode)
        self.evaluations = 0

    def log_value(self, gamma_pcs: float) -> float:
        """ln of the association-weighted mean rate at threshold gamma_pcs."""
        self.evaluations += 1
        cfg = self.problem.cfg.with_overrides(pcs=float(gamma_pcs))
        log_rates = pair_log_rates(cfg, self.problem.path_loss, self.contention, self.problem.half_duplex)
        return log_association_objective(self.xi_star, log_rates)

    def value(self, gamma_pcs: float) -> float:
        return math.exp(self.log_value(gamma_pcs))

    def bound(self) -> float:
        """Largest Gamma allowed by the weakest associated pair."""
        positive = self.xi_star[self.xi_star > 0]
        xi_min = float(positive.min()) if positive.size else 0.0
        return fd_pcs_bound(self.problem.cfg, xi_min)


# ============================================================================
# DERIVATIVES
# ============================================================================

def _checked(func: Callable[[float], float], x: float) -> float:
    value = func(x)
    if not math.isfinite(value):
        raise NonFiniteObjectiveError(x, value)
    return value


def finite_difference_derivatives(
    func: Callable[[float], float],
    x: float,
    step: float,
    hess_step: float,
) -> Tuple[float, float]:
    """
    First and second derivatives by central differences

    The first derivative is Richardson-extrapolated once from steps h and 2h,
    the second uses a plain three-point stencil.

    Args:
        func: Scalar function
        x: Evaluation point
        step: First-derivative step h
        hess_step: Second-derivative step

    Returns:
        (grad, hess)

    Raises:
        NonFiniteObjectiveError: If func is not finite at a stencil point
    """
    f0 = _checked(func, x)
    d_h = (_checked(func, x + step) - _checked(func, x - step)) / (2.0 * step)
    d_2h = (_checked(func, x + 2.0 * step) - _checked(func, x - 2.0 * step)) / (4.0 * step)
    grad = (4.0 * d_h - d_2h) / 3.0
    hess = (_checked(func, x + hess_step) - 2.0 * f0 + _checked(func, x - hess_step)) / hess_step ** 2
    return grad, hess


def linear_steps(gamma_pcs: float) -> Tuple[float, float]:
    """Stencil steps in Gamma that keep every stencil point positive."""
    step = min(max(NewtonConfig.FD_REL_STEP * gamma_pcs, NewtonConfig.FD_ABS_STEP), gamma_pcs / 4.0)
    hess_step = min(max(NewtonConfig.FD_HESS_REL_STEP * gamma_pcs, NewtonConfig.FD_ABS_STEP), gamma_pcs / 2.0)
    return step, hess_step


def sdt_derivatives(
    gamma_pcs: float,
    xi_star: np.ndarray,
    problem: AssociationProblem,
    theta_mode: ThetaMode = ThetaMode.NUMERIC,
) -> Tuple[float, float]:
    """d/dGamma and d2/dGamma2 of the association-weighted rate at gamma_pcs."""
    if not gamma_pcs > 0:
        raise ValueError(f"gamma_pcs must be positive, got {gamma_pcs}")
    objective = PcsObjective(problem, xi_star, theta_mode)
    step, hess_step = linear_steps(gamma_pcs)
    return finite_difference_derivatives(objective.value, gamma_pcs, step, hess_step)


# ============================================================================
# TRUNCATED NEWTON
# ============================================================================

def forcing_term(grad: float) -> float:
    """nu_k = min(0.5, sqrt(|grad|))."""
    return min(NewtonConfig.FORCING_CAP, math.sqrt(abs(grad)))


def newton_direction(grad: float, hess: float, fallback: float) -> Tuple[float, bool]:
    """
    Ascent direction grad/|hess| when it passes the inexact-Newton residual
    test |hess*d + grad| <= nu*|grad|, else `fallback` signed like grad

    Returns:
        (direction, newton_accepted)
    """
    if hess != 0:
        candidate = grad / abs(hess)
        if abs(hess * candidate + grad) <= forcing_term(grad) * abs(grad):
            return candidate, True
    return math.copysign(fallback, grad), False


class _Coordinates:
    """Maps the search variable to Gamma and back, with the objective in matching units."""

    def __init__(self, objective: PcsObjective, search_space: SearchSpace):
        self.objective = objective
        self.log_space = search_space is SearchSpace.LOG

    def to_gamma(self, u: float) -> float:
        return math.exp(u) if self.log_space else u

    def from_gamma(self, gamma_pcs: float) -> float:
        return math.log(gamma_pcs) if self.log_space else gamma_pcs

    def f(self, u: float) -> float:
        if self.log_space:
            return self.objective.log_value(math.exp(u))
        return self.objective.value(u)

    def derivatives(self, u: float) -> Tuple[float, float]:
        if self.log_space:
            return finite_difference_derivatives(self.f, u, NewtonConfig.FD_LOG_STEP, NewtonConfig.FD_LOG_HESS_STEP)
        step, hess_step = linear_steps(u)
        return finite_difference_derivatives(self.f, u, step, hess_step)

    def max_step(self, u: float) -> float:
        return NewtonConfig.MAX_LOG_STEP if self.log_space else u

    def stationary(self, u: float, value: float, grad: float) -> bool:
        if self.log_space:
            return abs(grad) <= NewtonConfig.GRAD_TOL
        # relative stationarity in Gamma; an underflowed plateau has grad == 0
        return abs(grad) * u <= NewtonConfig.GRAD_TOL * abs(value)


def newton_pcs(
    xi_star: np.ndarray,
    problem: AssociationProblem,
    gamma0: Optional[float] = None,
    search_space: SearchSpace = SearchSpace.LOG,
    theta_mode: ThetaMode = ThetaMode.NUMERIC,
    max_iter: int = NewtonConfig.MAX_ITER,
) -> NewtonState:
    """
    Truncated Newton ascent on the threshold objective

    Each iteration takes direction grad/|hess| (or a capped gradient step when
    the curvature is not negative), backtracks from unit step with Armijo
    constant 1e-4 and halving, and clamps the iterate to [GAMMA_MIN, bound].
    Stops on a stationary gradient, on reaching the bound with an outward
    gradient, when backtracking fails, or at the iteration cap (flagged).

    The inexact-Newton residual test |hess*d + grad| <= nu*|grad| only
    decides between the Newton and the fallback direction. Termination is a
    stationarity test against NewtonConfig.GRAD_TOL, absolute on the gradient
    in LOG coordinates and relative to the objective in LINEAR ones, never the
    residual.

    Args:
        xi_star: Fixed association (n_ap, n_sta)
        problem: Instance; problem.cfg.pcs is the fixed threshold
        gamma0: Start, default min(problem.cfg.pcs, bound)
        search_space: LOG (default) or LINEAR coordinates
        theta_mode: Contention model
        max_iter: Iteration cap

    Returns:
        NewtonState at the best accepted iterate
    """
    objective = PcsObjective(problem, xi_star, theta_mode)
    bound = objective.bound()
    if not bound > 0:
        raise ValueError("association leaves no feasible PCS threshold (bound is 0)")
    lower = min(NewtonConfig.GAMMA_MIN, bound)
    start = min(gamma0 if gamma0 is not None else problem.cfg.pcs, bound)
    start = max(start, lower)

    coords = _Coordinates(objective, search_space)
    u, u_low, u_high = coords.from_gamma(start), coords.from_gamma(lower), coords.from_gamma(bound)
    value = coords.f(u)
    trace = [value]
    state = NewtonState(
        gamma_pcs=start,
        bound=bound,
        objective=objective.value(start),
        log_objective=objective.log_value(start),
    )
    converged = hit_bound = False

    for k in range(max_iter):
        gamma_pcs = coords.to_gamma(u)
        grad, hess = coords.derivatives(u)
        forcing = forcing_term(grad)
        at_bound = abs(gamma_pcs - bound) <= NewtonConfig.BOUND_TOL or u >= u_high
        at_floor = u <= u_low

        if coords.stationary(u, value, grad):
            converged = True
        elif at_bound and grad > 0:
            converged = hit_bound = True
        elif at_floor and grad < 0:
            converged = True
        if converged:
            state = state.model_copy(update={"grad": grad, "hess": hess, "forcing": forcing, "iter": k})
            break

        direction, newton_accepted = newton_direction(grad, hess, coords.max_step(u))
        direction = max(-coords.max_step(u), min(direction, coords.max_step(u)))

        step = 1.0
        accepted = False
        while step >= NewtonConfig.MIN_STEP:
            candidate = min(max(u + step * direction, u_low), u_high)
            candidate_value = coords.f(candidate)
            sufficient = value + NewtonConfig.ARMIJO * grad * (candidate - u)
            if math.isfinite(candidate_value) and candidate_value >= sufficient:
                accepted = candidate != u
                break
            step *= NewtonConfig.BACKTRACK_SHRINK

        stage_logger.debug(
            f"iter {k}: Gamma={gamma_pcs:.4e} f={value:.6e} grad={grad:.3e} hess={hess:.3e} "
            f"newton={newton_accepted} step={step:.3g}"
        )
        if not accepted:
            stage_logger.info(f"backtracking stalled at Gamma={gamma_pcs:.4e}")
            state = state.model_copy(update={"grad": grad, "hess": hess, "forcing": forcing, "iter": k})
            converged = True
            break

        u, value = candidate, candidate_value
        trace.append(value)
        gamma_pcs = coords.to_gamma(u)
        state = state.model_copy(
            update={
                "gamma_pcs": gamma_pcs,
                "grad": grad,
                "hess": hess,
                "direction": direction,
                "step": step,
                "forcing": forcing,
                "iter": k + 1,
            }
        )
        if abs(gamma_pcs - bound) <= NewtonConfig.BOUND_TOL and grad > 0:
            converged = hit_bound = True
            break

    hit_cap = not converged
    if hit_cap:
        stage_logger.warning(f"iteration cap {max_iter} reached at Gamma={state.gamma_pcs:.4e}")

    final_gamma = min(max(state.gamma_pcs, lower), bound)
    return state.model_copy(
        update={
            "gamma_pcs": final_gamma,
            "objective": objective.value(final_gamma),
            "log_objective": objective.log_value(final_gamma),
            "converged": converged,
            "hit_bound": hit_bound,
            "hit_cap": hit_cap,
            "trace": tuple(trace),
        }
    )


def grid_search_pcs(
    xi_star: np.ndarray,
    problem: AssociationProblem,
    n_points: int = NewtonConfig.GRID_POINTS,
    theta_mode: ThetaMode = ThetaMode.NUMERIC,
) -> Tuple[float, float]:
    """
    Best threshold on a log-spaced grid over [GAMMA_MIN, bound]

    Returns:
        (gamma, log objective) of the best grid point
    """
    objective = PcsObjective(problem, xi_star, theta_mode)
    bound = objective.bound()
    grid = np.geomspace(min(NewtonConfig.GAMMA_MIN, bound), bound, n_points)
    values = np.array([objective.log_value(g) for g in grid])
    best = int(np.argmax(values))
    return float(grid[best]), float(values[best])
