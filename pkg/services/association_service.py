"""
Association Service

Relaxed AP association through the Lagrangian dual: per-STA argmax of the
pairwise Lagrangian contribution, projected subgradient updates of the
multipliers, final rounding, and an exhaustive oracle for small instances.
"""
import itertools
import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy.special import logsumexp

from config.constants import AssociationConfig, ErrorMessages
from models.enums import Direction, ThetaMode
from schemas.network_config_schema import NetworkConfig
from schemas.optimizer_schema import AssociationProblem, AssociationState
from schemas.point_set_schema import PointSet
from services.contention_service import ContentionService
from services.geometry_service import model_mean_nn, pairwise_distances, sample_ppp_from
from services.link_metrics_service import log_stp_direction_pairs, log_stp_fd_pairs
from services.throughput_service import rate_factor
from utils.exceptions import EmptyRealizationError
from utils.logging_utils import get_stage_logger
from utils.seeding import spawn_streams

logger = logging.getLogger(__name__)
stage_logger = get_stage_logger(__name__, "association")

_MIN_DISTANCE = 1e-12


# ============================================================================
# INSTANCES
# ============================================================================

def sample_instance(cfg: NetworkConfig, seed: int) -> Tuple[PointSet, PointSet]:
    """
    Sample (APs, STAs) in cfg.window from independent streams of `seed`

    Raises:
        EmptyRealizationError: If either set is empty
    """
    ap_rng, sta_rng = spawn_streams(seed, 2)
    aps = sample_ppp_from(ap_rng, cfg.lambda_a, cfg.window, seed=seed)
    stas = sample_ppp_from(sta_rng, cfg.lambda_s, cfg.window, seed=seed)
    if aps.count == 0 or stas.count == 0:
        raise EmptyRealizationError(ErrorMessages.EMPTY_REALIZATION.format(n_ap=aps.count, n_sta=stas.count))
    return aps, stas


def pair_path_losses(aps: PointSet, stas: PointSet, alpha: float) -> np.ndarray:
    """(n_ap, n_sta) matrix of d^-alpha."""
    distances = np.maximum(pairwise_distances(aps.points, stas.points), _MIN_DISTANCE)
    return distances ** (-alpha)


def pair_log_rates(
    cfg: NetworkConfig,
    path_loss: np.ndarray,
    contention: ContentionService,
    half_duplex: bool = False,
) -> np.ndarray:
    """
    ln of the per-pair rates at cfg.pcs

    FD: lambda~_FD * ln(1 + gamma) * P_FD(xi=1, l_ij).
    HD: half the sum of the UL and DL HD rates, each with its own active density.
    """
    lt_s, lt_a = contention.hd_active_densities(cfg)
    log_rate = math.log(rate_factor(cfg))
    if not half_duplex:
        log_stp = np.minimum(log_stp_fd_pairs(cfg, 1.0, path_loss, lt_s, lt_a), 0.0)
        return math.log(contention.fd_active_density(cfg)) + log_rate + log_stp

    log_ul = math.log(lt_s) + log_stp_direction_pairs(cfg, Direction.UL, 1.0, path_loss, lt_s, lt_a)
    log_dl = math.log(lt_a) + log_stp_direction_pairs(cfg, Direction.DL, 1.0, path_loss, lt_s, lt_a)
    return np.logaddexp(log_ul, log_dl) + math.log(0.5) + log_rate


def build_problem(
    cfg: NetworkConfig,
    aps: PointSet,
    stas: PointSet,
    theta_mode: ThetaMode = ThetaMode.NUMERIC,
    half_duplex: bool = False,
) -> AssociationProblem:
    """Assemble the pair path losses and rates of an instance."""
    path_loss = pair_path_losses(aps, stas, cfg.alpha)
    return AssociationProblem(
        cfg=cfg,
        ap_points=aps.points,
        sta_points=stas.points,
        path_loss=path_loss,
        log_rates=pair_log_rates(cfg, path_loss, ContentionService(theta_mode), half_duplex),
        half_duplex=half_duplex,
    )


# ============================================================================
# LAGRANGIAN
# ============================================================================

def constraint_coefficient(cfg: NetworkConfig) -> float:
    """c in Gamma * c <= xi, c = ((1 + P_t gamma^(1/alpha)) / (lambda_FD pi))^alpha."""
    return ((1.0 + cfg.p_tx * cfg.gamma ** (1.0 / cfg.alpha)) * model_mean_nn(cfg.lambda_fd)) ** cfg.alpha


def association_objective(xi: np.ndarray, problem: AssociationProblem) -> float:
    """Mean over STAs of sum_i xi[i, j] * rate[i, j]."""
    return float(np.sum(xi * problem.rates)) / problem.n_sta


def log_association_objective(xi: np.ndarray, log_rates: np.ndarray) -> float:
    """ln of association_objective computed from log rates; -inf if xi is all zero."""
    if not np.any(xi > 0):
        return -math.inf
    return float(logsumexp(log_rates, b=xi)) - math.log(xi.shape[1])


def constraint_subgradients(xi: np.ndarray, problem: AssociationProblem) -> Tuple[float, float]:
    """(sum_j (sum_i xi_ij - 1), sum_ij (Gamma c - xi_ij))."""
    association_gap = float(np.sum(xi.sum(axis=0) - 1.0))
    threshold_gap = float(np.sum(problem.cfg.pcs * constraint_coefficient(problem.cfg) - xi))
    return association_gap, threshold_gap


def lagrangian(xi: np.ndarray, delta: float, eta: float, problem: AssociationProblem) -> float:
    """
    objective + delta * sum_j (sum_i xi_ij - 1) + eta * sum_ij (Gamma c - xi_ij)

    Args:
        xi: (n_ap, n_sta) weights in [0, 1]
        delta: Association-constraint multiplier (>= 0)
        eta: PCS-constraint multiplier (>= 0)
        problem: Instance with rates and configuration

    Returns:
        Lagrangian value
    """
    association_gap, threshold_gap = constraint_subgradients(xi, problem)
    return association_objective(xi, problem) + delta * association_gap + eta * threshold_gap


# ============================================================================
# DUAL ITERATION
# ============================================================================

def initial_state(problem: AssociationProblem, step0: float = AssociationConfig.STEP0) -> AssociationState:
    """Uniform relaxed association 1/n_ap with zero multipliers."""
    xi = np.full((problem.n_ap, problem.n_sta), 1.0 / problem.n_ap)
    return AssociationState(xi=xi, step0=step0, objective=association_objective(xi, problem))


def association_argmax(state: AssociationState, problem: AssociationProblem) -> np.ndarray:
    """
    Maximizer of the Lagrangian over relaxed xi with column sums <= 1

    The coefficient of xi_ij is rate_ij / n_sta + delta - eta. Within a column
    the multipliers are a common shift, so the best AP is the largest rate
    (lowest index on ties). A column keeps its unit mass on that AP only when
    the coefficient is positive; otherwise the column is left empty.
    """
    best = np.argmax(problem.log_rates, axis=0)
    columns = np.arange(problem.n_sta)
    log_best = problem.log_rates[best, columns] - math.log(problem.n_sta)
    shift = state.delta - state.eta
    if shift > 0:
        positive = np.ones(problem.n_sta, dtype=bool)
    elif shift == 0:
        positive = np.isfinite(log_best)
    else:
        # rate / n_sta > eta - delta, compared in logs where rates underflow
        positive = log_best > math.log(-shift)
    xi = np.zeros_like(problem.log_rates)
    xi[best[positive], columns[positive]] = 1.0
    return xi


def step_size(step0: float, k: int) -> float:
    """phi(k) = step0 / sqrt(k + 1)."""
    return step0 / math.sqrt(k + 1)


def update_multipliers(state: AssociationState, problem: AssociationProblem) -> Tuple[float, float]:
    """
    Projected subgradient step at iteration state.iter

    delta <- [delta - phi(k) * sum_j (sum_i xi_ij - 1)]^+
    eta   <- [eta - phi(k) * sum_ij (Gamma c - xi_ij)]^+
    """
    phi = step_size(state.step0, state.iter)
    association_gap, threshold_gap = constraint_subgradients(state.xi, problem)
    return max(state.delta - phi * association_gap, 0.0), max(state.eta - phi * threshold_gap, 0.0)


def round_association(xi: np.ndarray) -> np.ndarray:
    """Binary association with one AP per STA (argmax, lowest index on ties)."""
    rounded = np.zeros_like(xi)
    rounded[np.argmax(xi, axis=0), np.arange(xi.shape[1])] = 1.0
    return rounded


def complete_association(xi: np.ndarray, log_rates: np.ndarray) -> np.ndarray:
    """
    Per-STA normalization of a relaxed association

    Columns with mass are scaled to sum 1; empty columns go to the AP with the
    largest rate.
    """
    totals = xi.sum(axis=0)
    completed = np.divide(xi, totals, out=np.zeros_like(xi), where=totals > 0)
    empty = np.flatnonzero(totals <= 0)
    completed[np.argmax(log_rates[:, empty], axis=0), empty] = 1.0
    return completed


def solve_association(
    problem: AssociationProblem,
    tol: float = AssociationConfig.TOL,
    max_iter: int = AssociationConfig.MAX_ITER,
    step0: float = AssociationConfig.STEP0,
) -> AssociationState:
    """
    Dual subgradient iteration until the association stops changing

    The multipliers decide which STA columns keep mass; the rate utility of
    each iterate is taken after complete_association. Converged iff
    max |xi_{k+1} - xi_k| < tol or that utility improves by less than tol
    across an iteration. The returned xi is completed and rounded to one AP
    per STA. Hitting max_iter returns the last state with
    converged=False.

    Args:
        problem: Instance to solve
        tol: Convergence tolerance
        max_iter: Iteration cap
        step0: Base of the diminishing step phi(k)

    Returns:
        AssociationState with objective and multiplier traces
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")

    state = initial_state(problem, step0)
    trace = [state.objective]
    multipliers = [(state.delta, state.eta)]
    converged = False

    for k in range(max_iter):
        xi_next = association_argmax(state, problem)
        objective = association_objective(complete_association(xi_next, problem.log_rates), problem)
        change = float(np.max(np.abs(xi_next - state.xi)))
        state = state.model_copy(update={"xi": xi_next, "iter": k, "objective": objective})
        delta, eta = update_multipliers(state, problem)
        state = state.model_copy(update={"delta": delta, "eta": eta, "iter": k + 1})
        trace.append(objective)
        multipliers.append((delta, eta))
        stage_logger.debug(
            f"iter {k + 1}: objective={objective:.6e} change={change:.3g} delta={delta:.3g} eta={eta:.3g}"
        )
        stalled = k > 0 and abs(objective - trace[-2]) < tol * max(1.0, abs(objective))
        if change < tol or stalled:
            converged = True
            break

    if not converged:
        stage_logger.warning(f"no convergence after {max_iter} iterations; returning last state")

    xi_final = round_association(complete_association(state.xi, problem.log_rates))
    return state.model_copy(
        update={
            "xi": xi_final,
            "objective": association_objective(xi_final, problem),
            "converged": converged,
            "trace": tuple(trace),
            "multiplier_trace": tuple(multipliers),
        }
    )


def ssf_association(problem: AssociationProblem) -> np.ndarray:
    """Nearest-AP (strongest received signal) association."""
    return round_association(problem.path_loss)


# ============================================================================
# EXHAUSTIVE ORACLE
# ============================================================================

def brute_force_association(
    problem: AssociationProblem,
    delta: float = 0.0,
    eta: float = 0.0,
    max_assignments: int = 100_000,
) -> Tuple[np.ndarray, float]:
    """
    Best binary one-AP-per-STA association by enumeration of n_ap^n_sta assignments

    Returns:
        (xi, Lagrangian value at the given multipliers); ties keep the first
        assignment in lexicographic AP order

    Raises:
        ValueError: If the enumeration exceeds max_assignments
    """
    total = problem.n_ap ** problem.n_sta
    if total > max_assignments:
        raise ValueError(f"{total} assignments exceed the enumeration limit {max_assignments}")

    best_xi: Optional[np.ndarray] = None
    best_value = -math.inf
    columns = np.arange(problem.n_sta)
    for assignment in itertools.product(range(problem.n_ap), repeat=problem.n_sta):
        xi = np.zeros((problem.n_ap, problem.n_sta))
        xi[list(assignment), columns] = 1.0
        value = lagrangian(xi, delta, eta, problem)
        if value > best_value:
            best_xi, best_value = xi, value
    return best_xi, best_value
