"""
JAPO Service

Joint association and PCS threshold optimization: dual-based association at
the configured threshold, then a truncated Newton search for the threshold
given that association.
"""
import logging
import time
from typing import Optional

from models.enums import SearchSpace, ThetaMode
from schemas.network_config_schema import NetworkConfig
from schemas.optimizer_schema import AssociationProblem, JapoResult
from services.association_service import build_problem, sample_instance, solve_association
from services.pcs_threshold_service import PcsObjective, newton_pcs
from utils.exceptions import SolverStageError
from utils.logging_utils import get_stage_logger

logger = logging.getLogger(__name__)
stage_logger = get_stage_logger(__name__, "japo")


def japo(
    cfg: NetworkConfig,
    problem: Optional[AssociationProblem] = None,
    theta_mode: ThetaMode = ThetaMode.NUMERIC,
    search_space: SearchSpace = SearchSpace.LOG,
    half_duplex: bool = False,
) -> JapoResult:
    """
    Run association then PCS threshold selection

    Args:
        cfg: Validated configuration; cfg.pcs is the fixed threshold of the
            association stage and the Newton warm start
        problem: Instance to solve; sampled from cfg.seed when omitted
        theta_mode: Contention model
        search_space: Newton coordinates
        half_duplex: Use HD pair rates (UL/DL time-shared) instead of FD

    Returns:
        JapoResult with both objective values and per-stage timings

    Raises:
        SolverStageError: Wrapping any failure, labelled with its stage
    """
    stages = []

    started = time.perf_counter()
    try:
        if problem is None:
            aps, stas = sample_instance(cfg, cfg.seed)
            problem = build_problem(cfg, aps, stas, theta_mode, half_duplex)
        association = solve_association(problem)
    except Exception as e:
        raise SolverStageError("association", e) from e
    stages.append(f"association:{time.perf_counter() - started:.6f}s")

    started = time.perf_counter()
    try:
        newton = newton_pcs(association.xi, problem, search_space=search_space, theta_mode=theta_mode)
        objective = PcsObjective(problem, association.xi, theta_mode)
        fixed_gamma = problem.cfg.pcs
        log_sdt_fixed = objective.log_value(fixed_gamma)
    except Exception as e:
        raise SolverStageError("pcs-newton", e) from e
    stages.append(f"pcs-newton:{time.perf_counter() - started:.6f}s")

    stage_logger.info(
        f"{problem.n_ap} APs x {problem.n_sta} STAs: Gamma*={newton.gamma_pcs:.4e} mW "
        f"ln SDT*={newton.log_objective:.6g} (fixed {log_sdt_fixed:.6g}), "
        f"association converged={association.converged}, newton converged={newton.converged}"
    )
    return JapoResult(
        xi_star=association.xi,
        gamma_star=newton.gamma_pcs,
        sdt_star=newton.objective,
        sdt_fixed=objective.value(fixed_gamma),
        log_sdt_star=newton.log_objective,
        log_sdt_fixed=log_sdt_fixed,
        association=association,
        newton=newton,
        stages=stages,
    )
