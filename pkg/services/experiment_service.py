"""
Experiment Service

Monte-Carlo harness: one realization per (config, scheme, seed), realization
parallel execution over a process pool, and order-independent aggregation of
CAP, STP and SDT into CSV-ready rows.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config.constants import HarnessConfig
from config.settings import get_settings
from models.enums import MetricKind, Scheme, SweepParameter, ThetaMode
from schemas.experiment_schema import (
    ExperimentResult,
    ExperimentRow,
    RealizationRecord,
    Scenario,
    SchemeGain,
)
from schemas.network_config_schema import NetworkConfig
from schemas.optimizer_schema import AssociationProblem
from schemas.point_set_schema import PointSet
from services.association_service import build_problem, pair_log_rates, sample_instance, solve_association
from services.config_service import apply_config_values, validate
from services.contention_service import ContentionService
from services.japo_service import japo
from services.throughput_service import ThroughputService, rate_factor, relative_gain
from utils.exceptions import ExperimentFailedError
from utils.logging_utils import get_stage_logger, log_realization_error
from utils.seeding import derive_seed

logger = logging.getLogger(__name__)
stage_logger = get_stage_logger(__name__, "harness")

# sweep parameter -> config-file key (values in config units)
SWEEP_KEYS: Dict[SweepParameter, str] = {
    SweepParameter.LAMBDA_S: "lambda_s",
    SweepParameter.GAMMA: "gamma_db",
    SweepParameter.PCS: "pcs_dbm",
    SweepParameter.ANTENNAS: "antennas",
}


# ============================================================================
# ONE REALIZATION
# ============================================================================

def empirical_config(cfg: NetworkConfig, aps: PointSet, stas: PointSet) -> NetworkConfig:
    """cfg with lambda_s and lambda_a replaced by the realization's counts per unit area."""
    area = cfg.window_area
    return cfg.with_overrides(lambda_s=stas.count / area, lambda_a=aps.count / area)


def access_fraction(cfg: NetworkConfig, contention: ContentionService, half_duplex: bool) -> float:
    """FD access probability, or the fraction of HD nodes granted access."""
    if not half_duplex:
        return contention.fd_access_probability(cfg)
    lt_s, lt_a = contention.hd_active_densities(cfg)
    return (lt_s + lt_a) / cfg.lambda_fd


def mean_pair_stp(
    problem: AssociationProblem,
    xi: np.ndarray,
    cfg: NetworkConfig,
    contention: ContentionService,
) -> float:
    """
    Mean over STAs of the STP of their associated pairs at cfg.pcs

    HD pairs report the density-weighted mean of the UL and DL STPs.
    """
    log_rates = pair_log_rates(cfg, problem.path_loss, contention, problem.half_duplex)
    if problem.half_duplex:
        lt_s, lt_a = contention.hd_active_densities(cfg)
        scale = math.log(0.5 * (lt_s + lt_a))
    else:
        scale = math.log(contention.fd_active_density(cfg))
    log_stp = np.minimum(log_rates - scale - math.log(rate_factor(cfg)), 0.0)
    return float(np.sum(xi * np.exp(log_stp))) / problem.n_sta


def run_realization(
    cfg: NetworkConfig,
    scheme: Scheme,
    seed: int,
    index: int = 0,
    theta_mode: ThetaMode = ThetaMode.NUMERIC,
) -> RealizationRecord:
    """
    Evaluate one scheme on one sampled network

    The AP/STA instance comes from `seed`; densities of the analytic models are
    the realization's empirical densities.

    Args:
        cfg: Validated configuration of the sweep point
        scheme: Scheme to evaluate
        seed: Realization seed
        index: Realization index recorded on the result
        theta_mode: Contention model

    Returns:
        RealizationRecord with CAP, STP, SDT and the threshold used

    Raises:
        DenseWlanError: Any solver or sampling failure, unchanged
    """
    aps, stas = sample_instance(cfg, seed)
    cfg_emp = empirical_config(cfg, aps, stas)
    contention = ContentionService(theta_mode)

    if scheme is Scheme.SSF:
        report = ThroughputService(theta_mode).ssf_mean_rate(cfg_emp)
        cap, stp, sdt, gamma_pcs = contention.fd_access_probability(cfg_emp), report.stp, report.sdt, cfg.pcs

    elif scheme is Scheme.FD_ASSOC_FIXED_PCS:
        problem = build_problem(cfg_emp, aps, stas, theta_mode)
        association = solve_association(problem)
        cap = contention.fd_access_probability(cfg_emp)
        stp = mean_pair_stp(problem, association.xi, cfg_emp, contention)
        sdt, gamma_pcs = association.objective, cfg.pcs

    else:
        half_duplex = scheme is Scheme.HD_JAPO
        problem = build_problem(cfg_emp, aps, stas, theta_mode, half_duplex)
        result = japo(cfg_emp, problem, theta_mode, half_duplex=half_duplex)
        cfg_star = cfg_emp.with_overrides(pcs=result.gamma_star)
        cap = access_fraction(cfg_star, contention, half_duplex)
        stp = mean_pair_stp(problem, result.xi_star, cfg_star, contention)
        sdt, gamma_pcs = result.sdt_star, result.gamma_star

    return RealizationRecord(
        index=index,
        seed=seed,
        scheme=scheme,
        cap=float(cap),
        stp=float(stp),
        sdt=float(sdt),
        gamma_pcs=float(gamma_pcs),
    )


# ============================================================================
# EXECUTION
# ============================================================================

Task = Tuple[int, NetworkConfig, Scheme, Tuple[Tuple[int, int], ...], ThetaMode]


def _run_chunk(task: Task) -> Tuple[int, List[RealizationRecord]]:
    point, cfg, scheme, seeds, theta_mode = task
    records = []
    for index, seed in seeds:
        try:
            records.append(run_realization(cfg, scheme, seed, index, theta_mode))
        except Exception as e:
            error_id = log_realization_error(logger, scheme.value, index, seed, e)
            records.append(
                RealizationRecord(
                    index=index,
                    seed=seed,
                    scheme=scheme,
                    cap=math.nan,
                    stp=math.nan,
                    sdt=math.nan,
                    gamma_pcs=cfg.pcs,
                    error_id=error_id,
                )
            )
    return point, records


def realization_seeds(scenario: Scenario) -> List[int]:
    """Seed of every realization index; shared by all sweep points and schemes."""
    return [derive_seed(scenario.base_seed, k) for k in range(scenario.n_realizations)]


def scenario_points(scenario: Scenario) -> List[Tuple[Optional[str], float, NetworkConfig]]:
    """(variant label, sweep value, validated config) for every sweep point."""
    key = SWEEP_KEYS[scenario.sweep_param]
    points = []
    for label, overrides in scenario.variant_items():
        for value in scenario.sweep_values:
            cfg = validate(apply_config_values(scenario.base, {**overrides, key: value}))
            points.append((label, float(value), cfg))
    return points


def _chunks(seeds: Sequence[Tuple[int, int]], size: int) -> List[Tuple[Tuple[int, int], ...]]:
    return [tuple(seeds[i:i + size]) for i in range(0, len(seeds), size)]


def execute_tasks(tasks: List[Task], threads: int) -> List[Tuple[int, List[RealizationRecord]]]:
    """Run tasks in-process for one thread, otherwise over a process pool."""
    if threads <= 1 or len(tasks) <= 1:
        return [_run_chunk(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_run_chunk, tasks))


# ============================================================================
# AGGREGATION
# ============================================================================

def aggregate(records: Sequence[RealizationRecord], kind: MetricKind) -> Tuple[float, Optional[float], int]:
    """
    Mean, standard error and count of one metric over successful records

    Sums are exact (math.fsum), so the result does not depend on record order.
    The standard error is the sample standard deviation over sqrt(n), None for n < 2.
    """
    values = [r.metric(kind) for r in records if not r.failed]
    n = len(values)
    if n == 0:
        return math.nan, None, 0
    mean = math.fsum(values) / n
    if n < 2:
        return mean, None, n
    variance = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(variance / n), n


def scheme_label(scheme: Scheme, variant: Optional[str]) -> str:
    return scheme.value if variant is None else f"{scheme.value}|{variant}"


def run_experiment(
    scenario: Scenario,
    theta_mode: ThetaMode = ThetaMode.NUMERIC,
    threads: Optional[int] = None,
) -> ExperimentResult:
    """
    Run every (sweep point, scheme) of a scenario over n_realizations seeds

    Realization k uses derive_seed(base_seed, k) at every sweep point and for
    every scheme. Failed realizations are logged with an error id and excluded
    from the means.

    Args:
        scenario: Scenario to run
        theta_mode: Contention model
        threads: Worker processes; defaults to DENSEWLAN_THREADS

    Returns:
        ExperimentResult with one row per (variant, sweep value, scheme, metric)

    Raises:
        ExperimentFailedError: If more than 1% of the realizations failed
    """
    threads = get_settings().threads if threads is None else max(1, int(threads))
    points = scenario_points(scenario)
    seeds = list(enumerate(realization_seeds(scenario)))
    chunk_size = max(1, math.ceil(len(seeds) / (threads * 4)))

    tasks: List[Task] = []
    for point, (_, _, cfg) in enumerate(points):
        for scheme in scenario.schemes:
            for chunk in _chunks(seeds, chunk_size):
                tasks.append((point, cfg, scheme, chunk, theta_mode))

    stage_logger.info(
        f"scenario '{scenario.name}': {len(points)} points x {len(scenario.schemes)} schemes x "
        f"{scenario.n_realizations} realizations on {threads} worker(s), theta={theta_mode.value}"
    )

    grouped: Dict[Tuple[int, Scheme], List[RealizationRecord]] = {}
    for point, records in execute_tasks(tasks, threads):
        for record in records:
            grouped.setdefault((point, record.scheme), []).append(record)

    all_records = [r for records in grouped.values() for r in records]
    error_ids = tuple(r.error_id for r in all_records if r.failed)
    total = len(all_records)
    if error_ids and len(error_ids) > HarnessConfig.MAX_FAILED_FRACTION * total:
        raise ExperimentFailedError(scenario.name, len(error_ids), total, list(error_ids))
    if error_ids:
        stage_logger.warning(f"{len(error_ids)} of {total} realizations failed and were excluded")

    rows = []
    for point, (label, value, _) in enumerate(points):
        for scheme in scenario.schemes:
            records = sorted(grouped.get((point, scheme), []), key=lambda r: r.index)
            for kind in scenario.metrics:
                mean, stderr, n = aggregate(records, kind)
                rows.append(
                    ExperimentRow(
                        sweep_param=scenario.sweep_param.value,
                        sweep_value=value,
                        scheme=scheme_label(scheme, label),
                        metric=kind,
                        mean=mean,
                        stderr=stderr,
                        n=n,
                    )
                )

    return ExperimentResult(
        scenario=scenario.name,
        theta_mode=theta_mode,
        rows=tuple(rows),
        n_realizations=scenario.n_realizations,
        base_seed=scenario.base_seed,
        failures=len(error_ids),
        error_ids=error_ids,
    )


def summarize_gains(result: ExperimentResult, metric: MetricKind = MetricKind.SDT) -> List[SchemeGain]:
    """
    JAPO gains over every other scheme at the largest sweep value, per variant

    Returns:
        One SchemeGain per (variant, baseline); empty without JAPO rows
    """
    rows = [r for r in result.rows if r.metric == metric]
    if not rows:
        return []
    top = max(r.sweep_value for r in rows)
    by_label: Dict[Optional[str], Dict[Scheme, float]] = {}
    for row in rows:
        if row.sweep_value != top:
            continue
        name, _, variant = row.scheme.partition("|")
        by_label.setdefault(variant or None, {})[Scheme(name)] = row.mean

    gains = []
    for variant, means in by_label.items():
        if Scheme.JAPO not in means:
            continue
        for baseline, value in means.items():
            if baseline is Scheme.JAPO:
                continue
            gains.append(
                SchemeGain(
                    variant=variant,
                    sweep_value=top,
                    baseline=baseline,
                    japo=means[Scheme.JAPO],
                    baseline_value=value,
                    gain_pct=relative_gain(means[Scheme.JAPO], value),
                )
            )
    return gains
