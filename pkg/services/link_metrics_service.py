"""
Link Metrics Service

Self-interference statistics, SINR of one fading realization, and the
successful transmission probability (STP): the closed-form FD expression, the
per-direction forms it is built from, and a Monte-Carlo oracle.

Probability formulas use unit transmit power; cfg.p_tx only enters the PCS
threshold constraint.
"""
import logging
import math
from typing import Optional, Tuple

import numpy as np

from models.enums import Direction
from schemas.contention_schema import ThinningInput
from schemas.link_schema import LinkRealization, SiGammaParams, StpEstimate, StpEvaluation
from schemas.network_config_schema import NetworkConfig
from schemas.point_set_schema import PointSet
from services.contention_service import simulate_matern_thinning
from services.geometry_service import mean_path_loss, model_mean_nn, sample_ppp_from
from utils.seeding import derive_seed, spawn_streams

logger = logging.getLogger(__name__)

_ARCTAN_SERIES_THRESHOLD = 1e-8


# ============================================================================
# SELF-INTERFERENCE
# ============================================================================

def array_factor(m_tx: int, n_rx: int) -> float:
    """Xi = (4MN - (N+1)(M+1)) / ((N+1)(M+1))."""
    denominator = (n_rx + 1) * (m_tx + 1)
    return (4 * m_tx * n_rx - denominator) / denominator


def si_gamma_params(k_factor: float, si_atten: float, m_tx: int, n_rx: int) -> SiGammaParams:
    """
    Gamma law of the residual SI power

    mu = sqrt(K*Omega/(K+1)), psi^2 = sqrt(Omega/(K+1)); the shape and scale
    match the mean mu^2 + psi^2 and the array-dependent second moment.

    Args:
        k_factor: Rician K of the SI channel (>= 0)
        si_atten: SI attenuation Omega, linear (> 0)
        m_tx: Transmit antennas M
        n_rx: Receive antennas N

    Returns:
        SiGammaParams with shape*scale = mu^2 + psi^2
    """
    mu = math.sqrt(k_factor * si_atten / (k_factor + 1.0))
    psi2 = math.sqrt(si_atten / (k_factor + 1.0))
    xi_factor = array_factor(m_tx, n_rx)
    mean = mu * mu + psi2
    second = xi_factor * mu ** 4 + 2.0 * mu * mu * psi2 + psi2 * psi2
    return SiGammaParams(
        mu=mu,
        psi2=psi2,
        xi_factor=xi_factor,
        shape=mean * mean / second,
        scale=second / mean,
    )


def config_si_params(cfg: NetworkConfig) -> SiGammaParams:
    return si_gamma_params(cfg.k_factor, cfg.si_atten, cfg.m_tx, cfg.n_rx)


# ============================================================================
# SAMPLERS
# ============================================================================

def sample_desired_gain(rng: np.random.Generator, m_tx: int, size=None):
    """
    Chi-square 2M-DoF power with unit-variance entries, i.e. Gamma(M, 1)

    Drawn as the row sum of an (M, ...) exponential block so that, for a fixed
    generator state, adding antennas never lowers the draw.
    """
    shape = (m_tx,) if size is None else (m_tx,) + tuple(np.atleast_1d(size))
    block = rng.standard_exponential(shape)
    total = block.sum(axis=0)
    return float(total) if size is None else total


def sample_si_power(rng: np.random.Generator, params: SiGammaParams, size=None):
    """Gamma(kappa, rho) residual SI power."""
    return rng.gamma(params.shape, params.scale, size)


def sample_interference_gains(rng: np.random.Generator, count: int) -> np.ndarray:
    """Unit-mean exponential gains, one per interferer."""
    return rng.standard_exponential(count)


# ============================================================================
# SINR
# ============================================================================

def _sinr(realization: LinkRealization, xi: float) -> float:
    signal = xi * realization.desired_path_loss * realization.desired_gain
    if signal == 0:
        return 0.0
    denominator = realization.noise + realization.si_power + realization.interference
    if denominator == 0:
        return math.inf
    return signal / denominator


def sinr_uplink(realization: LinkRealization, xi: float) -> float:
    """SINR at the AP: xi*l*g / (noise + SI + sum l_k g_k), SI path gain 1."""
    return _sinr(realization, xi)


def sinr_downlink(realization: LinkRealization, xi: float) -> float:
    """SINR at the STA; same form as the uplink with the AP interferer set."""
    return _sinr(realization, xi)


# ============================================================================
# ANALYTIC STP
# ============================================================================

def _arctan_term(dist, q2):
    """q2 * arctan(dist / q2), evaluated as dist * arctan(x)/x with x = dist/q2."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        x = np.asarray(dist, dtype=float) / np.asarray(q2, dtype=float)
        ratio = np.where(
            x < _ARCTAN_SERIES_THRESHOLD,
            1.0 - x * x / 3.0,
            np.arctan(x) / np.where(x == 0, 1.0, x),
        )
    return dist * ratio


def _interference_exponent(cfg: NetworkConfig, log_sig, active_density):
    """
    Log-domain terms of one interferer field with d = 1/(lt*pi)

    Returns (log1p(gamma*d^-alpha/sig), -2d + 2*q^2*arctan(d/q^2)) where
    sig = xi*l and q = gamma*d^(1-alpha)/sig.
    """
    dist = 1.0 / (np.asarray(active_density, dtype=float) * math.pi)
    log_dist = np.log(dist)
    log_gamma = math.log(cfg.gamma)
    log_term = np.logaddexp(0.0, log_gamma - cfg.alpha * log_dist - log_sig)
    with np.errstate(over="ignore"):
        q2 = np.exp(2.0 * (log_gamma + (1.0 - cfg.alpha) * log_dist - log_sig))
    return log_term, -2.0 * dist + 2.0 * _arctan_term(dist, q2)


def _log_signal(xi, ell_des):
    with np.errstate(divide="ignore"):
        return np.log(np.asarray(xi, dtype=float)) + np.log(np.asarray(ell_des, dtype=float))


def log_stp_fd_pairs(cfg: NetworkConfig, xi, ell_des, lt_s: float, lt_a: float) -> np.ndarray:
    """
    Unclamped natural log of the printed FD STP, elementwise over broadcast inputs

    Entries with xi = 0 or ell_des = 0 are -inf.
    """
    log_sig = _log_signal(xi, ell_des)
    with np.errstate(over="ignore", invalid="ignore"):
        noise_term = 2.0 * np.exp(math.log(cfg.gamma) + math.log(cfg.noise) - log_sig)
        log_s, field_s = _interference_exponent(cfg, log_sig, lt_s)
        log_a, field_a = _interference_exponent(cfg, log_sig, lt_a)
        value = -noise_term - (log_s - log_a) / math.pi + field_s + field_a
    return np.where(np.isneginf(log_sig), -np.inf, value)


def evaluate_stp_fd(cfg: NetworkConfig, xi: float, ell_des: float, lt_s: float, lt_a: float) -> StpEvaluation:
    """
    Closed-form FD STP exactly as printed, with the clamp flag

    The two interferer log terms enter with opposite signs and no SI term is
    present. Values above 1 are clamped and flagged.

    Args:
        cfg: Validated configuration (gamma, noise, alpha)
        xi: Association weight in [0, 1]
        ell_des: Desired-link path loss
        lt_s: Active STA density
        lt_a: Active AP density

    Returns:
        StpEvaluation(value, log_value, out_of_range)
    """
    if xi <= 0:
        return StpEvaluation(value=0.0, log_value=-math.inf)
    if not (ell_des > 0 and lt_s > 0 and lt_a > 0):
        raise ValueError(f"ell_des, lt_s and lt_a must be positive, got {ell_des}, {lt_s}, {lt_a}")

    log_value = float(log_stp_fd_pairs(cfg, xi, ell_des, lt_s, lt_a))
    if log_value > 0:
        logger.warning(
            f"FD STP expression exceeds 1 (ln={log_value:.6g}) at xi={xi}, ell={ell_des:.6g}, "
            f"lt_s={lt_s:.6g}, lt_a={lt_a:.6g}; clamped"
        )
        return StpEvaluation(value=1.0, log_value=log_value, out_of_range=True)
    return StpEvaluation(value=math.exp(log_value), log_value=log_value)


def stp_fd_analytic(cfg: NetworkConfig, xi: float, ell_des: float, lt_s: float, lt_a: float) -> float:
    """Clamped value of evaluate_stp_fd."""
    return evaluate_stp_fd(cfg, xi, ell_des, lt_s, lt_a).value


def log_stp_direction_pairs(
    cfg: NetworkConfig,
    direction: Direction,
    xi,
    ell_des,
    lt_s: float,
    lt_a: float,
    include_si: bool = False,
) -> np.ndarray:
    """Natural log of the single-direction STP, elementwise; -inf where xi*l = 0."""
    if direction is Direction.FD:
        raise ValueError("use log_stp_fd_pairs for FD")
    log_sig = _log_signal(xi, ell_des)
    impairment = cfg.noise + (config_si_params(cfg).mean if include_si else 0.0)
    with np.errstate(over="ignore", invalid="ignore"):
        impairment_term = np.exp(math.log(cfg.gamma) + math.log(impairment) - log_sig)
        log_term, field = _interference_exponent(cfg, log_sig, lt_s if direction is Direction.UL else lt_a)
        value = np.minimum(-impairment_term - log_term / math.pi + field, 0.0)
    return np.where(np.isneginf(log_sig), -np.inf, value)


def stp_direction_analytic(
    cfg: NetworkConfig,
    direction: Direction,
    xi: float,
    ell_des: float,
    lt_s: float,
    lt_a: float,
    include_si: bool = False,
) -> StpEvaluation:
    """
    Single-direction STP

    UL sees the active STA field and DL the active AP field:
    exp(-gamma*noise/sig [- gamma*kappa*rho/sig] - (1/pi)*ln(1 + gamma*d^-alpha/sig)
        - 2d + 2 q^2 arctan(d/q^2))
    with sig = xi*l, d = 1/(lt*pi). This form is always in [0, 1].
    """
    if direction is Direction.FD:
        raise ValueError("use evaluate_stp_fd or stp_fd_product_form for FD")
    if xi <= 0:
        return StpEvaluation(value=0.0, log_value=-math.inf)
    log_value = float(log_stp_direction_pairs(cfg, direction, xi, ell_des, lt_s, lt_a, include_si))
    return StpEvaluation(value=math.exp(log_value), log_value=log_value)


def stp_fd_product_form(cfg: NetworkConfig, xi: float, ell_des: float, lt_s: float, lt_a: float) -> StpEvaluation:
    """UL x DL per-direction STPs with SI included; an alternative to the printed FD expression."""
    ul = stp_direction_analytic(cfg, Direction.UL, xi, ell_des, lt_s, lt_a, include_si=True)
    dl = stp_direction_analytic(cfg, Direction.DL, xi, ell_des, lt_s, lt_a, include_si=True)
    log_value = ul.log_value + dl.log_value
    return StpEvaluation(value=math.exp(log_value), log_value=log_value)


def fd_link_path_loss(cfg: NetworkConfig) -> float:
    """Desired-link path loss at the substituted mean distance of the FD process."""
    return mean_path_loss(cfg.lambda_fd, cfg.alpha)


# ============================================================================
# MONTE-CARLO ORACLE
# ============================================================================

def _interferer_path_losses(
    cfg: NetworkConfig,
    field: PointSet,
    contender: np.ndarray,
    receiver: np.ndarray,
    cs_range: float,
    mark_rng: np.random.Generator,
) -> np.ndarray:
    """
    Thin `field` together with the desired transmitter and return the path
    losses from the surviving other transmitters to `receiver`

    The desired transmitter gets mark 0 so it always wins contention.
    """
    points = np.vstack([contender.reshape(1, 2), field.points])
    marks = np.concatenate([[0.0], mark_rng.uniform(0.0, 1.0, size=field.count)])
    combined = PointSet(points=points, density=field.density, window=field.window)
    result = simulate_matern_thinning(ThinningInput(points=combined, marks=marks, cs_range=cs_range))
    others = result.retained[result.retained > 0]
    if others.size == 0:
        return np.empty(0, dtype=float)
    distances = np.linalg.norm(points[others] - receiver, axis=1)
    return np.maximum(distances, 1e-12) ** (-cfg.alpha)


def _direction_success(
    cfg: NetworkConfig,
    direction: Direction,
    ap: np.ndarray,
    sta: np.ndarray,
    link_path_loss: float,
    desired_gain: float,
    cs_range: float,
    include_si: bool,
    streams: list,
) -> bool:
    field_rng, mark_rng, fading_rng = streams
    if direction is Direction.UL:
        field = sample_ppp_from(field_rng, cfg.lambda_s, cfg.window)
        losses = _interferer_path_losses(cfg, field, sta, ap, cs_range, mark_rng)
    else:
        field = sample_ppp_from(field_rng, cfg.lambda_a, cfg.window)
        losses = _interferer_path_losses(cfg, field, ap, sta, cs_range, mark_rng)

    si_power = sample_si_power(fading_rng, config_si_params(cfg)) if include_si else 0.0
    realization = LinkRealization(
        desired_gain=desired_gain,
        si_power=float(si_power),
        interferer_gains=sample_interference_gains(fading_rng, losses.size),
        interferer_path_losses=losses,
        desired_path_loss=link_path_loss,
        noise=cfg.noise,
    )
    sinr = sinr_uplink(realization, 1.0) if direction is Direction.UL else sinr_downlink(realization, 1.0)
    return sinr >= cfg.gamma


def stp_monte_carlo(
    cfg: NetworkConfig,
    direction: Direction,
    n_realizations: int,
    link_distance: Optional[float] = None,
    cs_range: Optional[float] = None,
    include_si: bool = True,
) -> StpEstimate:
    """
    Monte-Carlo STP of a typical link

    The typical AP sits at the window center with its STA at `link_distance`
    in a uniformly random direction. For UL the STA field is thinned together
    with the desired STA and the survivors interfere at the AP; DL mirrors this
    with the AP field. FD counts joint successes over independent UL and DL
    draws. Random numbers depend only on cfg.seed and the realization index, so
    estimates at different gamma use common random numbers.

    Args:
        cfg: Validated configuration
        direction: UL, DL or FD
        n_realizations: Number of networks (>= 1)
        link_distance: Desired link length, default 1/(lambda_FD*pi)
        cs_range: Hard carrier-sense radius, default Gamma^(-1/alpha)
        include_si: Add a Gamma SI draw to the impairment

    Returns:
        StpEstimate with the sample standard error (0 when n = 1)
    """
    if n_realizations < 1:
        raise ValueError(f"n_realizations must be at least 1, got {n_realizations}")
    distance = link_distance if link_distance is not None else model_mean_nn(cfg.lambda_fd)
    radius = cs_range if cs_range is not None else cfg.carrier_sense_radius
    if 2.0 * distance > min(cfg.window):
        raise ValueError(f"link distance {distance:.6g} does not fit around the center of window {cfg.window}")
    link_path_loss = distance ** (-cfg.alpha)
    center = np.array([cfg.window[0] / 2.0, cfg.window[1] / 2.0])

    gain_ul_rng, gain_dl_rng = spawn_streams(cfg.seed, 2)
    gains_ul = sample_desired_gain(gain_ul_rng, cfg.m_tx, n_realizations)
    gains_dl = sample_desired_gain(gain_dl_rng, cfg.m_tx, n_realizations)

    successes = np.zeros(n_realizations)
    for k in range(n_realizations):
        streams = spawn_streams(derive_seed(cfg.seed, k), 7)
        angle = streams[0].uniform(0.0, 2.0 * math.pi)
        sta = center + distance * np.array([math.cos(angle), math.sin(angle)])
        outcome = True
        if direction in (Direction.UL, Direction.FD):
            outcome &= _direction_success(
                cfg, Direction.UL, center, sta, link_path_loss, gains_ul[k], radius, include_si, streams[1:4]
            )
        if direction in (Direction.DL, Direction.FD):
            outcome &= _direction_success(
                cfg, Direction.DL, center, sta, link_path_loss, gains_dl[k], radius, include_si, streams[4:7]
            )
        successes[k] = float(outcome)

    estimate, stderr = _mean_and_stderr(successes)
    logger.debug(f"STP Monte-Carlo {direction.value}: {estimate:.4f} +/- {stderr:.4f} over {n_realizations}")
    return StpEstimate(direction=direction, estimate=estimate, stderr=stderr, n=n_realizations)


def _mean_and_stderr(values: np.ndarray) -> Tuple[float, float]:
    mean = float(values.mean())
    if values.size < 2:
        return mean, 0.0
    return mean, float(values.std(ddof=1) / math.sqrt(values.size))
