"""
Throughput Service

Spatial density of throughput (SDT) in nats/sec/Hz per unit area for HD uplink,
HD downlink and FD links, and the mean rate of FD links under strongest-signal
association.
"""
import logging
import math
from typing import Optional

import numpy as np
from scipy import integrate

from config.constants import ErrorMessages, QuadratureConfig
from models.enums import Direction, SdtMode, ThetaMode
from schemas.network_config_schema import NetworkConfig
from schemas.throughput_schema import SdtReport
from services.contention_service import ContentionService
from services.geometry_service import mean_path_loss, nn_distance_pdf
from services.link_metrics_service import evaluate_stp_fd, log_stp_fd_pairs, stp_direction_analytic
from utils.exceptions import QuadratureError

logger = logging.getLogger(__name__)


def rate_factor(cfg: NetworkConfig) -> float:
    """ln(1 + gamma), nats/sec/Hz per successful link."""
    return math.log1p(cfg.gamma)


def ssf_integration_limit(lam: float, tail_mass: float = QuadratureConfig.SSF_TAIL_MASS) -> float:
    """Radius beyond which the nearest-neighbor law holds less than `tail_mass`."""
    return math.sqrt(-math.log(tail_mass) / (lam * math.pi))


def relative_gain(value: float, baseline: float) -> float:
    """Percentage gain of `value` over `baseline`."""
    if baseline == 0:
        return math.inf if value > 0 else 0.0
    return 100.0 * (value - baseline) / baseline


class ThroughputService:
    """
    SDT evaluations sharing one contention model

    The desired-link path loss defaults to the substituted mean distance of the
    superposed FD process, (1/(lambda_FD*pi))^(-alpha), for every mode.
    """

    def __init__(self, theta_mode: ThetaMode = ThetaMode.NUMERIC):
        self.contention = ContentionService(theta_mode)

    def sdt_hd(self, cfg: NetworkConfig, direction: Direction) -> SdtReport:
        """
        HD SDT: DL uses the active AP density and DL STP, UL the STA density and UL STP

        Raises:
            ValueError: If direction is FD
        """
        if direction is Direction.FD:
            raise ValueError("sdt_hd takes UL or DL")
        lt_s, lt_a = self.contention.hd_active_densities(cfg)
        path_loss = mean_path_loss(cfg.lambda_fd, cfg.alpha)
        evaluation = stp_direction_analytic(cfg, direction, 1.0, path_loss, lt_s, lt_a)
        density = lt_s if direction is Direction.UL else lt_a
        return SdtReport(
            mode=SdtMode.HD_UL if direction is Direction.UL else SdtMode.HD_DL,
            active_density=density,
            stp=evaluation.value,
            sdt=density * rate_factor(cfg) * evaluation.value,
            log_stp=evaluation.log_value,
            inputs=cfg,
        )

    def sdt_fd(self, cfg: NetworkConfig, xi: float = 1.0, path_loss: Optional[float] = None) -> SdtReport:
        """
        FD SDT = lambda~_FD * ln(1 + gamma) * P_FD

        Args:
            cfg: Validated configuration
            xi: Association weight of the typical pair
            path_loss: Desired-link path loss override

        Returns:
            SdtReport in mode FD
        """
        density = self.contention.fd_active_density(cfg)
        lt_s, lt_a = self.contention.hd_active_densities(cfg)
        ell = path_loss if path_loss is not None else mean_path_loss(cfg.lambda_fd, cfg.alpha)
        evaluation = evaluate_stp_fd(cfg, xi, ell, lt_s, lt_a)
        return SdtReport(
            mode=SdtMode.FD,
            active_density=density,
            stp=evaluation.value,
            sdt=density * rate_factor(cfg) * evaluation.value,
            log_stp=min(evaluation.log_value, 0.0),
            inputs=cfg,
        )

    def log_sdt_fd(self, cfg: NetworkConfig, xi: float = 1.0, path_loss: Optional[float] = None) -> float:
        """ln of sdt_fd, finite where the SDT itself underflows to 0; -inf for xi = 0."""
        if xi <= 0:
            return -math.inf
        density = self.contention.fd_active_density(cfg)
        lt_s, lt_a = self.contention.hd_active_densities(cfg)
        ell = path_loss if path_loss is not None else mean_path_loss(cfg.lambda_fd, cfg.alpha)
        log_stp = min(float(log_stp_fd_pairs(cfg, xi, ell, lt_s, lt_a)), 0.0)
        return math.log(density) + math.log(rate_factor(cfg)) + log_stp

    def ssf_mean_rate(self, cfg: NetworkConfig, rel_tol: float = QuadratureConfig.SSF_REL_TOL) -> SdtReport:
        """
        Mean FD rate under strongest-signal-first association

        The FD STP with xi = 1 and path loss r^(-alpha) is integrated against
        the nearest-neighbor density 2*pi*lambda_FD*r*exp(-lambda_FD*pi*r^2)
        over [0, r_max], where the density's tail mass beyond r_max is below
        1e-10. The report's stp field holds the averaged STP.
        `rel_tol` is the relative tolerance handed to the quadrature.

        Raises:
            QuadratureError: If the integral does not converge
        """
        lam = cfg.lambda_fd
        lt_s, lt_a = self.contention.hd_active_densities(cfg)
        r_max = ssf_integration_limit(lam)

        def integrand(r: float) -> float:
            if r <= 0:
                return 0.0
            with np.errstate(over="ignore"):
                ell = np.power(r, -cfg.alpha)
            log_stp = float(log_stp_fd_pairs(cfg, 1.0, ell, lt_s, lt_a))
            return math.exp(min(log_stp, 0.0)) * nn_distance_pdf(r, lam)

        result = integrate.quad(
            integrand,
            0.0,
            r_max,
            epsrel=rel_tol,
            epsabs=QuadratureConfig.SSF_ABS_TOL,
            limit=QuadratureConfig.QUAD_LIMIT,
            full_output=1,
        )
        if len(result) > 3:
            raise QuadratureError(
                ErrorMessages.QUADRATURE_FAILED.format(what=f"SSF mean rate (lambda_FD={lam})", detail=result[3])
            )
        mean_stp = float(np.clip(result[0], 0.0, 1.0))
        density = self.contention.fd_active_density(cfg)
        logger.debug(f"SSF mean STP {mean_stp:.6g} (abs err {result[1]:.2e}) over [0, {r_max:.4g}]")
        return SdtReport(
            mode=SdtMode.SSF_FD,
            active_density=density,
            stp=mean_stp,
            sdt=density * rate_factor(cfg) * mean_stp,
            log_stp=math.log(mean_stp) if mean_stp > 0 else -math.inf,
            inputs=cfg,
        )


def sdt_hd(cfg: NetworkConfig, direction: Direction, theta_mode: ThetaMode = ThetaMode.NUMERIC) -> SdtReport:
    return ThroughputService(theta_mode).sdt_hd(cfg, direction)


def sdt_fd(cfg: NetworkConfig, xi: float = 1.0, theta_mode: ThetaMode = ThetaMode.NUMERIC) -> SdtReport:
    return ThroughputService(theta_mode).sdt_fd(cfg, xi)


def ssf_mean_rate(
    cfg: NetworkConfig,
    theta_mode: ThetaMode = ThetaMode.NUMERIC,
    rel_tol: float = QuadratureConfig.SSF_REL_TOL,
) -> SdtReport:
    return ThroughputService(theta_mode).ssf_mean_rate(cfg, rel_tol)
