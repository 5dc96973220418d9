"""
Contention Service

Matérn type-II model of CSMA/CA: the contention weight Theta, access
probabilities and active densities for HD and FD operation, the PCS threshold
constraint, and an exact hard-disc thinning oracle.
"""
import logging
import math
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy import integrate, special
from scipy.spatial import cKDTree

from config.constants import ErrorMessages, QuadratureConfig
from models.enums import ThetaMode
from schemas.contention_schema import ContentionSummary, RetentionEstimate, ThinningInput, ThinningResult
from schemas.network_config_schema import NetworkConfig
from services.geometry_service import interior_mask, mean_path_loss, model_mean_nn, sample_ppp_from, superpose
from utils.exceptions import QuadratureError
from utils.seeding import derive_seed, spawn_streams

logger = logging.getLogger(__name__)


# ============================================================================
# THINNING ORACLE
# ============================================================================

def carrier_sense_radius(pcs: float, alpha: float) -> float:
    """CSR = Gamma^(-1/alpha) with unit transmit power."""
    return pcs ** (-1.0 / alpha)


def simulate_matern_thinning(thinning_input: ThinningInput) -> ThinningResult:
    """
    Matérn type-II thinning with a hard carrier-sense disc

    A point is retained iff its mark is strictly lower than the mark of every
    other point within cs_range (distance <= R).

    Args:
        thinning_input: Points, marks and radius

    Returns:
        ThinningResult with all-point and interior-only retention
    """
    points = thinning_input.points.points
    marks = thinning_input.marks
    radius = thinning_input.cs_range
    n = points.shape[0]
    if n == 0:
        return ThinningResult(retained=np.empty(0, dtype=int), empirical_p=0.0)

    eliminated = np.zeros(n, dtype=bool)
    pairs = cKDTree(points).query_pairs(r=radius, output_type="ndarray")
    if pairs.size:
        i, j = pairs[:, 0], pairs[:, 1]
        eliminated[j[marks[i] <= marks[j]]] = True
        eliminated[i[marks[j] <= marks[i]]] = True

    retained = np.flatnonzero(~eliminated)
    interior = interior_mask(points, thinning_input.points.window, radius)
    return ThinningResult(
        retained=retained,
        empirical_p=retained.size / n,
        interior_count=int(interior.sum()),
        interior_retained=int((interior & ~eliminated).sum()),
    )


def thin_point_set(points, radius: float, rng: np.random.Generator) -> ThinningResult:
    """Draw U[0,1] marks from `rng` and thin."""
    marks = rng.uniform(0.0, 1.0, size=points.count)
    return simulate_matern_thinning(ThinningInput(points=points, marks=marks, cs_range=radius))


def _ratio_estimate(numerators: np.ndarray, denominators: np.ndarray) -> Tuple[float, float]:
    """Ratio-of-sums estimate with its linearized standard error."""
    total = denominators.sum()
    if total == 0:
        return 0.0, 0.0
    estimate = numerators.sum() / total
    k = numerators.size
    if k < 2:
        return float(estimate), 0.0
    residuals = numerators - estimate * denominators
    stderr = math.sqrt(float(np.sum(residuals ** 2)) / (k * (k - 1))) / denominators.mean()
    return float(estimate), float(stderr)


def estimate_retention(
    lam: float,
    radius: float,
    window: Tuple[float, float],
    n_realizations: int,
    seed: int,
) -> RetentionEstimate:
    """
    Monte-Carlo retention probability of the typical point

    Statistics use only points at least `radius` from the window edge.

    Args:
        lam: PPP intensity
        radius: Hard carrier-sense radius
        window: Sampling window
        n_realizations: Number of independent windows
        seed: Base seed; realization k uses derive_seed(seed, k)

    Returns:
        RetentionEstimate against access_probability(lam, pi*R^2)
    """
    counts = np.zeros(n_realizations)
    kept = np.zeros(n_realizations)
    for k in range(n_realizations):
        point_rng, mark_rng = spawn_streams(derive_seed(seed, k), 2)
        points = sample_ppp_from(point_rng, lam, window)
        result = thin_point_set(points, radius, mark_rng)
        counts[k] = result.interior_count
        kept[k] = result.interior_retained

    estimate, stderr = _ratio_estimate(kept, counts)
    return RetentionEstimate(
        estimate=estimate,
        stderr=stderr,
        realizations=n_realizations,
        interior_points=int(counts.sum()),
        analytic=access_probability(lam, math.pi * radius ** 2),
    )


def estimate_active_density(
    lam_s: float,
    lam_a: float,
    theta: float,
    window: Tuple[float, float],
    n_realizations: int,
    seed: int,
) -> RetentionEstimate:
    """
    Monte-Carlo density of concurrent transmitters of the superposed STA+AP process

    The contention disc is the hard disc with area Theta.

    Returns:
        RetentionEstimate of retained interior points per unit interior area,
        against active_density(lam_s + lam_a, theta)
    """
    radius = math.sqrt(theta / math.pi)
    inner_area = max(window[0] - 2 * radius, 0.0) * max(window[1] - 2 * radius, 0.0)
    if inner_area <= 0:
        raise ValueError(f"window {window} has no interior for contention radius {radius}")

    densities = np.zeros(n_realizations)
    for k in range(n_realizations):
        sta_rng, ap_rng, mark_rng = spawn_streams(derive_seed(seed, k), 3)
        stations = sample_ppp_from(sta_rng, lam_s, window)
        access_points = sample_ppp_from(ap_rng, lam_a, window)
        result = thin_point_set(superpose(stations, access_points), radius, mark_rng)
        densities[k] = result.interior_retained / inner_area

    stderr = float(densities.std(ddof=1) / math.sqrt(n_realizations)) if n_realizations > 1 else 0.0
    return RetentionEstimate(
        estimate=float(densities.mean()),
        stderr=stderr,
        realizations=n_realizations,
        interior_points=int(round(densities.sum() * inner_area)),
        analytic=active_density(lam_s + lam_a, theta),
    )


# ============================================================================
# THETA AND ACCESS PROBABILITY
# ============================================================================

@lru_cache(maxsize=64)
def _unit_theta_integral(alpha: float) -> float:
    """Integral of u*exp(-u^alpha) over [0, inf) by adaptive quadrature."""
    result = integrate.quad(
        lambda u: u * math.exp(-u ** alpha),
        0.0,
        math.inf,
        epsrel=QuadratureConfig.THETA_REL_TOL,
        epsabs=1e-14,
        limit=QuadratureConfig.QUAD_LIMIT,
        full_output=1,
    )
    if len(result) > 3:
        raise QuadratureError(
            ErrorMessages.QUADRATURE_FAILED.format(what=f"theta (alpha={alpha})", detail=result[3])
        )
    return float(result[0])


def theta_numeric(pcs: float, alpha: float, dist_scale: float = 1.0) -> float:
    """
    Theta = 2*pi * integral of exp(-Gamma (s r)^alpha) r dr over [0, inf)

    The integral is taken in the scale-free variable u = Gamma^(1/alpha) s r.

    Args:
        pcs: PCS threshold Gamma (mW)
        alpha: Path-loss exponent
        dist_scale: Length of one distance unit, s

    Returns:
        Area-like contention weight

    Raises:
        QuadratureError: If quadrature does not converge
        ValueError: If an argument is not positive
    """
    if not (pcs > 0 and alpha > 0 and dist_scale > 0):
        raise ValueError(f"theta_numeric needs positive arguments, got {pcs}, {alpha}, {dist_scale}")
    return 2.0 * math.pi * _unit_theta_integral(float(alpha)) / (pcs ** (2.0 / alpha) * dist_scale ** 2)


def theta_gamma_closed_form(pcs: float, alpha: float, dist_scale: float = 1.0) -> float:
    """2*pi*Gamma(2/alpha) / (alpha * Gamma_pcs^(2/alpha) * s^2); cross-check for theta_numeric."""
    return 2.0 * math.pi * special.gamma(2.0 / alpha) / (alpha * pcs ** (2.0 / alpha) * dist_scale ** 2)


def theta_closed_form(pcs: float, path_loss: float) -> float:
    """pi * sqrt(pi/Gamma) * erf(sqrt(Gamma) * l), evaluated as printed."""
    if not (pcs > 0 and path_loss > 0):
        raise ValueError(f"theta_closed_form needs positive arguments, got {pcs}, {path_loss}")
    return math.pi * math.sqrt(math.pi / pcs) * float(special.erf(math.sqrt(pcs) * path_loss))


def access_probability(lam: float, theta: float) -> float:
    """
    (1 - exp(-lam*Theta)) / (lam*Theta)

    A second-order series replaces the expression below lam*Theta = 1e-8.
    """
    x = lam * theta
    if x < QuadratureConfig.SERIES_THRESHOLD:
        return 1.0 - x / 2.0 + x * x / 6.0
    return float(-math.expm1(-x) / x)


def active_density(lam: float, theta: float) -> float:
    """access_probability(lam, Theta) * lam."""
    return access_probability(lam, theta) * lam


# ============================================================================
# PCS THRESHOLD CONSTRAINT
# ============================================================================

def pcs_upper_bound(xi: float, dist: float, cfg: NetworkConfig) -> float:
    """
    Largest PCS threshold that keeps a pair at distance `dist` decodable

    xi * dist^(-alpha) / (1 + P_t * gamma^(1/alpha))^alpha

    Raises:
        ValueError: If dist is not positive
    """
    if not dist > 0:
        raise ValueError(f"dist must be positive, got {dist}")
    return xi * dist ** (-cfg.alpha) / (1.0 + cfg.p_tx * cfg.gamma ** (1.0 / cfg.alpha)) ** cfg.alpha


def csr_lower_bound(xi: float, dist: float, cfg: NetworkConfig) -> float:
    """Smallest carrier-sense range protecting the pair: xi * dist * (1 + P_t * gamma^(1/alpha))."""
    return xi * dist * (1.0 + cfg.p_tx * cfg.gamma ** (1.0 / cfg.alpha))


def pcs_from_csr(csr: float, alpha: float) -> float:
    """Gamma = CSR^(-alpha)."""
    return csr ** (-alpha)


def fd_constraint_distance(cfg: NetworkConfig) -> float:
    """Pair distance used by the network-level PCS constraint, 1/(lambda_FD*pi)."""
    return model_mean_nn(cfg.lambda_fd)


def fd_pcs_bound(cfg: NetworkConfig, xi: float = 1.0) -> float:
    """pcs_upper_bound at the network-level pair distance."""
    return pcs_upper_bound(xi, fd_constraint_distance(cfg), cfg)


# ============================================================================
# MODEL-LEVEL SERVICE
# ============================================================================

class ContentionService:
    """
    Access probabilities and active densities for a configuration

    The theta mode is the only state: NUMERIC integrates the retention kernel,
    ERF uses the erf closed form with the mean path loss as its argument.
    """

    def __init__(self, theta_mode: ThetaMode = ThetaMode.NUMERIC):
        self._theta_mode = theta_mode

    @property
    def theta_mode(self) -> ThetaMode:
        return self._theta_mode

    def theta(self, cfg: NetworkConfig, lam: float) -> float:
        """Contention weight of a process with intensity `lam` at threshold cfg.pcs."""
        if self._theta_mode is ThetaMode.NUMERIC:
            return theta_numeric(cfg.pcs, cfg.alpha)
        value = theta_closed_form(cfg.pcs, mean_path_loss(lam, cfg.alpha))
        if logger.isEnabledFor(logging.DEBUG):
            distance_reading = theta_closed_form(cfg.pcs, model_mean_nn(lam))
            logger.debug(
                f"erf theta (lambda={lam}, pcs={cfg.pcs:.3e}): erf(sqrt(G)*l)={value:.6e}, "
                f"erf(sqrt(G)*d)={distance_reading:.6e}, numeric={theta_numeric(cfg.pcs, cfg.alpha):.6e}"
            )
        return value

    def summary(self, cfg: NetworkConfig, lam: float) -> ContentionSummary:
        theta = self.theta(cfg, lam)
        access_p = access_probability(lam, theta)
        return ContentionSummary(
            theta=theta,
            access_p=access_p,
            active_density=access_p * lam,
            parent_density=lam,
        )

    def hd_active_densities(self, cfg: NetworkConfig) -> Tuple[float, float]:
        """(active STA density, active AP density) under HD contention."""
        return (
            self.summary(cfg, cfg.lambda_s).active_density,
            self.summary(cfg, cfg.lambda_a).active_density,
        )

    def fd_summary(self, cfg: NetworkConfig) -> ContentionSummary:
        """Contention of the superposed process with intensity lambda_s + lambda_a."""
        return self.summary(cfg, cfg.lambda_fd)

    def fd_access_probability(self, cfg: NetworkConfig) -> float:
        return self.fd_summary(cfg).access_p

    def fd_active_density(self, cfg: NetworkConfig) -> float:
        return self.fd_summary(cfg).active_density


def hd_active_densities(cfg: NetworkConfig, theta_mode: ThetaMode = ThetaMode.NUMERIC) -> Tuple[float, float]:
    return ContentionService(theta_mode).hd_active_densities(cfg)


def fd_access_probability(cfg: NetworkConfig, theta_mode: ThetaMode = ThetaMode.NUMERIC) -> float:
    return ContentionService(theta_mode).fd_access_probability(cfg)


def fd_active_density(cfg: NetworkConfig, theta_mode: ThetaMode = ThetaMode.NUMERIC) -> float:
    return ContentionService(theta_mode).fd_active_density(cfg)


def retention_radius(theta: float) -> float:
    """Radius of the hard disc with area Theta."""
    return math.sqrt(theta / math.pi)

