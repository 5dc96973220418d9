"""
Geometry Service

Poisson point process sampling in a rectangular window, superposition, and the
nearest-neighbor distance law used by the contention and throughput models.
"""
import logging
from typing import Optional, Tuple

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from config.constants import ErrorMessages
from schemas.point_set_schema import PointSet
from utils.exceptions import WindowMismatchError

logger = logging.getLogger(__name__)

Window = Tuple[float, float]


def sample_ppp_from(rng: np.random.Generator, lam: float, window: Window, seed: Optional[int] = None) -> PointSet:
    """
    Sample a homogeneous PPP using an existing generator

    Args:
        rng: Generator to draw from (consumed)
        lam: Intensity, points per unit area
        window: (width, height)
        seed: Seed label stored on the result

    Returns:
        PointSet with Poisson(lam * area) uniform points

    Raises:
        ValueError: If lam < 0 or the window has no area
    """
    width, height = float(window[0]), float(window[1])
    if lam < 0:
        raise ValueError(f"intensity must be nonnegative, got {lam}")
    if not (width > 0 and height > 0):
        raise ValueError(f"window area must be positive, got {width} x {height}")

    count = int(rng.poisson(lam * width * height)) if lam > 0 else 0
    points = rng.uniform(0.0, 1.0, size=(count, 2)) * np.array([width, height])
    return PointSet(points=points, density=float(lam), window=(width, height), seed=seed)


def sample_ppp(lam: float, window: Window, seed: int) -> PointSet:
    """
    Sample a homogeneous PPP in [0, width] x [0, height]

    Same (lam, window, seed) always gives the same coordinates.
    """
    return sample_ppp_from(np.random.default_rng(seed), lam, window, seed=int(seed))


def superpose(a: PointSet, b: PointSet) -> PointSet:
    """
    Union of two point sets sampled in the same window

    Raises:
        WindowMismatchError: If the windows differ
    """
    if tuple(a.window) != tuple(b.window):
        raise WindowMismatchError(ErrorMessages.WINDOW_MISMATCH.format(a=a.window, b=b.window))
    logger.debug(f"Superposing {a.count} + {b.count} points")
    return PointSet(
        points=np.vstack([a.points, b.points]),
        density=a.density + b.density,
        window=a.window,
        seed=a.seed if a.seed == b.seed else None,
    )


def nn_distance_pdf(r, lam: float):
    """Rayleigh nearest-neighbor density 2*pi*lam*r*exp(-lam*pi*r^2)."""
    r = np.asarray(r, dtype=float)
    value = 2.0 * np.pi * lam * r * np.exp(-lam * np.pi * r * r)
    return float(value) if value.ndim == 0 else value


def nn_distance_cdf(r, lam: float):
    """P(nearest neighbor within r) = 1 - exp(-lam*pi*r^2)."""
    r = np.asarray(r, dtype=float)
    value = -np.expm1(-lam * np.pi * r * r)
    return float(value) if value.ndim == 0 else value


def model_mean_nn(lam: float) -> float:
    """Mean link distance 1/(lam*pi) as substituted by the closed-form model."""
    return 1.0 / (lam * np.pi)


paper_mean_nn = model_mean_nn


def rayleigh_mean_nn(lam: float) -> float:
    """Mean of the Rayleigh nearest-neighbor law, 1/(2*sqrt(lam))."""
    return 0.5 / np.sqrt(lam)


def mean_path_loss(lam: float, alpha: float) -> float:
    """(1/(lam*pi))^(-alpha), the path loss at the substituted mean distance."""
    return model_mean_nn(lam) ** (-alpha)


def interior_mask(points: np.ndarray, window: Window, margin: float) -> np.ndarray:
    """Boolean mask of points at least `margin` away from every window edge."""
    if points.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    x, y = points[:, 0], points[:, 1]
    return (x >= margin) & (x <= window[0] - margin) & (y >= margin) & (y <= window[1] - margin)


def nearest_neighbor_distances(point_set: PointSet, margin: float = 0.0) -> np.ndarray:
    """
    Nearest-neighbor distance of every point at least `margin` from the boundary

    Args:
        point_set: Sampled points
        margin: Edge guard; pick it so P(nn > margin) is negligible

    Returns:
        1-D array of distances (empty if fewer than two points)
    """
    if point_set.count < 2:
        return np.empty(0, dtype=float)
    tree = cKDTree(point_set.points)
    distances, _ = tree.query(point_set.points, k=2)
    mask = interior_mask(point_set.points, point_set.window, margin)
    return distances[mask, 1]


def pairwise_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Euclidean distance matrix, shape (len(a), len(b))."""
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.empty((a.shape[0], b.shape[0]), dtype=float)
    return cdist(a, b)
