"""dB <-> linear conversions. All arithmetic inside the model is linear."""
from typing import Union

import numpy as np

ArrayLike = Union[float, np.ndarray]


def db_to_linear(x: ArrayLike) -> ArrayLike:
    """Convert dB (or dBm) to linear (or mW)."""
    if isinstance(x, np.ndarray):
        return np.power(10.0, x / 10.0)
    return 10.0 ** (float(x) / 10.0)


def linear_to_db(x: ArrayLike) -> ArrayLike:
    """
    Convert linear (or mW) to dB (or dBm).

    Raises:
        ValueError: If a value is not strictly positive
    """
    if isinstance(x, np.ndarray):
        if np.any(x <= 0):
            raise ValueError("linear_to_db requires strictly positive values")
        return 10.0 * np.log10(x)
    if x <= 0:
        raise ValueError(f"linear_to_db requires a strictly positive value, got {x}")
    return 10.0 * float(np.log10(x))
