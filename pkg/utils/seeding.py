"""
Seed Derivation

Per-realization seeds are derived from (base_seed, index) with a stable hash so
any realization can be reproduced in isolation and in any execution order.
"""
import hashlib

import numpy as np

SEED_MASK = (1 << 63) - 1


def derive_seed(base_seed: int, index: int) -> int:
    """
    Derive the seed of realization `index` from `base_seed`

    Args:
        base_seed: Experiment-level seed
        index: Realization index

    Returns:
        Non-negative 63-bit integer seed
    """
    payload = f"{int(base_seed)}:{int(index)}".encode("ascii")
    digest = hashlib.blake2b(payload, digest_size=8).digest()
    return int.from_bytes(digest, "big") & SEED_MASK


def make_rng(seed: int) -> np.random.Generator:
    """Seeded numpy generator."""
    return np.random.default_rng(seed)


def spawn_streams(seed: int, count: int) -> list:
    """
    Independent child generators for one realization

    Args:
        seed: Realization seed
        count: Number of independent streams

    Returns:
        List of numpy Generators, stable for a given (seed, count)
    """
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]
