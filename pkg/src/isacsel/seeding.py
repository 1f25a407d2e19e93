"""Deterministic seed derivation.

Every stochastic stage derives its own RNG from (master seed, label) or
(master seed, sample index) through a keyed blake2b hash, so results are
independent of evaluation order and worker scheduling.
"""

import hashlib

import numpy as np


def derive_seed(master_seed: int, *labels) -> int:
    """Derive a 64-bit child seed from a master seed and a label path."""
    key = ":".join([str(int(master_seed))] + [str(x) for x in labels])
    digest = hashlib.blake2b(key.encode("ascii"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def child_rng(master_seed: int, *labels) -> np.random.Generator:
    """PCG64 generator seeded by :func:`derive_seed`."""
    return np.random.default_rng(derive_seed(master_seed, *labels))
