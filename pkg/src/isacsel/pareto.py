"""Pareto dominance, epsilon filtering, and multi-label encoding.

Candidate counts are tiny (five waveforms), so everything here is exact
O(K^2) pairwise logic; no non-dominated sorting machinery is needed.
"""

from __future__ import annotations

import numpy as np


def dominates(a, b) -> bool:
    """True iff ``a >= b`` componentwise with at least one strict improvement."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return bool(np.all(a >= b) and np.any(a > b))


def pareto_set(vectors) -> list:
    """Indices of vectors not dominated by any other vector. Never empty."""
    vecs = np.asarray(vectors, dtype=float)
    if vecs.ndim != 2 or vecs.shape[0] == 0:
        raise ValueError("pareto_set needs a non-empty list of equal-length vectors")
    keep = []
    for i in range(vecs.shape[0]):
        if not any(dominates(vecs[j], vecs[i]) for j in range(vecs.shape[0]) if j != i):
            keep.append(i)
    return keep


def _eps_dominates(a, b, eps: float) -> bool:
    # relaxed rule: a beats b when no component is worse than b by more
    # than eps and some component is better by more than eps
    return bool(np.all(a >= b - eps) and np.any(a > b + eps))


def epsilon_filter(vectors, pareto_indices, eps: float) -> list:
    """Prune near-duplicate members of the strict Pareto set.

    Members are visited in order of decreasing component sum (ties toward
    the lower index) and kept unless an already-kept member eps-dominates
    them. Only survivors can knock out later candidates, so the maximal-sum
    member always survives and the result is a non-empty subset of the
    input. With ``eps == 0`` the filter is a no-op on a strict Pareto set.
    """
    if eps < 0:
        raise ValueError("epsilon must be >= 0")
    vecs = np.asarray(vectors, dtype=float)
    idx = list(pareto_indices)
    order = sorted(idx, key=lambda i: (-float(vecs[i].sum()), i))
    kept = []
    for i in order:
        if not any(_eps_dominates(vecs[j], vecs[i], eps) for j in kept):
            kept.append(i)
    return sorted(kept)


def encode_labels(indices, k: int) -> np.ndarray:
    """Binary label vector with ones exactly at the member indices."""
    y = np.zeros(k, dtype=np.int8)
    for i in indices:
        if not 0 <= i < k:
            raise ValueError(f"index {i} out of range for K={k}")
        y[i] = 1
    return y


def label_waveforms(objective_vectors, eps: float) -> tuple:
    """Full labeling pass: strict Pareto set, eps filter, label vector.

    Returns ``(labels, strict_indices, kept_indices)``.
    """
    strict = pareto_set(objective_vectors)
    kept = epsilon_filter(objective_vectors, strict, eps)
    labels = encode_labels(kept, len(objective_vectors))
    return labels, strict, kept
