"""Within-scenario metric normalization and demand-weighted objective vectors.

Raw metrics from the five candidates are oriented so that larger is better
(sign flip for cost-like metrics, which keeps min-max output invariant
under affine rescaling of a metric column), min-max normalized across the
candidates, combined into the three objective scores, then weighted by the
scenario demand mix.
"""

from __future__ import annotations

import numpy as np

# orientation of each raw metric column: +1 benefit, -1 cost
SENSING_METRIC_NAMES = ("range_resolution", "velocity_resolution", "asl_db", "clutter_db")
SENSING_ORIENTATION = (-1, -1, -1, -1)
COMM_METRIC_NAMES = ("ber", "spectral_efficiency", "throughput")
COMM_ORIENTATION = (-1, +1, +1)
JOINT_METRIC_NAMES = ("papr_db", "latency_s", "energy_efficiency")
JOINT_ORIENTATION = (-1, -1, +1)


def normalize_across_candidates(raw: np.ndarray, orientation) -> np.ndarray:
    """Min-max normalize each metric column across the K candidates.

    ``raw`` is (K, n_metrics). Cost-like columns (orientation -1) are
    negated first. A column that is constant across candidates maps to 0.5
    for every candidate.
    """
    raw = np.asarray(raw, dtype=float)
    if raw.ndim != 2 or raw.shape[0] < 2:
        raise ValueError("need at least 2 candidates evaluated under the same scenario")
    if raw.shape[1] != len(orientation):
        raise ValueError(f"expected {len(orientation)} metric columns, got {raw.shape[1]}")
    oriented = raw * np.asarray(orientation, dtype=float)
    lo = oriented.min(axis=0)
    span = oriented.max(axis=0) - lo
    out = np.empty_like(oriented)
    for j in range(oriented.shape[1]):
        if span[j] == 0.0:
            out[:, j] = 0.5
        else:
            out[:, j] = (oriented[:, j] - lo[j]) / span[j]
    return out


def score(normalized: np.ndarray, weights) -> np.ndarray:
    """Convex combination of normalized metric columns, per candidate."""
    weights = np.asarray(weights, dtype=float)
    if abs(weights.sum() - 1.0) > 1e-9:
        raise ValueError(f"objective weights must sum to 1, got {weights.sum()}")
    normalized = np.asarray(normalized, dtype=float)
    if normalized.shape[-1] != weights.shape[0]:
        raise ValueError("weight count does not match metric count")
    return normalized @ weights


def demand_weight(scores, mix) -> np.ndarray:
    """Componentwise product [rho_s*Js, rho_c*Jc, rho_sc*Jj]."""
    scores = np.asarray(scores, dtype=float)
    weights = np.array([mix.rho_s, mix.rho_c, mix.rho_sc], dtype=float)
    return scores * weights


def objective_vectors(sensing_raw, comm_raw, joint_raw, mix, cfg) -> np.ndarray:
    """(K, 3) demand-weighted objective vectors for one scenario.

    ``*_raw`` are (K, n) raw metric tables in the column orders declared at
    the top of this module; ``cfg`` is an :class:`ObjectivesConfig`.
    """
    j_s = score(normalize_across_candidates(sensing_raw, SENSING_ORIENTATION), cfg.sensing_weights)
    j_c = score(normalize_across_candidates(comm_raw, COMM_ORIENTATION), cfg.comm_weights)
    j_j = score(normalize_across_candidates(joint_raw, JOINT_ORIENTATION), cfg.joint_weights)
    stacked = np.stack([j_s, j_c, j_j], axis=1)
    return demand_weight(stacked, mix)
