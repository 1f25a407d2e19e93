"""Network snapshot sampling and the 8-feature scenario representation.

A scenario bundles a service demand mix, per-user multipath descriptions,
cell-level channel descriptors (mean SNR, RMS delay spread, RMS Doppler
spread), and the operating regime (bandwidth, mobility). Feature vector
order and units are part of the dataset contract:

    [rho_s, rho_c, rho_sc, snr_db, delay_spread_s, doppler_spread_hz,
     bandwidth_hz, mobility_mps]
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from isacsel.config import ScenarioConfig
from isacsel.seeding import child_rng

FEATURE_NAMES = (
    "rho_s",
    "rho_c",
    "rho_sc",
    "snr_db",
    "delay_spread_s",
    "doppler_spread_hz",
    "bandwidth_hz",
    "mobility_mps",
)
N_FEATURES = len(FEATURE_NAMES)


@dataclass
class DemandMix:
    """Fractions of sensing-only, communication-only, and joint users."""

    rho_s: float
    rho_c: float
    rho_sc: float

    def __post_init__(self):
        total = self.rho_s + self.rho_c + self.rho_sc
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"demand mix must sum to 1, got {total!r}")
        if min(self.rho_s, self.rho_c, self.rho_sc) < 0:
            raise ValueError("demand fractions must be nonnegative")

    def as_array(self) -> np.ndarray:
        return np.array([self.rho_s, self.rho_c, self.rho_sc])


@dataclass
class PathSet:
    """One user's multipath profile in delay-Doppler form."""

    gains: np.ndarray  # complex path gains
    delays_s: np.ndarray
    dopplers_hz: np.ndarray

    def __post_init__(self):
        self.gains = np.asarray(self.gains, dtype=np.complex128)
        self.delays_s = np.asarray(self.delays_s, dtype=float)
        self.dopplers_hz = np.asarray(self.dopplers_hz, dtype=float)
        if self.gains.size < 1:
            raise ValueError("a path set needs at least one path")
        if np.any(self.delays_s < 0):
            raise ValueError("path delays must be >= 0")
        if not np.sum(np.abs(self.gains) ** 2) > 0:
            raise ValueError("total path power must be positive")

    @property
    def count(self) -> int:
        return int(self.gains.size)

    def normalized_powers(self) -> np.ndarray:
        p = np.abs(self.gains) ** 2
        return p / p.sum()

    def rms_delay_spread(self) -> float:
        p = self.normalized_powers()
        mean = float(p @ self.delays_s)
        return float(np.sqrt(p @ (self.delays_s - mean) ** 2))

    def rms_doppler_spread(self) -> float:
        p = self.normalized_powers()
        mean = float(p @ self.dopplers_hz)
        return float(np.sqrt(p @ (self.dopplers_hz - mean) ** 2))


@dataclass
class CellDescriptors:
    """Cell-level channel summary: unweighted means over users."""

    snr_linear: float
    delay_spread_s: float
    doppler_spread_hz: float

    def __post_init__(self):
        if self.snr_linear <= 0:
            raise ValueError("mean SNR must be positive")
        if self.delay_spread_s < 0 or self.doppler_spread_hz < 0:
            raise ValueError("spreads must be >= 0")

    @property
    def snr_db(self) -> float:
        return float(10 * np.log10(self.snr_linear))


@dataclass
class Scenario:
    """One labeled-dataset snapshot; fully determined by (seed, config)."""

    scenario_id: int
    seed: int
    mix: DemandMix
    descriptors: CellDescriptors
    bandwidth_hz: float
    mobility_mps: float
    mobility_class: int
    carrier_hz: float
    n_users: int
    positions_m: np.ndarray  # (U, 2), traceability only
    path_sets: list
    per_user_snr_db: np.ndarray


def sample_demand_mix(rng: np.random.Generator) -> DemandMix:
    """Uniform sample on the 2-simplex (flat Dirichlet)."""
    rho = rng.dirichlet(np.ones(3))
    # guard the strict sum-to-one invariant against rounding
    rho = rho / rho.sum()
    return DemandMix(float(rho[0]), float(rho[1]), float(1.0 - rho[0] - rho[1]))


def _sample_path_set(
    rng: np.random.Generator, cfg: ScenarioConfig, delay_target_s: float, speed_mps: float
) -> PathSet:
    lo, hi = cfg.path_count_range
    n_paths = int(rng.integers(lo, hi + 1))
    delays = np.zeros(n_paths)
    if n_paths > 1:
        delays[1:] = np.sort(rng.uniform(0.0, 3.0 * delay_target_s, n_paths - 1))
    # exponential power-delay profile toward the target RMS spread
    powers = np.exp(-delays / max(delay_target_s, 1e-12))
    powers /= powers.sum()
    phases = rng.uniform(0.0, 2 * np.pi, n_paths)
    gains = np.sqrt(powers) * np.exp(1j * phases)
    f_max = cfg.carrier_hz * speed_mps / 299_792_458.0
    dopplers = f_max * np.cos(rng.uniform(0.0, 2 * np.pi, n_paths))
    return PathSet(gains=gains, delays_s=delays, dopplers_hz=dopplers)


def sample_channel(rng: np.random.Generator, cfg: ScenarioConfig):
    """Draw users, multipath profiles, and the operating regime.

    Returns ``(path_sets, per_user_snr_db, bandwidth_hz, mobility_mps,
    mobility_class, positions_m)``.
    """
    bandwidth = float(rng.choice(np.asarray(cfg.bandwidth_choices_hz, dtype=float)))
    mobility_class = int(rng.integers(0, len(cfg.mobility_classes_mps)))
    v_lo, v_hi = cfg.mobility_classes_mps[mobility_class]
    delay_target = float(rng.uniform(*cfg.delay_spread_range_s))
    u_lo, u_hi = cfg.user_count_range
    n_users = int(rng.integers(u_lo, u_hi + 1))

    radius = cfg.cell_radius_m * np.sqrt(rng.uniform(0.0, 1.0, n_users))
    angle = rng.uniform(0.0, 2 * np.pi, n_users)
    positions = np.stack([radius * np.cos(angle), radius * np.sin(angle)], axis=1)

    speeds = rng.uniform(v_lo, v_hi, n_users)
    path_sets = [_sample_path_set(rng, cfg, delay_target, float(v)) for v in speeds]
    snr_db = rng.uniform(*cfg.snr_db_range, n_users)
    mobility = float(np.mean(speeds))
    return path_sets, snr_db, bandwidth, mobility, mobility_class, positions


def derive_descriptors(path_sets, per_user_snr_db) -> CellDescriptors:
    """Cell descriptors: mean linear SNR and mean RMS spreads over users."""
    if not path_sets:
        raise ValueError("need at least one user path set")
    snr_lin = np.mean(10.0 ** (np.asarray(per_user_snr_db, dtype=float) / 10.0))
    tau = np.mean([ps.rms_delay_spread() for ps in path_sets])
    nu = np.mean([ps.rms_doppler_spread() for ps in path_sets])
    return CellDescriptors(float(snr_lin), float(tau), float(nu))


def sample_scenario(seed: int, cfg: ScenarioConfig, scenario_id: int = 0) -> Scenario:
    """Deterministically realize one scenario from its seed."""
    rng = child_rng(seed, "scenario")
    mix = sample_demand_mix(rng)
    path_sets, snr_db, bandwidth, mobility, mclass, positions = sample_channel(rng, cfg)
    descriptors = derive_descriptors(path_sets, snr_db)
    return Scenario(
        scenario_id=scenario_id,
        seed=seed,
        mix=mix,
        descriptors=descriptors,
        bandwidth_hz=bandwidth,
        mobility_mps=mobility,
        mobility_class=mclass,
        carrier_hz=cfg.carrier_hz,
        n_users=len(path_sets),
        positions_m=positions,
        path_sets=path_sets,
        per_user_snr_db=np.asarray(snr_db, dtype=float),
    )


def build_feature_vector(scenario: Scenario) -> np.ndarray:
    """The 8 features, in the documented order and units."""
    return np.array(
        [
            scenario.mix.rho_s,
            scenario.mix.rho_c,
            scenario.mix.rho_sc,
            scenario.descriptors.snr_db,
            scenario.descriptors.delay_spread_s,
            scenario.descriptors.doppler_spread_hz,
            scenario.bandwidth_hz,
            scenario.mobility_mps,
        ]
    )
