"""Run configuration: defaults, JSON loading, validation, and hashing.

A config file is a JSON object whose top-level keys mirror the section
dataclasses below; unknown keys and bad ranges raise :class:`ConfigError`
naming the offending field. The resolved config is written next to every
output for provenance, and its canonical hash goes into dataset manifests.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

N_WAVEFORMS = 5


class ConfigError(ValueError):
    """Invalid or inconsistent configuration."""


@dataclass
class ScenarioConfig:
    """Sampling ranges for network snapshots."""

    snr_db_range: tuple = (0.0, 30.0)
    delay_spread_range_s: tuple = (50e-9, 2e-6)
    mobility_classes_mps: tuple = ((0.0, 3.0), (3.0, 30.0), (30.0, 120.0))
    bandwidth_choices_hz: tuple = (20e6, 50e6, 100e6, 200e6)
    user_count_range: tuple = (10, 50)
    path_count_range: tuple = (2, 6)
    carrier_hz: float = 28e9
    cell_radius_m: float = 500.0


@dataclass
class WaveformConfig:
    """Shared numerology for the five candidates."""

    n_subcarriers: int = 64
    cp_len: int = 16
    qam_order: int = 4
    otfs_delay_bins: int = 8
    otfs_doppler_bins: int = 8
    fmcw_samples_per_chirp: int = 32
    sc_pulse: str = "rect"  # "rect" or "rrc"
    sc_oversample: int = 4
    sc_rrc_beta: float = 0.25
    sc_rrc_span: int = 8


@dataclass
class ChannelConfig:
    sinc_taps: int = 8
    echo_count_range: tuple = (1, 5)


@dataclass
class MetricsConfig:
    """Monte-Carlo depth and plumbing constants, indexed by waveform id."""

    comm_frames: int = 200
    joint_frames: int = 50
    throughput_overhead: tuple = (0.18, 0.18, 0.22, 0.05, 0.10)
    latency_factors: tuple = (1.0, 1.2, 1.8, 0.8, 0.9)
    p_tx_watts: float = 1.0
    papr_backoff_per_db: float = 0.25
    acf_oversample: int = 16


@dataclass
class ObjectivesConfig:
    sensing_weights: tuple = (0.25, 0.25, 0.25, 0.25)
    comm_weights: tuple = (1 / 3, 1 / 3, 1 / 3)
    joint_weights: tuple = (1 / 3, 1 / 3, 1 / 3)


@dataclass
class ParetoConfig:
    epsilon: float = 0.02


@dataclass
class MlpConfig:
    hidden: tuple = (64, 64)
    learning_rate: float = 0.05
    momentum: float = 0.9
    batch_size: int = 64
    max_epochs: int = 300
    patience: int = 20


@dataclass
class ForestConfig:
    n_trees: int = 200
    max_depth: int = 12
    max_features: int = 3
    min_samples_leaf: int = 2


@dataclass
class BoostingConfig:
    n_rounds: int = 200
    max_depth: int = 3
    shrinkage: float = 0.1
    min_samples_leaf: int = 10


@dataclass
class LearnConfig:
    mlp: MlpConfig = field(default_factory=MlpConfig)
    forest: ForestConfig = field(default_factory=ForestConfig)
    boosting: BoostingConfig = field(default_factory=BoostingConfig)
    threshold: float = 0.5
    n_bins: int = 64


@dataclass
class DatasetConfig:
    n_samples: int = 20000
    split_fractions: tuple = (0.70, 0.15, 0.15)


@dataclass
class MapsConfig:
    resolution: int = 50


@dataclass
class SimConfig:
    """Root configuration for the whole pipeline."""

    master_seed: int = 1234
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    waveform: WaveformConfig = field(default_factory=WaveformConfig)
    channel: ChannelConfig = field(default_factory=ChannelConfig)
    metrics: MetricsConfig = field(default_factory=MetricsConfig)
    objectives: ObjectivesConfig = field(default_factory=ObjectivesConfig)
    pareto: ParetoConfig = field(default_factory=ParetoConfig)
    learn: LearnConfig = field(default_factory=LearnConfig)
    dataset: DatasetConfig = field(default_factory=DatasetConfig)
    maps: MapsConfig = field(default_factory=MapsConfig)


def _update_dataclass(obj, values: dict, path: str):
    for key, val in values.items():
        if not hasattr(obj, key):
            raise ConfigError(f"unknown config field '{path}{key}'")
        current = getattr(obj, key)
        if dataclasses.is_dataclass(current):
            if not isinstance(val, dict):
                raise ConfigError(f"config field '{path}{key}' must be an object")
            _update_dataclass(current, val, f"{path}{key}.")
        elif isinstance(current, tuple):
            setattr(obj, key, _as_tuple(val))
        else:
            setattr(obj, key, type(current)(val))
    return obj


def _as_tuple(val):
    if not isinstance(val, (list, tuple)):
        raise ConfigError(f"expected a list, got {val!r}")
    return tuple(_as_tuple(v) if isinstance(v, (list, tuple)) else v for v in val)


def config_from_dict(values: dict) -> SimConfig:
    cfg = SimConfig()
    _update_dataclass(cfg, values, "")
    validate_config(cfg)
    return cfg


def load_config(path) -> SimConfig:
    """Load a JSON config file and merge it over the defaults."""
    try:
        values = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}")
    if not isinstance(values, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return config_from_dict(values)


def _check_range(name, rng, integer=False):
    if len(rng) != 2 or rng[0] > rng[1]:
        raise ConfigError(f"'{name}' must be (min, max) with min <= max, got {rng}")
    if integer and any(int(v) != v for v in rng):
        raise ConfigError(f"'{name}' must hold integers, got {rng}")


def _check_weights(name, weights, count):
    if len(weights) != count:
        raise ConfigError(f"'{name}' must hold {count} weights")
    if any(w < 0 for w in weights):
        raise ConfigError(f"'{name}' weights must be nonnegative")
    if abs(sum(weights) - 1.0) > 1e-9:
        raise ConfigError(f"'{name}' weights must sum to 1, got sum {sum(weights)}")


def validate_config(cfg: SimConfig) -> None:
    sc = cfg.scenario
    _check_range("scenario.snr_db_range", sc.snr_db_range)
    _check_range("scenario.delay_spread_range_s", sc.delay_spread_range_s)
    _check_range("scenario.user_count_range", sc.user_count_range, integer=True)
    _check_range("scenario.path_count_range", sc.path_count_range, integer=True)
    if sc.path_count_range[0] < 1:
        raise ConfigError("'scenario.path_count_range' minimum must be >= 1")
    if not sc.mobility_classes_mps:
        raise ConfigError("'scenario.mobility_classes_mps' must not be empty")
    for i, cls in enumerate(sc.mobility_classes_mps):
        _check_range(f"scenario.mobility_classes_mps[{i}]", cls)
    if not sc.bandwidth_choices_hz or any(b <= 0 for b in sc.bandwidth_choices_hz):
        raise ConfigError("'scenario.bandwidth_choices_hz' must hold positive values")
    if sc.carrier_hz <= 0:
        raise ConfigError("'scenario.carrier_hz' must be positive")

    wf = cfg.waveform
    n = wf.n_subcarriers
    if n < 2 or (n & (n - 1)) != 0:
        raise ConfigError("'waveform.n_subcarriers' must be a power of two >= 2")
    if wf.cp_len < 0:
        raise ConfigError("'waveform.cp_len' must be >= 0")
    m = wf.qam_order
    if m < 2 or (m & (m - 1)) != 0 or (m != 2 and int(m**0.5) ** 2 != m):
        raise ConfigError("'waveform.qam_order' must be 2 or a square power of two")
    if wf.otfs_delay_bins > 16 or wf.otfs_doppler_bins > 16:
        raise ConfigError("'waveform.otfs_*_bins' capped at 16 (block MMSE cost)")
    if wf.otfs_delay_bins < 1 or wf.otfs_doppler_bins < 1:
        raise ConfigError("'waveform.otfs_*_bins' must be >= 1")
    if wf.fmcw_samples_per_chirp < 4:
        raise ConfigError("'waveform.fmcw_samples_per_chirp' must be >= 4")
    if wf.sc_pulse not in ("rect", "rrc"):
        raise ConfigError("'waveform.sc_pulse' must be 'rect' or 'rrc'")

    if cfg.channel.sinc_taps < 2 or cfg.channel.sinc_taps % 2:
        raise ConfigError("'channel.sinc_taps' must be a positive even number")
    _check_range("channel.echo_count_range", cfg.channel.echo_count_range, integer=True)

    mt = cfg.metrics
    if mt.comm_frames < 1 or mt.joint_frames < 1:
        raise ConfigError("'metrics.*_frames' must be >= 1")
    if len(mt.throughput_overhead) != N_WAVEFORMS:
        raise ConfigError(f"'metrics.throughput_overhead' must hold {N_WAVEFORMS} values")
    if any(not 0 <= o < 1 for o in mt.throughput_overhead):
        raise ConfigError("'metrics.throughput_overhead' entries must lie in [0, 1)")
    if len(mt.latency_factors) != N_WAVEFORMS:
        raise ConfigError(f"'metrics.latency_factors' must hold {N_WAVEFORMS} values")
    if any(f <= 0 for f in mt.latency_factors):
        raise ConfigError("'metrics.latency_factors' entries must be positive")

    _check_weights("objectives.sensing_weights", cfg.objectives.sensing_weights, 4)
    _check_weights("objectives.comm_weights", cfg.objectives.comm_weights, 3)
    _check_weights("objectives.joint_weights", cfg.objectives.joint_weights, 3)

    if cfg.pareto.epsilon < 0:
        raise ConfigError("'pareto.epsilon' must be >= 0")
    if not 0 < cfg.learn.threshold < 1:
        raise ConfigError("'learn.threshold' must lie in (0, 1)")
    if cfg.dataset.n_samples < 1:
        raise ConfigError("'dataset.n_samples' must be >= 1")
    fr = cfg.dataset.split_fractions
    if len(fr) != 3 or any(f < 0 for f in fr) or abs(sum(fr) - 1.0) > 1e-9:
        raise ConfigError("'dataset.split_fractions' must be 3 nonnegative values summing to 1")
    if cfg.maps.resolution < 1:
        raise ConfigError("'maps.resolution' must be >= 1")


def config_to_dict(cfg: SimConfig) -> dict:
    return dataclasses.asdict(cfg)


def config_json(cfg: SimConfig) -> str:
    """Canonical JSON text (sorted keys), used for hashing and sidecars."""
    return json.dumps(config_to_dict(cfg), sort_keys=True, indent=2) + "\n"


def config_hash(cfg: SimConfig) -> str:
    return hashlib.sha256(config_json(cfg).encode("ascii")).hexdigest()


def write_resolved_config(cfg: SimConfig, out_dir) -> Path:
    path = Path(out_dir) / "resolved_config.json"
    path.write_text(config_json(cfg))
    return path
