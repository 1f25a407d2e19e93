"""End-to-end labeled dataset generation, persistence, and splits.

Samples are written as JSON lines with floats rendered at 17 significant
digits, which round-trips float64 exactly, so regenerating or re-reading a
file is byte-stable. A sidecar manifest records the sample count, config
hash, master seed, and the waveform index legend.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from isacsel import metrics, objectives, pareto
from isacsel.config import SimConfig, config_hash
from isacsel.scenario import build_feature_vector, sample_scenario
from isacsel.seeding import derive_seed
from isacsel.waveforms import WAVEFORM_NAMES


@dataclass
class LabeledSample:
    scenario_id: int
    seed: int
    features: np.ndarray  # (8,)
    objectives: np.ndarray  # (K, 3) demand-weighted vectors
    labels: np.ndarray  # (K,) binary
    pareto_size: int


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def sample_to_json(s: LabeledSample) -> str:
    return (
        "{"
        f'"id": {s.scenario_id}, '
        f'"seed": {s.seed}, '
        f'"features": [{", ".join(_fmt(v) for v in s.features)}], '
        f'"objectives": [{", ".join("[" + ", ".join(_fmt(v) for v in row) + "]" for row in s.objectives)}], '
        f'"labels": [{", ".join(str(int(v)) for v in s.labels)}], '
        f'"pareto_size": {s.pareto_size}'
        "}"
    )


def sample_from_json(line: str) -> LabeledSample:
    d = json.loads(line)
    return LabeledSample(
        scenario_id=int(d["id"]),
        seed=int(d["seed"]),
        features=np.asarray(d["features"], dtype=float),
        objectives=np.asarray(d["objectives"], dtype=float),
        labels=np.asarray(d["labels"], dtype=np.int8),
        pareto_size=int(d["pareto_size"]),
    )


def build_sample(index: int, master_seed: int, config: SimConfig) -> LabeledSample:
    """Scenario -> K waveform evaluations -> objectives -> epsilon-Pareto label."""
    seed = derive_seed(master_seed, index)
    scn = sample_scenario(seed, config.scenario, scenario_id=index)
    sensing, comm, joint = metrics.measure_all(scn, config)
    vecs = objectives.objective_vectors(sensing, comm, joint, scn.mix, config.objectives)
    labels, _, kept = pareto.label_waveforms(vecs, config.pareto.epsilon)
    return LabeledSample(
        scenario_id=index,
        seed=seed,
        features=build_feature_vector(scn),
        objectives=vecs,
        labels=labels,
        pareto_size=len(kept),
    )


_WORKER_CFG: SimConfig | None = None
_WORKER_SEED = 0


def _worker_init(config_values, master_seed):
    global _WORKER_CFG, _WORKER_SEED
    from isacsel.config import config_from_dict

    _WORKER_CFG = config_from_dict(config_values)
    _WORKER_SEED = master_seed


def _worker_build(index: int) -> str:
    return sample_to_json(build_sample(index, _WORKER_SEED, _WORKER_CFG))


def generate(
    config: SimConfig,
    n: int,
    master_seed: int,
    out_path,
    workers: int = 1,
    progress=None,
) -> Path:
    """Generate ``n`` labeled samples and write JSONL plus a manifest.

    Output is written in index order whatever the worker count, and each
    sample depends only on (master_seed, index, config), so the file bytes
    are reproducible for any scheduling.
    """
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    lines = []
    if workers <= 1:
        for i in range(n):
            lines.append(_worker_build_local(i, master_seed, config))
            if progress:
                progress(i + 1, n)
    else:
        from isacsel.config import config_to_dict

        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=_worker_init,
            initargs=(config_to_dict(config), master_seed),
        ) as pool:
            for i, line in enumerate(pool.map(_worker_build, range(n), chunksize=8)):
                lines.append(line)
                if progress:
                    progress(i + 1, n)
    with open(out_path, "w") as fh:
        for line in lines:
            fh.write(line + "\n")
    write_manifest(out_path, config, n, master_seed)
    return out_path


def _worker_build_local(index, master_seed, config):
    return sample_to_json(build_sample(index, master_seed, config))


def manifest_path(dataset_path) -> Path:
    p = Path(dataset_path)
    return p.with_name(p.name + ".manifest.json")


def write_manifest(dataset_path, config: SimConfig, n: int, master_seed: int) -> Path:
    split_sizes = split_sizes_for(n, config.dataset.split_fractions)
    manifest = {
        "samples": n,
        "split_sizes": list(split_sizes),
        "config_hash": config_hash(config),
        "master_seed": master_seed,
        "waveforms": list(WAVEFORM_NAMES),
    }
    path = manifest_path(dataset_path)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def load(dataset_path) -> list:
    with open(dataset_path) as fh:
        return [sample_from_json(line) for line in fh if line.strip()]


def split_sizes_for(n: int, fractions) -> tuple:
    """Integer split sizes honoring the fractions; remainder goes to train."""
    val = int(round(n * fractions[1]))
    test = int(round(n * fractions[2]))
    train = n - val - test
    if min(train, val, test) < 0:
        raise ValueError(f"split fractions {fractions} do not fit n={n}")
    return train, val, test


def split(samples: list, sizes, seed: int) -> tuple:
    """Disjoint, seed-deterministic shuffle split into (train, val, test)."""
    if sum(sizes) != len(samples):
        raise ValueError(f"split sizes {tuple(sizes)} do not sum to {len(samples)}")
    order = np.random.default_rng(seed).permutation(len(samples))
    train_n, val_n, _ = sizes
    pick = lambda idx: [samples[i] for i in idx]
    return (
        pick(order[:train_n]),
        pick(order[train_n : train_n + val_n]),
        pick(order[train_n + val_n :]),
    )


def feature_matrix(samples: list) -> np.ndarray:
    return np.stack([s.features for s in samples])


def label_matrix(samples: list) -> np.ndarray:
    return np.stack([s.labels for s in samples]).astype(np.int8)


def objective_tensor(samples: list) -> np.ndarray:
    return np.stack([s.objectives for s in samples])


def inclusion_ratios(samples: list) -> np.ndarray:
    """Per-waveform fraction of scenarios whose label includes it."""
    if not samples:
        raise ValueError("empty dataset")
    return label_matrix(samples).mean(axis=0)


def mean_pareto_size(samples: list) -> float:
    return float(np.mean([s.pareto_size for s in samples]))


def verify_labels(samples: list, epsilon: float) -> bool:
    """Audit: relabeling the stored objective vectors reproduces the labels."""
    for s in samples:
        labels, _, kept = pareto.label_waveforms(s.objectives, epsilon)
        if not np.array_equal(labels, s.labels) or len(kept) != s.pareto_size:
            return False
    return True


def summary(samples: list) -> dict:
    ratios = inclusion_ratios(samples)
    sizes = np.array([s.pareto_size for s in samples])
    return {
        "samples": len(samples),
        "mean_pareto_size": float(sizes.mean()),
        "median_pareto_size": float(np.median(sizes)),
        "inclusion_ratios": {name: float(r) for name, r in zip(WAVEFORM_NAMES, ratios)},
    }
