"""Multi-label learners mapping scenario features to Pareto label vectors.

Three model kinds share one interface: a fitted model standardizes its
input with training-split statistics and emits K confidence scores in
[0, 1]. All three are implemented here directly (numpy only) so that
training is deterministic given a seed and the internals the test suite
leans on (analytic MLP gradients, per-tree vote fractions, staged boosting
losses) stay inspectable.
"""

from isacsel.learn.base import (
    MODEL_KINDS,
    FeatureStandardizer,
    TrainedModel,
    fit,
    load_model,
    predict_scores,
    predict_set,
    save_model,
)

__all__ = [
    "MODEL_KINDS",
    "FeatureStandardizer",
    "TrainedModel",
    "fit",
    "load_model",
    "predict_scores",
    "predict_set",
    "save_model",
]
