"""Sparse log-linear argument identification."""

from .decode import beam_search, decode, role_options, role_order
from .features import (
    NULL_SPAN,
    FeatureExtractor,
    FeatureVector,
    TemplateConfig,
    extract_features,
    feature_id,
)
from .hierarchy import hierarchy_expand
from .model import (
    Model,
    TrainInstance,
    adadelta_step,
    instance_loss,
    objective,
    regularize_step,
    score,
    train,
)
from .pipeline import InstanceReport, make_instances, predict, predict_annoset, target_span

__all__ = [
    "NULL_SPAN", "FeatureExtractor", "FeatureVector", "InstanceReport", "Model", "TemplateConfig",
    "TrainInstance", "adadelta_step", "beam_search", "decode", "extract_features", "feature_id",
    "hierarchy_expand", "instance_loss", "make_instances", "objective", "predict",
    "predict_annoset", "regularize_step", "role_options", "role_order", "score", "target_span",
    "train",
]
