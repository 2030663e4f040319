"""
Módulo de entrenamiento: descenso de gradiente sobre la pérdida dinámica,
registro de trazas y detección de inestabilidades.

Classes:
    TrainConfig: Parámetros de una ejecución.
    TrainTrace: Registro por paso y con paso de una ejecución.

Examples:
    >>> from dynloss.training import TrainConfig, train
    >>> final, trace = train(params, train_set, val_set, config)
    >>> trace.summary()["threshold_estimate"]
"""

from .instability import (
    DEFAULT_JUMP_THRESHOLD,
    alternation_fraction,
    descent_fraction,
    detect_instabilities,
    eigenvalue_crossings,
    fraction_above_threshold,
)
from .trace_io import trace_to_frame, write_json, write_summary_json, write_trace_csv
from .trainer import TrainConfig, TrainTrace, train

__all__ = [
    "DEFAULT_JUMP_THRESHOLD",
    "TrainConfig",
    "TrainTrace",
    "alternation_fraction",
    "descent_fraction",
    "detect_instabilities",
    "eigenvalue_crossings",
    "fraction_above_threshold",
    "trace_to_frame",
    "train",
    "write_json",
    "write_summary_json",
    "write_trace_csv",
]
