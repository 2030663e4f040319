"""
Serialización de :class:`TrainTrace` a CSV (una fila por paso) y JSON.

Columnas del CSV: ``step, loss, delta_loss, train_acc, val_acc,
gamma_0..gamma_{C-1}, hessian_eig_1..hessian_eig_k, ntk_top_eig``. Las columnas
con paso quedan vacías en los pasos sin registro.
"""

import json
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np
import pandas as pd  # type: ignore

from ..exceptions import ArtifactIOError
from .trainer import TrainTrace

PathLike = Union[str, Path]


def trace_to_frame(trace: TrainTrace) -> pd.DataFrame:
    """
    Convierte la traza en un ``DataFrame`` con una fila por paso ejecutado.
    """
    steps = np.arange(trace.steps_run)
    frame = pd.DataFrame(
        {
            "step": steps,
            "loss": trace.loss,
            "delta_loss": trace.delta_loss,
            "train_acc": trace.train_accuracy,
        }
    )
    val = pd.Series(trace.val_accuracy, index=trace.val_steps, dtype=np.float64)
    frame["val_acc"] = val.reindex(steps).to_numpy()
    for i in range(trace.gamma.shape[1] if trace.gamma.ndim == 2 else 0):
        frame[f"gamma_{i}"] = trace.gamma[:, i]
    k = trace.hessian_top_eigs.shape[1] if trace.hessian_top_eigs.ndim == 2 else 0
    spectra = pd.DataFrame(
        trace.hessian_top_eigs.reshape(len(trace.spectra_steps), k),
        index=trace.spectra_steps,
        columns=[f"hessian_eig_{i + 1}" for i in range(k)],
    )
    spectra["ntk_top_eig"] = trace.ntk_top_eig
    spectra = spectra.reindex(steps)
    for column in spectra.columns:
        frame[column] = spectra[column].to_numpy()
    return frame


def write_trace_csv(trace: TrainTrace, path: PathLike) -> Path:
    """
    Escribe la traza en CSV con precisión doble completa.

    :raises ArtifactIOError: Si no se puede escribir.
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        trace_to_frame(trace).to_csv(
            path, index=False, na_rep="", float_format="%.17g", lineterminator="\n"
        )
    except OSError as e:
        raise ArtifactIOError(f"cannot write trace to {path}: {e}", path=str(path)) from e
    return path


def write_json(payload: Dict[str, Any], path: PathLike) -> Path:
    """
    Escribe un diccionario como JSON ordenado e indentado.

    :raises ArtifactIOError: Si no se puede escribir.
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    except OSError as e:
        raise ArtifactIOError(f"cannot write {path}: {e}", path=str(path)) from e
    return path


def write_summary_json(trace: TrainTrace, path: PathLike) -> Path:
    """Escribe :meth:`TrainTrace.summary` como JSON."""
    return write_json(trace.summary(), path)
