"""
Diagramas de fase ``(T, A)``: exactitud final media por celda.
"""

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd  # type: ignore

from ..exceptions import ArtifactIOError, ConfigError
from ..seeding import derive_seed
from .runner import (
    RunResult,
    RunState,
    RunTask,
    RunTemplate,
    SweepMetrics,
    execute_tasks,
    run_cell,
)

_logger = logging.getLogger("dynloss.sweep")

PathLike = Union[str, Path]

DEFAULT_T_VALUES = (50, 100, 200, 300, 500, 700, 1000, 2000, 5000)
DEFAULT_A_VALUES = (1, 2, 5, 10, 20, 30, 50, 70, 100)
DEFAULT_N_SEEDS = 10
PHASE_COLUMNS = ["T", "A", "seed", "train_acc", "val_acc"]


@dataclass
class PhaseDiagram:
    """
    Resultados de un diagrama de fase.

    :ivar T_values: Periodos del eje ``T``.
    :ivar A_values: Amplitudes del eje ``A``.
    :ivar n_seeds: Réplicas por celda.
    :ivar results: Un :class:`RunResult` por ejecución, ordenado por
        ``(T, A, réplica)``.
    """

    T_values: List[int]
    A_values: List[float]
    n_seeds: int
    results: List[RunResult] = field(default_factory=list)
    metrics: SweepMetrics = field(default_factory=SweepMetrics)

    def to_long_frame(self) -> pd.DataFrame:
        """Formato largo ``T, A, seed, train_acc, val_acc``."""
        return pd.DataFrame(
            [
                (r.period, r.amplitude, r.seed, r.train_acc, r.val_acc)
                for r in self.results
            ],
            columns=PHASE_COLUMNS,
        )

    def aggregate(self) -> pd.DataFrame:
        """
        Media, desviación típica y error estándar por celda.

        Las ejecuciones fallidas (``FAILED``) se excluyen; las divergentes
        cuentan con exactitud 0. Las bandas ``media ± sd`` se recortan a
        ``[0, 1]``.
        """
        rows = []
        for period in self.T_values:
            for amplitude in self.A_values:
                cell = [
                    r for r in self.results
                    if r.period == period and r.amplitude == amplitude
                ]
                valid = [r for r in cell if r.state != RunState.FAILED]
                row: Dict[str, Any] = {
                    "T": period,
                    "A": amplitude,
                    "n": len(valid),
                    "divergent": sum(r.state == RunState.DIVERGED for r in cell),
                    "failed": len(cell) - len(valid),
                }
                for metric in ("train_acc", "val_acc"):
                    values = np.array([getattr(r, metric) for r in valid], dtype=np.float64)
                    mean = float(values.mean()) if values.size else float("nan")
                    sd = float(values.std(ddof=1)) if values.size > 1 else 0.0
                    row[f"{metric}_mean"] = mean
                    row[f"{metric}_sd"] = sd
                    row[f"{metric}_sem"] = sd / np.sqrt(values.size) if values.size else float("nan")
                    row[f"{metric}_low"] = float(np.clip(mean - sd, 0.0, 1.0))
                    row[f"{metric}_high"] = float(np.clip(mean + sd, 0.0, 1.0))
                rows.append(row)
        return pd.DataFrame(rows)

    def mean_grid(self, metric: str = "train_acc") -> np.ndarray:
        """Matriz ``(len(T_values), len(A_values))`` de medias de ``metric``."""
        table = self.aggregate()
        return table[f"{metric}_mean"].to_numpy().reshape(len(self.T_values), len(self.A_values))

    def to_dict(self) -> Dict[str, Any]:
        """Agregado serializable a JSON."""
        cells = [
            {key: _json_value(value) for key, value in record.items()}
            for record in self.aggregate().to_dict(orient="records")
        ]
        return {
            "T_values": list(self.T_values),
            "A_values": list(self.A_values),
            "n_seeds": self.n_seeds,
            "cells": cells,
            "metrics": self.metrics.to_dict(),
        }


def _json_value(value: Any) -> Any:
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value


def _validate_grid(T_values: Sequence[int], A_values: Sequence[float], n_seeds: int) -> None:
    if not T_values or not A_values:
        raise ConfigError("the (T, A) grid must not be empty", key="sweep.T_values")
    if any(int(t) != t or t < 2 for t in T_values):
        raise ConfigError("T must be an integer ≥ 2", key="sweep.T_values")
    if any(not a >= 1 for a in A_values):
        raise ConfigError("A must be ≥ 1", key="sweep.A_values")
    if n_seeds < 1:
        raise ConfigError("n_seeds must be ≥ 1", key="sweep.n_seeds")


def phase_tasks(
    T_values: Sequence[int],
    A_values: Sequence[float],
    template: RunTemplate,
    n_seeds: int,
    seed_base: int = 0,
) -> List[RunTask]:
    """
    Tareas del diagrama; la semilla de cada ejecución es
    ``derive_seed(seed_base, índice_T, índice_A, réplica)``.
    """
    _validate_grid(T_values, A_values, n_seeds)
    return [
        RunTask(
            period=int(period),
            amplitude=float(amplitude),
            replicate=replicate,
            seed=derive_seed(seed_base, ti, ai, replicate),
            template=template,
        )
        for ti, period in enumerate(T_values)
        for ai, amplitude in enumerate(A_values)
        for replicate in range(n_seeds)
    ]


def phase_diagram(
    T_values: Sequence[int] = DEFAULT_T_VALUES,
    A_values: Sequence[float] = DEFAULT_A_VALUES,
    template: Optional[RunTemplate] = None,
    n_seeds: int = DEFAULT_N_SEEDS,
    jobs: int = 1,
    seed_base: int = 0,
    logger: Optional[logging.Logger] = None,
) -> PhaseDiagram:
    """
    Ejecuta el diagrama de fase completo.

    Cada celda ejecuta ``n_seeds`` entrenamientos independientes con las
    oscilaciones detenidas durante el último periodo. Los resultados no
    dependen del orden de ejecución ni de ``jobs``.

    :param T_values: Eje de periodos.
    :param A_values: Eje de amplitudes (la fila ``A = 1`` es la referencia estática).
    :param template: Parámetros comunes (por defecto :class:`RunTemplate`).
    :param n_seeds: Réplicas por celda.
    :param jobs: Procesos en paralelo.
    :param seed_base: Semilla raíz.
    :param logger: Logger opcional; por defecto ``dynloss.sweep``.
    :return: :class:`PhaseDiagram`.

    Ejemplo:
    --------
    .. code-block:: python

        diagram = phase_diagram([200], [1, 10], RunTemplate(), n_seeds=20, jobs=8)
        diagram.aggregate()[["T", "A", "train_acc_mean", "val_acc_mean"]]
    """
    log = logger or _logger
    template = template or RunTemplate()
    tasks = phase_tasks(T_values, A_values, template, n_seeds, seed_base)
    log.info(
        f"Phase diagram: {len(T_values)}x{len(A_values)} cells, "
        f"{n_seeds} seeds, {len(tasks)} runs, jobs={jobs}"
    )
    started = time.monotonic()

    def progress(done: int, total: int) -> None:
        if done == total or done % max(total // 10, 1) == 0:
            log.info(f"Phase diagram progress: {done}/{total} runs")

    results = execute_tasks(tasks, run_cell, jobs=jobs, progress_callback=progress)
    diagram = PhaseDiagram(
        T_values=[int(t) for t in T_values],
        A_values=[float(a) for a in A_values],
        n_seeds=n_seeds,
        results=sorted(results, key=RunResult.sort_key),
    )
    for result in diagram.results:
        diagram.metrics.record_run(result.duration, result.state)
        if result.state == RunState.FAILED:
            log.error(
                f"Run T={result.period} A={result.amplitude} seed={result.seed} failed: {result.error}"
            )
        elif result.state == RunState.DIVERGED:
            log.warning(
                f"Run T={result.period} A={result.amplitude} seed={result.seed} "
                f"diverged at step {result.divergence_step}"
            )
    log.info(f"Phase diagram finished in {time.monotonic() - started:.1f}s")
    return diagram


def write_phase_csv(diagram: PhaseDiagram, path: PathLike) -> Path:
    """
    Escribe el formato largo ``T,A,seed,train_acc,val_acc``.

    :raises ArtifactIOError: Si no se puede escribir.
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        diagram.to_long_frame().to_csv(
            path, index=False, float_format="%.17g", lineterminator="\n"
        )
    except OSError as e:
        raise ArtifactIOError(f"cannot write phase table to {path}: {e}", path=str(path)) from e
    return path
