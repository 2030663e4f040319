"""
Módulo de barridos: diagramas de fase ``(T, A)`` y escalado del umbral con ``eta``.

Classes:
    RunState, SweepMetrics: Ciclo de vida y métricas de las ejecuciones.
    RunTemplate: Parámetros comunes de un barrido.
    PhaseDiagram, ThresholdScan: Resultados agregados.

Examples:
    >>> from dynloss.sweep import phase_diagram, RunTemplate
    >>> diagram = phase_diagram([200], [1, 10], RunTemplate(), n_seeds=4, jobs=4)
    >>> diagram.to_long_frame().columns.tolist()
    ['T', 'A', 'seed', 'train_acc', 'val_acc']
"""

from .phase import (
    DEFAULT_A_VALUES,
    DEFAULT_N_SEEDS,
    DEFAULT_T_VALUES,
    PHASE_COLUMNS,
    PhaseDiagram,
    phase_diagram,
    phase_tasks,
    write_phase_csv,
)
from .runner import (
    RunResult,
    RunState,
    RunTask,
    RunTemplate,
    SweepMetrics,
    default_jobs,
    execute_tasks,
    run_cell,
    train_from_seed,
)
from .threshold import (
    DEFAULT_ETA_VALUES,
    ScanOutcome,
    ScanTask,
    THRESHOLD_COLUMNS,
    ThresholdPoint,
    ThresholdScan,
    rescaled_protocol,
    run_scan_task,
    threshold_scan,
    write_threshold_csv,
)

__all__ = [
    "DEFAULT_A_VALUES",
    "DEFAULT_ETA_VALUES",
    "DEFAULT_N_SEEDS",
    "DEFAULT_T_VALUES",
    "PHASE_COLUMNS",
    "PhaseDiagram",
    "RunResult",
    "RunState",
    "RunTask",
    "RunTemplate",
    "ScanOutcome",
    "ScanTask",
    "THRESHOLD_COLUMNS",
    "SweepMetrics",
    "ThresholdPoint",
    "ThresholdScan",
    "default_jobs",
    "execute_tasks",
    "phase_diagram",
    "phase_tasks",
    "rescaled_protocol",
    "run_cell",
    "run_scan_task",
    "threshold_scan",
    "train_from_seed",
    "write_phase_csv",
    "write_threshold_csv",
]
