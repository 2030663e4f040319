"""
Ejecución de ejecuciones individuales de un barrido y del pool de workers.

Cada ejecución es independiente: genera sus propios datos y su propia
inicialización a partir de una semilla derivada, entrena y devuelve un
:class:`RunResult`. Los estados y las métricas agregadas siguen el mismo
esquema de ciclo de vida que un job programado.
"""

import logging
import os
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence, TypeVar

from ..data import generate_spiral_pair
from ..exceptions import ConfigError
from ..model import init_params
from ..schedule import OscillationSchedule
from ..seeding import derive_seed
from ..training import TrainConfig, TrainTrace, train

_logger = logging.getLogger("dynloss.sweep")

TaskT = TypeVar("TaskT")
ResultT = TypeVar("ResultT")


class RunState(Enum):
    """
    Estados de una ejecución del barrido.

    Attributes:
        PENDING: Programada, aún no iniciada.
        RUNNING: En ejecución.
        SUCCESS: Terminó sin divergir.
        DIVERGED: La pérdida divergió; la celda cuenta con exactitud 0.
        FAILED: Lanzó una excepción inesperada.
    """

    PENDING = "pending"
    RUNNING = "running"
    SUCCESS = "success"
    DIVERGED = "diverged"
    FAILED = "failed"


@dataclass(frozen=True)
class RunTemplate:
    """
    Parámetros comunes a todas las ejecuciones de un barrido.

    :param width: Unidades ocultas.
    :param n_per_class: Muestras por clase.
    :param num_classes: Número de clases.
    :param noise_sd: Ruido angular del dataset espiral.
    :param learning_rate: Tasa de aprendizaje.
    :param total_steps: Pasos de gradiente.
    :param stop_last_period: Poner ``gamma = 1`` durante el último periodo.
    :param spectra_stride: Paso de registro de espectros (``None`` = sin espectros).
    :param record_ntk: Registrar también el NTK.
    """

    width: int = 100
    n_per_class: int = 100
    num_classes: int = 3
    noise_sd: float = 0.2
    learning_rate: float = 1.0
    total_steps: int = 35000
    stop_last_period: bool = True
    val_stride: int = 100
    divergence_limit: float = 1e6
    spectra_stride: Optional[int] = None
    hessian_top_k: int = 3
    lanczos_iters: int = 60
    record_ntk: bool = False
    jump_threshold: float = 0.1
    log_every: int = 5000

    def __post_init__(self) -> None:
        if self.width < 1:
            raise ConfigError("width must be ≥ 1", key="model.width")
        if self.n_per_class < 1:
            raise ConfigError("n_per_class must be ≥ 1", key="dataset.n_per_class")
        if self.num_classes < 2:
            raise ConfigError("num_classes must be ≥ 2", key="dataset.num_classes")

    def with_overrides(self, **changes: Any) -> "RunTemplate":
        """Copia con algunos campos sustituidos."""
        return replace(self, **changes)

    def stop_step(self, period: int) -> Optional[int]:
        """Paso en que se detienen las oscilaciones (último periodo)."""
        if not self.stop_last_period:
            return None
        return max(self.total_steps - period, 0)

    def train_config(self, period: int, amplitude: float, seed: int) -> TrainConfig:
        """Configuración de entrenamiento para una celda ``(T, A)``."""
        schedule = OscillationSchedule(
            amplitude=amplitude,
            period=period,
            num_classes=self.num_classes,
            stop_step=self.stop_step(period),
        )
        return TrainConfig(
            learning_rate=self.learning_rate,
            total_steps=self.total_steps,
            schedule=schedule,
            spectra_stride=self.spectra_stride,
            hessian_top_k=self.hessian_top_k,
            lanczos_iters=self.lanczos_iters,
            val_stride=self.val_stride,
            seed=seed,
            divergence_limit=self.divergence_limit,
            record_ntk=self.record_ntk,
            jump_threshold=self.jump_threshold,
            log_every=self.log_every,
        )


@dataclass(frozen=True)
class RunTask:
    """Una ejecución concreta: celda ``(T, A)``, réplica y semilla derivada."""

    period: int
    amplitude: float
    replicate: int
    seed: int
    template: RunTemplate


@dataclass
class RunResult:
    """Resultado de una ejecución del barrido."""

    period: int
    amplitude: float
    replicate: int
    seed: int
    state: RunState
    train_acc: float
    val_acc: float
    duration: float
    threshold_estimate: Optional[float] = None
    n_intervals: int = 0
    divergence_step: Optional[int] = None
    error: Optional[str] = None

    def sort_key(self) -> tuple:
        return (self.period, self.amplitude, self.replicate)


class SweepMetrics:
    """
    Contadores y duraciones de las ejecuciones de un barrido.

    Examples:
        >>> metrics = SweepMetrics()
        >>> metrics.record_run(1.5, RunState.SUCCESS)
        >>> metrics.to_dict()["success_rate"]
        1.0
    """

    def __init__(self) -> None:
        self.total_runs = 0
        self.successes = 0
        self.diverged = 0
        self.failures = 0
        self.avg_duration: float = 0.0
        self.total_duration: float = 0.0
        self._durations: List[float] = []

    def record_run(self, duration: float, state: RunState) -> None:
        self.total_runs += 1
        self.total_duration += duration
        if state == RunState.SUCCESS:
            self.successes += 1
            self._durations.append(duration)
            self.avg_duration = sum(self._durations) / len(self._durations)
        elif state == RunState.DIVERGED:
            self.diverged += 1
        elif state == RunState.FAILED:
            self.failures += 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "total_runs": self.total_runs,
            "successes": self.successes,
            "diverged": self.diverged,
            "failures": self.failures,
            "success_rate": self.successes / self.total_runs if self.total_runs > 0 else 0.0,
            "avg_duration": self.avg_duration,
            "total_duration": self.total_duration,
        }


def train_from_seed(
    template: RunTemplate,
    period: int,
    amplitude: float,
    seed: int,
    logger: Optional[logging.Logger] = None,
) -> TrainTrace:
    """
    Genera datos e inicialización a partir de ``seed`` y entrena.

    Datos: ``generate_spiral_pair(..., derive_seed(seed, 0))``.
    Inicialización: ``init_params(..., derive_seed(seed, 1))``.
    """
    train_set, val_set = generate_spiral_pair(
        template.n_per_class, template.num_classes, template.noise_sd, derive_seed(seed, 0)
    )
    params = init_params(template.width, 2, template.num_classes, derive_seed(seed, 1))
    config = template.train_config(period, amplitude, seed)
    _, trace = train(params, train_set, val_set, config, logger=logger)
    return trace


def run_cell(task: RunTask) -> RunResult:
    """
    Ejecuta una tarea y nunca lanza: los errores se devuelven como ``FAILED``.

    Una ejecución divergente se registra con exactitudes 0.
    """
    started = time.monotonic()
    try:
        trace = train_from_seed(task.template, task.period, task.amplitude, task.seed)
    except Exception as e:  # noqa: BLE001
        return RunResult(
            period=task.period,
            amplitude=task.amplitude,
            replicate=task.replicate,
            seed=task.seed,
            state=RunState.FAILED,
            train_acc=float("nan"),
            val_acc=float("nan"),
            duration=time.monotonic() - started,
            error=f"{type(e).__name__}: {e}\n{traceback.format_exc()}",
        )
    diverged = trace.diverged
    return RunResult(
        period=task.period,
        amplitude=task.amplitude,
        replicate=task.replicate,
        seed=task.seed,
        state=RunState.DIVERGED if diverged else RunState.SUCCESS,
        train_acc=0.0 if diverged else trace.final_train_accuracy,
        val_acc=0.0 if diverged else trace.final_val_accuracy,
        duration=time.monotonic() - started,
        threshold_estimate=trace.threshold_estimate,
        n_intervals=len(trace.instability_intervals),
        divergence_step=trace.divergence_step,
    )


def default_jobs() -> int:
    """Número de workers por defecto: núcleos disponibles."""
    return os.cpu_count() or 1


def execute_tasks(
    tasks: Sequence[TaskT],
    worker: Callable[[TaskT], ResultT],
    jobs: int = 1,
    progress_callback: Optional[Callable[[int, int], None]] = None,
) -> List[ResultT]:
    """
    Ejecuta ``worker`` sobre cada tarea y devuelve los resultados en el orden
    de ``tasks``.

    Con ``jobs == 1`` se ejecuta en el proceso actual; en otro caso se usa un
    ``ProcessPoolExecutor`` acotado a ``jobs`` procesos (``worker`` y las
    tareas deben ser serializables con pickle).

    :param progress_callback: Función opcional ``(completadas, total)``.
    """
    if jobs < 1:
        raise ConfigError("jobs must be ≥ 1", key="sweep.jobs")
    total = len(tasks)
    if jobs == 1 or total <= 1:
        results = []
        for done, task in enumerate(tasks, start=1):
            results.append(worker(task))
            if progress_callback:
                progress_callback(done, total)
        return results

    ordered: List[Optional[ResultT]] = [None] * total
    with ProcessPoolExecutor(max_workers=min(jobs, total)) as executor:
        futures = {executor.submit(worker, task): i for i, task in enumerate(tasks)}
        for done, future in enumerate(futures, start=1):
            ordered[futures[future]] = future.result()
            if progress_callback:
                progress_callback(done, total)
    return [result for result in ordered if result is not None]
