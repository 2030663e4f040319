"""
Descenso de gradiente de lote completo sobre la pérdida dinámica.

En cada paso ``t`` se evalúan pérdida, exactitud y gradiente en ``w_t`` con
los pesos ``gamma(t)`` y después se actualiza ``w_{t+1} = w_t - eta grad``.
Cada ``spectra_stride`` pasos se registran los ``k`` autovalores mayores de la
Hessiana (Lanczos) y el mayor autovalor del NTK, ambos en ``w_t``.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..data import Dataset
from ..exceptions import ConfigError, MemoryBudgetError, TrainingDivergedError
from ..model import MlpParams, accuracy, accuracy_from_logits, loss_and_grad, output_jacobian
from ..schedule import OscillationSchedule, weights
from ..seeding import derive_seed
from ..spectral import DEFAULT_LANCZOS_ITERS, hessian_top_k, ntk_top_eigenvalue
from .instability import (
    DEFAULT_JUMP_THRESHOLD,
    Interval,
    alternation_fraction,
    detect_instabilities,
    eigenvalue_crossings,
)

_logger = logging.getLogger("dynloss.training")


@dataclass(frozen=True)
class TrainConfig:
    """
    Configuración de una ejecución de entrenamiento.

    :param learning_rate: Tasa de aprendizaje ``eta`` (``> 0``).
    :param total_steps: Pasos de gradiente (``≥ 0``; ``0`` devuelve los
        parámetros iniciales).
    :param schedule: Horario de pesos por clase.
    :param spectra_stride: Cada cuántos pasos se registran los espectros
        (``None`` desactiva el registro).
    :param hessian_top_k: Autovalores de la Hessiana por registro.
    :param lanczos_iters: Iteraciones de Lanczos por registro.
    :param val_stride: Cada cuántos pasos se mide la exactitud de validación.
    :param seed: Semilla de los vectores iniciales de Lanczos.
    :param divergence_limit: Pérdida por encima de la cual se aborta.
    :param record_ntk: Registrar el mayor autovalor del NTK.
    :param jump_threshold: Salto de ``lambda_max`` que abre un intervalo.
    :param log_every: Cada cuántos pasos se emite una línea de progreso.
    """

    learning_rate: float
    total_steps: int
    schedule: OscillationSchedule
    spectra_stride: Optional[int] = None
    hessian_top_k: int = 3
    lanczos_iters: int = DEFAULT_LANCZOS_ITERS
    val_stride: int = 100
    seed: int = 0
    divergence_limit: float = 1e6
    record_ntk: bool = True
    jump_threshold: float = DEFAULT_JUMP_THRESHOLD
    log_every: int = 5000

    def __post_init__(self) -> None:
        if not self.learning_rate > 0:
            raise ConfigError("eta must be > 0", key="train.eta")
        if self.total_steps < 0:
            raise ConfigError("steps must be ≥ 0", key="train.steps")
        if self.spectra_stride is not None and self.spectra_stride < 1:
            raise ConfigError("spectra stride must be ≥ 1", key="spectra.stride")
        if self.hessian_top_k < 1:
            raise ConfigError("top_k must be ≥ 1", key="spectra.top_k")
        if self.lanczos_iters < self.hessian_top_k:
            raise ConfigError("lanczos_iters must be ≥ top_k", key="spectra.lanczos_iters")
        if self.val_stride < 1:
            raise ConfigError("val stride must be ≥ 1", key="train.val_stride")
        if not self.divergence_limit > 0:
            raise ConfigError("divergence limit must be > 0", key="train.divergence_limit")
        if self.log_every < 1:
            raise ConfigError("log_every must be ≥ 1", key="train.log_every")


@dataclass
class TrainTrace:
    """
    Registro de una ejecución.

    Arrays por paso (longitud = pasos ejecutados): ``loss``, ``delta_loss``
    (``NaN`` en el paso 0), ``train_accuracy`` y ``gamma`` (``(pasos, C)``).
    Arrays con paso: ``val_steps``/``val_accuracy`` y
    ``spectra_steps``/``hessian_top_eigs`` (``(registros, k)``)/``ntk_top_eig``.
    """

    learning_rate: float
    spectra_stride: Optional[int]
    loss: np.ndarray
    delta_loss: np.ndarray
    train_accuracy: np.ndarray
    gamma: np.ndarray
    val_steps: np.ndarray
    val_accuracy: np.ndarray
    spectra_steps: np.ndarray
    hessian_top_eigs: np.ndarray
    ntk_top_eig: np.ndarray
    instability_intervals: List[Interval] = field(default_factory=list)
    threshold_estimate: Optional[float] = None
    diverged: bool = False
    divergence_step: Optional[int] = None
    final_train_accuracy: float = float("nan")
    final_val_accuracy: float = float("nan")

    @property
    def steps_run(self) -> int:
        return int(self.loss.shape[0])

    @property
    def hessian_top(self) -> np.ndarray:
        """Serie de ``lambda_max`` de la Hessiana."""
        if self.hessian_top_eigs.size == 0:
            return np.empty(0)
        return self.hessian_top_eigs[:, 0]

    def raise_if_diverged(self) -> None:
        """
        Modo estricto: convierte una divergencia registrada en excepción.

        :raises TrainingDivergedError: Si la ejecución divergió.
        """
        if self.diverged:
            raise TrainingDivergedError(
                f"training diverged at step {self.divergence_step}", step=int(self.divergence_step or 0)
            )

    def summary(self) -> Dict[str, Any]:
        """
        Resumen serializable a JSON.

        Ejemplo:
        --------
        .. code-block:: python

            json.dumps(trace.summary(), indent=2)
        """
        crossings: List[List[int]] = []
        if self.threshold_estimate is not None and self.hessian_top_eigs.size:
            crossings = eigenvalue_crossings(
                self.hessian_top_eigs, self.spectra_steps, self.threshold_estimate
            )
        return {
            "learning_rate": self.learning_rate,
            "spectra_stride": self.spectra_stride,
            "steps_run": self.steps_run,
            "final_loss": _finite_or_none(self.loss[-1]) if self.steps_run else None,
            "final_train_accuracy": _finite_or_none(self.final_train_accuracy),
            "final_val_accuracy": _finite_or_none(self.final_val_accuracy),
            "diverged": self.diverged,
            "divergence_step": self.divergence_step,
            "instability_intervals": [list(interval) for interval in self.instability_intervals],
            "threshold_estimate": self.threshold_estimate,
            "alternation_fractions": [
                alternation_fraction(self.delta_loss, start, end)
                for start, end in self.instability_intervals
            ],
            "hessian_crossings": crossings,
        }


def _finite_or_none(value: float) -> Optional[float]:
    value = float(value)
    return value if np.isfinite(value) else None


def _check_datasets(params: MlpParams, train_set: Dataset, val_set: Dataset, config: TrainConfig) -> None:
    if train_set.num_classes != val_set.num_classes:
        raise ConfigError("train and validation sets must share C")
    if train_set.in_dim != val_set.in_dim:
        raise ConfigError("train and validation sets must share the feature dimension")
    if config.schedule.num_classes != train_set.num_classes:
        raise ConfigError("schedule C does not match the dataset", key="dataset.num_classes")
    if params.num_classes != train_set.num_classes or params.in_dim != train_set.in_dim:
        raise ConfigError("params do not match the dataset shape", key="model.width")


def train(
    params: MlpParams,
    train_set: Dataset,
    val_set: Dataset,
    config: TrainConfig,
    logger: Optional[logging.Logger] = None,
) -> Tuple[MlpParams, TrainTrace]:
    """
    Entrena la red con descenso de gradiente de lote completo.

    La ejecución es determinista. Si la pérdida deja de ser finita o supera
    ``divergence_limit`` se detiene, la traza conserva los pasos previos y se
    marca ``diverged`` con el paso correspondiente; no se lanza excepción.

    :param params: Parámetros iniciales (no se modifican).
    :param train_set: Datos de entrenamiento.
    :param val_set: Datos de validación.
    :param config: Configuración de la ejecución.
    :param logger: Logger opcional; por defecto ``dynloss.training``.
    :return: Tupla ``(params finales, traza)``.

    Ejemplo:
    --------
    .. code-block:: python

        schedule = OscillationSchedule(amplitude=70, period=5000, num_classes=3)
        config = TrainConfig(learning_rate=1.0, total_steps=70000,
                             schedule=schedule, spectra_stride=50)
        final, trace = train(init_params(100, 2, 3, seed=0), train_set, val_set, config)
    """
    log = logger or _logger
    _check_datasets(params, train_set, val_set, config)
    current = params.copy()
    steps = config.total_steps
    num_classes = train_set.num_classes
    stride = config.spectra_stride
    n_records = 0 if stride is None else (steps + stride - 1) // stride

    loss = np.full(steps, np.nan)
    train_acc = np.full(steps, np.nan)
    gamma_trace = np.full((steps, num_classes), np.nan)
    val_steps: List[int] = []
    val_acc: List[float] = []
    spectra_steps: List[int] = []
    hessian_eigs = np.full((n_records, config.hessian_top_k), np.nan)
    ntk_eigs = np.full(n_records, np.nan)
    record_ntk = config.record_ntk

    diverged = False
    divergence_step: Optional[int] = None
    started = time.monotonic()
    executed = steps
    for t in range(steps):
        gamma = weights(config.schedule, t)
        value, logits, grad = loss_and_grad(current, train_set, gamma)
        if not np.isfinite(value) or value > config.divergence_limit:
            diverged = True
            divergence_step = t
            executed = t
            log.warning(f"Training diverged at step {t} (loss={value})")
            break

        loss[t] = value
        train_acc[t] = accuracy_from_logits(logits, train_set.labels)
        gamma_trace[t] = gamma
        if t % config.val_stride == 0:
            val_steps.append(t)
            val_acc.append(accuracy(current, val_set))

        if stride is not None and t % stride == 0:
            record = len(spectra_steps)
            spectra_steps.append(t)
            estimate = hessian_top_k(
                current,
                train_set,
                gamma,
                k=config.hessian_top_k,
                iters=config.lanczos_iters,
                seed=derive_seed(config.seed, t),
            )
            hessian_eigs[record, : estimate.top_eigs.shape[0]] = estimate.top_eigs
            if record_ntk:
                try:
                    ntk_eigs[record] = ntk_top_eigenvalue(output_jacobian(current, train_set))
                except MemoryBudgetError as e:
                    log.warning(f"NTK recording disabled: {e}")
                    record_ntk = False

        current.flat -= config.learning_rate * grad

        if (t + 1) % config.log_every == 0:
            log.info(
                f"step {t + 1}/{steps} loss={value:.6g} "
                f"train_acc={train_acc[t]:.4f} ({time.monotonic() - started:.1f}s)"
            )

    loss = loss[:executed]
    delta_loss = np.full(executed, np.nan)
    if executed > 1:
        delta_loss[1:] = np.diff(loss)
    hessian_eigs = hessian_eigs[: len(spectra_steps)]
    ntk_eigs = ntk_eigs[: len(spectra_steps)]

    intervals: List[Interval] = []
    threshold: Optional[float] = None
    if len(spectra_steps) >= 2:
        intervals, threshold = detect_instabilities(
            hessian_eigs[:, 0], config.jump_threshold, steps=spectra_steps
        )
        for start, end in intervals:
            log.info(f"Instability interval detected between steps {start} and {end}")

    trace = TrainTrace(
        learning_rate=config.learning_rate,
        spectra_stride=stride,
        loss=loss,
        delta_loss=delta_loss,
        train_accuracy=train_acc[:executed],
        gamma=gamma_trace[:executed],
        val_steps=np.array(val_steps, dtype=np.int64),
        val_accuracy=np.array(val_acc),
        spectra_steps=np.array(spectra_steps, dtype=np.int64),
        hessian_top_eigs=hessian_eigs,
        ntk_top_eig=ntk_eigs,
        instability_intervals=intervals,
        threshold_estimate=threshold,
        diverged=diverged,
        divergence_step=divergence_step,
    )
    if not diverged:
        trace.final_train_accuracy = accuracy(current, train_set)
        trace.final_val_accuracy = accuracy(current, val_set)
    log.debug(f"Training finished after {executed} steps in {time.monotonic() - started:.1f}s")
    return current, trace
