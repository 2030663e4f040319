"""
Pesos por clase de la pérdida dinámica.

Durante cada periodo de ``T`` pasos se enfatiza una clase con un perfil
triangular (sube linealmente de 1 a ``A`` en la primera mitad y baja de nuevo
a 1 en la segunda); el resto de clases tienen peso 1. Las clases se recorren
en orden de etiqueta, así que un ciclo completo dura ``C * T`` pasos. Los
pesos se normalizan para que sumen ``C``.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..exceptions import ConfigError


@dataclass(frozen=True)
class OscillationSchedule:
    """
    Parámetros de la oscilación.

    :param amplitude: Amplitud ``A`` (``≥ 1``); ``A = 1`` es la entropía cruzada estática.
    :param period: Periodo ``T`` en pasos de gradiente (``≥ 2``).
    :param num_classes: Número de clases ``C`` (``≥ 2``).
    :param stop_step: Paso a partir del cual todos los pesos valen 1 (opcional).
    :raises ConfigError: Si algún parámetro viola su invariante.
    """

    amplitude: float
    period: int
    num_classes: int
    stop_step: Optional[int] = None

    def __post_init__(self) -> None:
        if not self.amplitude >= 1:
            raise ConfigError("A must be ≥ 1", key="train.A")
        if int(self.period) != self.period or self.period < 2:
            raise ConfigError("T must be an integer ≥ 2", key="train.T")
        if self.num_classes < 2:
            raise ConfigError("C must be ≥ 2", key="dataset.num_classes")
        if self.stop_step is not None and self.stop_step < 0:
            raise ConfigError("stop_step must be ≥ 0", key="train.stop_step")

    @property
    def slope(self) -> float:
        """Pendiente ``m = 2 (A - 1) / T`` del perfil triangular."""
        return 2.0 * (self.amplitude - 1.0) / self.period

    @property
    def cycle_length(self) -> int:
        """Duración de un ciclo completo por todas las clases (``C * T``)."""
        return self.num_classes * self.period

    @classmethod
    def static(cls, num_classes: int, period: int = 2) -> "OscillationSchedule":
        """Horario con ``A = 1``: todos los pesos valen 1 en todo momento."""
        return cls(amplitude=1.0, period=period, num_classes=num_classes)


def tent(schedule: OscillationSchedule, t_in_period: int) -> float:
    """
    Perfil triangular sin normalizar dentro de un periodo.

    ``1 + m t`` para ``0 < t <= T/2`` y ``2A - m t - 1`` para ``T/2 < t < T``;
    en ``t = 0`` vale 1, el mismo valor que al final del periodo anterior.

    :param schedule: Parámetros de la oscilación.
    :param t_in_period: Paso dentro del periodo, en ``[0, T)``.
    :return: Peso sin normalizar de la clase enfatizada.
    """
    if not 0 <= t_in_period < schedule.period:
        raise ConfigError(
            f"t_in_period must lie in [0, {schedule.period}), got {t_in_period}"
        )
    if t_in_period == 0:
        return 1.0
    m = schedule.slope
    if t_in_period <= schedule.period / 2:
        return 1.0 + m * t_in_period
    return 2.0 * schedule.amplitude - m * t_in_period - 1.0


def emphasized_class(schedule: OscillationSchedule, t: int) -> int:
    """Clase enfatizada en el paso global ``t``: ``floor(t / T) mod C``."""
    return (t // schedule.period) % schedule.num_classes


def weights(schedule: OscillationSchedule, t: int) -> np.ndarray:
    """
    Pesos normalizados ``gamma(t)``.

    :param schedule: Parámetros de la oscilación.
    :param t: Paso global (``≥ 0``).
    :return: Vector de longitud ``C`` con suma ``C`` y entradas en ``(0, C]``.

    Ejemplo:
    --------
    .. code-block:: python

        schedule = OscillationSchedule(amplitude=70, period=5000, num_classes=3)
        weights(schedule, 2500)  # (210/72, 3/72, 3/72)
    """
    if t < 0:
        raise ConfigError(f"step must be ≥ 0, got {t}")
    num_classes = schedule.num_classes
    if schedule.stop_step is not None and t >= schedule.stop_step:
        return np.ones(num_classes)
    raw = np.ones(num_classes)
    raw[emphasized_class(schedule, t)] = tent(schedule, t % schedule.period)
    return num_classes * raw / raw.sum()


def weights_batch(schedule: OscillationSchedule, steps: np.ndarray) -> np.ndarray:
    """
    Pesos para un vector de pasos.

    :param schedule: Parámetros de la oscilación.
    :param steps: Pasos globales no negativos.
    :return: Matriz ``(len(steps), C)``; la fila ``i`` coincide con
        ``weights(schedule, steps[i])``.
    """
    steps = np.asarray(steps, dtype=np.int64)
    if steps.size and steps.min() < 0:
        raise ConfigError("steps must be ≥ 0")
    period = schedule.period
    num_classes = schedule.num_classes
    phase = steps % period
    m = schedule.slope
    peak = np.where(
        phase <= period / 2,
        1.0 + m * phase,
        2.0 * schedule.amplitude - m * phase - 1.0,
    )
    peak = np.where(phase == 0, 1.0, peak)

    raw = np.ones((steps.shape[0], num_classes))
    raw[np.arange(steps.shape[0]), (steps // period) % num_classes] = peak
    gamma = num_classes * raw / raw.sum(axis=1, keepdims=True)
    if schedule.stop_step is not None:
        gamma[steps >= schedule.stop_step] = 1.0
    return gamma
