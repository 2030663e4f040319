"""
Módulo de pesos por clase dependientes del tiempo.

Classes:
    OscillationSchedule: Parámetros ``(A, T, C, stop_step)`` de la oscilación.

Functions:
    tent: Perfil triangular dentro de un periodo.
    weights: Pesos normalizados ``gamma(t)`` en un paso global.
    weights_batch: Versión vectorizada de ``weights`` para muchos pasos.
    emphasized_class: Clase enfatizada en el paso ``t``.

Examples:
    >>> from dynloss.schedule import OscillationSchedule, weights
    >>> schedule = OscillationSchedule(amplitude=70, period=5000, num_classes=3)
    >>> weights(schedule, 2500)
    array([2.91666667, 0.04166667, 0.04166667])
"""

from .oscillation import (
    OscillationSchedule,
    emphasized_class,
    tent,
    weights,
    weights_batch,
)

__all__ = [
    "OscillationSchedule",
    "emphasized_class",
    "tent",
    "weights",
    "weights_batch",
]
