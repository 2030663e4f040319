"""
Ajuste de la ley de escala del umbral de curvatura con la tasa de aprendizaje.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import linregress  # type: ignore

from ..exceptions import ConfigError


@dataclass(frozen=True)
class ExponentFit:
    """
    Ajuste ``log(threshold) = exponent * log(eta) + intercept``.

    :ivar exponent: Pendiente en log-log (con signo; ``-1`` es la predicción).
    :ivar intercept: Ordenada en el origen en log-log.
    :ivar r_squared: Coeficiente de determinación.
    :ivar n_points: Número de pares usados.
    """

    exponent: float
    intercept: float
    r_squared: float
    n_points: int

    def to_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "n_points": self.n_points,
        }


def fit_threshold_exponent(
    etas: Sequence[float], thresholds: Sequence[float]
) -> ExponentFit:
    """
    Mínimos cuadrados ordinarios de ``log(threshold)`` frente a ``log(eta)``.

    :param etas: Tasas de aprendizaje (positivas).
    :param thresholds: Umbrales medidos (positivos), mismo orden.
    :return: :class:`ExponentFit`.
    :raises ConfigError: Con menos de 3 pares, longitudes distintas o valores
        no positivos.
    """
    etas_arr = np.asarray(etas, dtype=np.float64)
    thresholds_arr = np.asarray(thresholds, dtype=np.float64)
    if etas_arr.shape != thresholds_arr.shape:
        raise ConfigError("etas and thresholds must have the same length")
    if etas_arr.size < 3:
        raise ConfigError("at least 3 (eta, threshold) pairs are required")
    if np.any(etas_arr <= 0) or np.any(thresholds_arr <= 0):
        raise ConfigError("etas and thresholds must be positive")
    if np.unique(etas_arr).size < 2:
        raise ConfigError("at least two distinct learning rates are required")
    result = linregress(np.log(etas_arr), np.log(thresholds_arr))
    return ExponentFit(
        exponent=float(result.slope),
        intercept=float(result.intercept),
        r_squared=float(result.rvalue ** 2),
        n_points=int(etas_arr.size),
    )
