"""
Detección de intervalos de inestabilidad sobre la serie de ``lambda_max``.

Un intervalo se abre en el primer registro cuyo salto respecto al registro
anterior es ``≥ jump_threshold`` y se cierra en el último registro
consecutivo que cumple la misma condición. El umbral estimado es la media de
``lambda_max`` en los registros de inicio y fin de todos los intervalos.
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np

DEFAULT_JUMP_THRESHOLD = 0.1

Interval = Tuple[int, int]


def detect_instabilities(
    series: Sequence[float],
    jump_threshold: float = DEFAULT_JUMP_THRESHOLD,
    steps: Optional[Sequence[int]] = None,
) -> Tuple[List[Interval], Optional[float]]:
    """
    Intervalos de inestabilidad y umbral estimado.

    :param series: Serie de ``lambda_max`` por registro.
    :param jump_threshold: Salto mínimo entre registros consecutivos.
    :param steps: Paso de entrenamiento de cada registro. Si se indica, los
        intervalos se expresan en pasos; si no, en índices de registro.
    :return: Tupla ``(intervals, threshold_estimate)``. Sin intervalos el
        umbral es ``None``. Con menos de dos registros no hay intervalos.

    Ejemplo:
    --------
    .. code-block:: python

        detect_instabilities([1.0, 1.05, 1.30, 1.55, 1.58])
        # ([(2, 3)], 1.425)
    """
    values = np.asarray(series, dtype=np.float64)
    if steps is not None and len(steps) != values.shape[0]:
        raise ValueError("steps must have one entry per record")
    if values.shape[0] < 2:
        return [], None

    jumps = np.zeros(values.shape[0], dtype=bool)
    with np.errstate(invalid="ignore"):
        jumps[1:] = np.diff(values) >= jump_threshold

    records: List[Interval] = []
    start: Optional[int] = None
    for index, is_jump in enumerate(jumps):
        if is_jump and start is None:
            start = index
        elif not is_jump and start is not None:
            records.append((start, index - 1))
            start = None
    if start is not None:
        records.append((start, values.shape[0] - 1))

    if not records:
        return [], None
    endpoints = [values[i] for interval in records for i in interval]
    threshold = float(np.mean(endpoints))
    if steps is None:
        return records, threshold
    return [(int(steps[a]), int(steps[b])) for a, b in records], threshold


def eigenvalue_crossings(
    top_eigs: np.ndarray, steps: Sequence[int], threshold: float
) -> List[List[int]]:
    """
    Pasos en los que cada autovalor cruza el umbral hacia arriba.

    :param top_eigs: Matriz ``(registros, k)`` con los autovalores mayores.
    :param steps: Paso de cada registro.
    :param threshold: Umbral de curvatura.
    :return: Una lista de pasos por columna (autovalor).
    """
    eigs = np.asarray(top_eigs, dtype=np.float64)
    if eigs.ndim != 2:
        raise ValueError("top_eigs must be a (records, k) matrix")
    crossings: List[List[int]] = []
    for column in eigs.T:
        with np.errstate(invalid="ignore"):
            upward = (column[:-1] < threshold) & (column[1:] >= threshold)
        crossings.append([int(steps[i + 1]) for i in np.flatnonzero(upward)])
    return crossings


def fraction_above_threshold(series: Sequence[float], threshold: float) -> float:
    """Fracción de registros finitos con valor estrictamente mayor que ``threshold``."""
    values = np.asarray(series, dtype=np.float64)
    values = values[np.isfinite(values)]
    if values.size == 0:
        return 0.0
    return float(np.mean(values > threshold))


def alternation_fraction(delta_loss: Sequence[float], start: int, end: int) -> float:
    """
    Fracción de pares de pasos consecutivos en ``[start, end]`` cuyo
    ``delta_loss`` cambia de signo.

    :return: Valor en ``[0, 1]``; ``0.0`` si no hay pares válidos.
    """
    deltas = np.asarray(delta_loss, dtype=np.float64)[max(start, 0) : end + 1]
    if deltas.size < 2:
        return 0.0
    first, second = deltas[:-1], deltas[1:]
    valid = np.isfinite(first) & np.isfinite(second)
    if not valid.any():
        return 0.0
    flips = np.sign(first[valid]) * np.sign(second[valid]) < 0
    return float(np.mean(flips))


def descent_fraction(delta_loss: Sequence[float], intervals: Sequence[Interval]) -> float:
    """
    Fracción de pasos fuera de los intervalos con ``delta_loss <= 0``.

    :param delta_loss: Serie por paso.
    :param intervals: Intervalos en pasos (inclusivos).
    """
    deltas = np.asarray(delta_loss, dtype=np.float64)
    outside = np.isfinite(deltas)
    for start, end in intervals:
        outside[max(start, 0) : end + 1] = False
    if not outside.any():
        return 1.0
    return float(np.mean(deltas[outside] <= 0))
