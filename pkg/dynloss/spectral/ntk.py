"""
Neural Tangent Kernel y dinámica linealizada de los residuos.

Con pérdida MSE y el NTK congelado, los residuos evolucionan como

- discreto: ``g <- g - (eta/n) Theta g``
- continuo: ``g(t) = U exp(-(eta/n) Lambda t) U^T g0``

En la base de autovectores de ``Theta`` cada modo se multiplica por
``mu = 1 - (eta/n) lambda`` en cada paso.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh  # type: ignore

from ..exceptions import ConfigError, MemoryBudgetError

DEFAULT_MAX_NTK_ENTRIES = 25_000_000
OVERFLOW_LIMIT = 1e150


def ntk(jacobian: np.ndarray, max_entries: int = DEFAULT_MAX_NTK_ENTRIES) -> np.ndarray:
    """
    NTK empírico ``Theta = J J^T``.

    :param jacobian: Jacobiano de salidas ``(P*C, n_params)``.
    :param max_entries: Límite de entradas de ``Theta``.
    :return: Matriz simétrica semidefinida positiva ``(P*C, P*C)``.
    :raises MemoryBudgetError: Si ``(P*C)^2`` supera ``max_entries``.
    """
    jacobian = np.asarray(jacobian, dtype=np.float64)
    if not np.all(np.isfinite(jacobian)):
        raise ConfigError("jacobian must be finite")
    rows = jacobian.shape[0]
    if rows * rows > max_entries:
        raise MemoryBudgetError(f"NTK needs {rows * rows} entries, cap is {max_entries}")
    theta = jacobian @ jacobian.T
    return 0.5 * (theta + theta.T)


def ntk_top_eigenvalue(jacobian: np.ndarray) -> float:
    """
    Mayor autovalor de ``J J^T``.

    Se diagonaliza el menor de los dos Gram (``J J^T`` o ``J^T J``), que
    comparten los autovalores no nulos.
    """
    rows, cols = jacobian.shape
    gram = jacobian @ jacobian.T if rows <= cols else jacobian.T @ jacobian
    size = gram.shape[0]
    top = eigh(gram, eigvals_only=True, subset_by_index=[size - 1, size - 1])
    return float(top[0])


@dataclass
class NtkTrajectory:
    """
    Evolución de los residuos bajo la dinámica discreta linealizada.

    :ivar norms: ``|g|`` en cada paso (incluye el paso 0).
    :ivar mode_coefficients: Coeficientes de ``g`` en la base de autovectores,
        forma ``(pasos + 1, P*C)``.
    :ivar eigenvalues: Autovalores de ``Theta`` en orden ascendente.
    :ivar multipliers: ``mu_j = 1 - (eta/n) lambda_j`` por modo.
    :ivar overflowed: True si la serie se truncó por desbordamiento.
    """

    norms: np.ndarray
    mode_coefficients: np.ndarray
    eigenvalues: np.ndarray
    multipliers: np.ndarray
    overflowed: bool = False


def _check_dynamics(theta: np.ndarray, g0: np.ndarray, eta: float, n: int) -> None:
    if theta.ndim != 2 or theta.shape[0] != theta.shape[1]:
        raise ConfigError("theta must be square")
    if g0.shape != (theta.shape[0],):
        raise ConfigError("g0 length must match theta")
    if not eta > 0:
        raise ConfigError("eta must be > 0", key="train.eta")
    if n < 1:
        raise ConfigError("n must be ≥ 1")


def simulate_discrete_ntk(
    theta: np.ndarray, g0: np.ndarray, eta: float, n: int, steps: int
) -> NtkTrajectory:
    """
    Itera ``g <- g - (eta/n) Theta g`` con ``Theta`` congelado.

    :param theta: NTK ``(P*C, P*C)``.
    :param g0: Residuo inicial.
    :param eta: Tasa de aprendizaje.
    :param n: Número de muestras ``N`` de la normalización.
    :param steps: Pasos a simular.
    :return: :class:`NtkTrajectory`; si ``|g|`` deja de ser finito o supera
        ``OVERFLOW_LIMIT`` la serie se trunca y ``overflowed`` vale True.
    """
    theta = np.asarray(theta, dtype=np.float64)
    g = np.array(g0, dtype=np.float64)
    _check_dynamics(theta, g, eta, n)
    eigenvalues, vectors = np.linalg.eigh(theta)
    rate = eta / n

    norms = [float(np.linalg.norm(g))]
    modes = [vectors.T @ g]
    overflowed = False
    for _ in range(steps):
        g = g - rate * (theta @ g)
        norm = float(np.linalg.norm(g))
        if not np.isfinite(norm) or norm > OVERFLOW_LIMIT:
            overflowed = True
            break
        norms.append(norm)
        modes.append(vectors.T @ g)
    return NtkTrajectory(
        norms=np.array(norms),
        mode_coefficients=np.array(modes),
        eigenvalues=eigenvalues,
        multipliers=1.0 - rate * eigenvalues,
        overflowed=overflowed,
    )


def simulate_continuous_ntk(
    theta: np.ndarray, g0: np.ndarray, eta: float, n: int, times: np.ndarray
) -> np.ndarray:
    """
    Normas de ``g(t) = U exp(-(eta/n) Lambda t) U^T g0`` (flujo de gradiente).

    :param times: Instantes ``t ≥ 0`` en unidades de paso.
    :return: Vector con ``|g(t)|`` para cada instante.
    """
    theta = np.asarray(theta, dtype=np.float64)
    g0 = np.asarray(g0, dtype=np.float64)
    _check_dynamics(theta, g0, eta, n)
    times = np.asarray(times, dtype=np.float64)
    if times.size and times.min() < 0:
        raise ConfigError("times must be ≥ 0")
    eigenvalues, vectors = np.linalg.eigh(theta)
    coefficients = vectors.T @ g0
    decay = np.exp(-(eta / n) * np.outer(times, eigenvalues))
    return np.linalg.norm(decay * coefficients[None, :], axis=1)
