"""
Lanczos con reortogonalización completa para operadores simétricos.

Sólo necesita productos matriz-vector, de modo que sirve tanto para matrices
densas como para la Hessiana de la pérdida expresada mediante HVP.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal  # type: ignore

from ..exceptions import ConfigError

Operator = Callable[[np.ndarray], np.ndarray]

DEFAULT_LANCZOS_ITERS = 60
BREAKDOWN_TOL = 1e-10


@dataclass
class SpectrumEstimate:
    """
    Resultado de una ejecución de Lanczos.

    :ivar top_eigs: Valores de Ritz mayores, en orden descendente.
    :ivar iterations: Iteraciones realizadas.
    :ivar residual_norms: Cota ``|beta_m * s_m|`` del residuo de cada valor de Ritz.
    :ivar breakdown: True si el espacio de Krylov se agotó antes de tiempo.
    """

    top_eigs: np.ndarray
    iterations: int
    residual_norms: np.ndarray
    breakdown: bool = False

    @property
    def top(self) -> float:
        """Mayor valor de Ritz."""
        return float(self.top_eigs[0])


def lanczos_top_k(
    operator: Operator,
    dim: int,
    k: int,
    iters: int = DEFAULT_LANCZOS_ITERS,
    seed: int = 0,
) -> SpectrumEstimate:
    """
    Estima los ``k`` autovalores mayores de un operador lineal simétrico.

    El vector inicial es aleatorio y unitario (determinado por ``seed``). En
    cada iteración el nuevo vector se reortogonaliza contra toda la base
    (dos pasadas de Gram-Schmidt), lo que evita autovalores fantasma.

    :param operator: Función ``v -> A v``.
    :param dim: Dimensión del espacio.
    :param k: Número de autovalores pedidos (``1 <= k <= iters``).
    :param iters: Iteraciones de Lanczos; se recorta a ``dim``.
    :param seed: Semilla del vector inicial.
    :return: :class:`SpectrumEstimate`. Si hay ruptura (``beta = 0``) se
        devuelven los valores de Ritz obtenidos hasta ese momento, que pueden
        ser menos de ``k``.

    Ejemplo:
    --------
    .. code-block:: python

        diag = np.arange(1.0, 101.0)
        est = lanczos_top_k(lambda v: diag * v, dim=100, k=3, iters=80)
        est.top_eigs  # (100, 99, 98)
    """
    if dim < 1:
        raise ConfigError("dim must be ≥ 1")
    if k < 1:
        raise ConfigError("k must be ≥ 1", key="spectra.top_k")
    if iters < k:
        raise ConfigError("iters must be ≥ k", key="spectra.lanczos_iters")
    iters = min(iters, dim)

    rng = np.random.default_rng(seed)
    q = rng.standard_normal(dim)
    q /= np.linalg.norm(q)

    basis = np.zeros((iters, dim))
    alphas = []
    betas = []
    last_beta = 0.0
    breakdown = False
    scale = 0.0
    for j in range(iters):
        basis[j] = q
        w = np.asarray(operator(q), dtype=np.float64)
        alpha = float(q @ w)
        w = w - alpha * q
        if j > 0:
            w -= betas[-1] * basis[j - 1]
        for _ in range(2):
            w -= basis[: j + 1].T @ (basis[: j + 1] @ w)
        alphas.append(alpha)
        beta = float(np.linalg.norm(w))
        scale = max(scale, abs(alpha), beta)
        last_beta = beta
        if beta <= BREAKDOWN_TOL * max(scale, 1e-300):
            breakdown = j + 1 < iters or j + 1 < k
            last_beta = 0.0
            break
        if j == iters - 1:
            break
        betas.append(beta)
        q = w / beta

    n_ritz = len(alphas)
    if n_ritz == 1:
        ritz = np.array(alphas)
        vectors = np.ones((1, 1))
    else:
        ritz, vectors = eigh_tridiagonal(np.array(alphas), np.array(betas))
    order = np.argsort(ritz)[::-1][:k]
    return SpectrumEstimate(
        top_eigs=ritz[order],
        iterations=n_ritz,
        residual_norms=np.abs(last_beta * vectors[-1, order]),
        breakdown=breakdown,
    )
