"""
Operadores y oráculos de la Hessiana de la pérdida dinámica.
"""

from typing import Optional

import numpy as np

from ..data import Dataset
from ..exceptions import MemoryBudgetError
from ..model import MlpParams, hvp
from .lanczos import DEFAULT_LANCZOS_ITERS, Operator, SpectrumEstimate, lanczos_top_k

DEFAULT_DENSE_HESSIAN_CAP = 500


def hessian_operator(
    params: MlpParams, dataset: Dataset, gamma: Optional[np.ndarray] = None
) -> Operator:
    """Operador ``v -> H v`` sobre una copia congelada de los parámetros."""
    frozen = params.copy()
    return lambda v: hvp(frozen, dataset, gamma, v)


def hessian_top_k(
    params: MlpParams,
    dataset: Dataset,
    gamma: Optional[np.ndarray] = None,
    k: int = 3,
    iters: int = DEFAULT_LANCZOS_ITERS,
    seed: int = 0,
) -> SpectrumEstimate:
    """
    Los ``k`` mayores autovalores de la Hessiana mediante Lanczos.

    :return: :class:`SpectrumEstimate` en orden descendente.
    """
    return lanczos_top_k(
        hessian_operator(params, dataset, gamma), params.n_params, k, iters=iters, seed=seed
    )


def dense_hessian(
    params: MlpParams,
    dataset: Dataset,
    gamma: Optional[np.ndarray] = None,
    max_params: int = DEFAULT_DENSE_HESSIAN_CAP,
) -> np.ndarray:
    """
    Hessiana densa construida columna a columna: ``H[:, p] = hvp(e_p)``.

    Pensada como oráculo para redes pequeñas; no se simetriza.

    :param max_params: Límite de ``n_params``.
    :return: Matriz ``(n_params, n_params)``.
    :raises MemoryBudgetError: Si ``n_params`` supera ``max_params``.
    """
    n_params = params.n_params
    if n_params > max_params:
        raise MemoryBudgetError(
            f"dense Hessian needs n_params ≤ {max_params}, got {n_params}"
        )
    matrix = np.empty((n_params, n_params))
    basis = np.zeros(n_params)
    for p in range(n_params):
        basis[p] = 1.0
        matrix[:, p] = hvp(params, dataset, gamma, basis)
        basis[p] = 0.0
    return matrix
