"""
Derivación determinista de semillas.

Toda la aleatoriedad de dynloss parte de una semilla entera. Las semillas
secundarias (datos de validación, inicialización, celdas del barrido) se
derivan con :class:`numpy.random.SeedSequence`, de modo que cada ejecución se
puede reproducir de forma aislada y el resultado no depende del orden en que
se ejecuten las celdas.
"""

import numpy as np


def derive_seed(*keys: int) -> int:
    """
    Deriva una semilla de 63 bits a partir de una tupla de enteros.

    :param keys: Enteros no negativos (semilla base, índices, réplica...).
    :return: Semilla entera estable entre plataformas.

    Ejemplo:
    --------
    .. code-block:: python

        run_seed = derive_seed(seed_base, t_index, a_index, replicate)
    """
    if not keys:
        raise ValueError("derive_seed requires at least one key")
    if any(int(k) < 0 for k in keys):
        raise ValueError("seed keys must be non-negative")
    state = np.random.SeedSequence([int(k) for k in keys]).generate_state(2, dtype=np.uint32)
    return int((int(state[0]) << 31) ^ int(state[1]))
