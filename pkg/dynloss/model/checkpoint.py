"""
Checkpoints de parámetros.

Formato: fichero ``.npz`` de numpy con dos arrays,

- ``header``: ``uint64[4] = (width, in_dim, C, seed)``
- ``flat``: ``float64[n_params]`` en el orden ``(W1, b1, W2, b2)``

La lectura reproduce el vector plano bit a bit.
"""

from pathlib import Path
from typing import Tuple, Union

import numpy as np

from ..exceptions import ArtifactIOError
from .mlp import MlpParams

PathLike = Union[str, Path]


def save_checkpoint(params: MlpParams, seed: int, path: PathLike) -> Path:
    """
    Guarda los parámetros y la semilla de inicialización.

    :param params: Parámetros a guardar.
    :param seed: Semilla con la que se inicializó la red.
    :param path: Ruta de destino (se respeta tal cual, sin añadir ``.npz``).
    :return: Ruta escrita.
    :raises ArtifactIOError: Si no se puede escribir.
    """
    path = Path(path)
    header = np.array(
        [params.width, params.in_dim, params.num_classes, seed], dtype=np.uint64
    )
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("wb") as handle:
            np.savez(handle, header=header, flat=params.flat)
    except OSError as e:
        raise ArtifactIOError(f"cannot write checkpoint {path}: {e}", path=str(path)) from e
    return path


def load_checkpoint(path: PathLike) -> Tuple[MlpParams, int]:
    """
    Carga un checkpoint escrito por :func:`save_checkpoint`.

    :param path: Ruta del checkpoint.
    :return: Tupla ``(params, seed)``.
    :raises ArtifactIOError: Si el fichero no existe o no tiene el formato esperado.
    """
    path = Path(path)
    try:
        with np.load(path, allow_pickle=False) as archive:
            header = archive["header"]
            flat = archive["flat"]
    except (OSError, KeyError, ValueError) as e:
        raise ArtifactIOError(f"cannot read checkpoint {path}: {e}", path=str(path)) from e
    if header.shape != (4,):
        raise ArtifactIOError(f"malformed checkpoint header in {path}", path=str(path))
    width, in_dim, num_classes, seed = (int(v) for v in header)
    return MlpParams(flat, width, in_dim, num_classes), seed
