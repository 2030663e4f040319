"""
Volcado binario de matrices densas (Hessiana, NTK) para inspección offline.

Formato:

- 8 bytes mágicos ``b"DLMATRX\\0"``
- ``uint64`` little-endian: filas
- ``uint64`` little-endian: columnas
- datos ``float64`` little-endian en orden por filas
"""

from pathlib import Path
from typing import Union

import numpy as np

from ..exceptions import ArtifactIOError

MAGIC = b"DLMATRX\0"
PathLike = Union[str, Path]


def save_matrix(matrix: np.ndarray, path: PathLike) -> Path:
    """
    Escribe una matriz 2-D en el formato binario documentado.

    :raises ArtifactIOError: Si no se puede escribir.
    """
    path = Path(path)
    matrix = np.ascontiguousarray(matrix, dtype="<f8")
    if matrix.ndim != 2:
        raise ValueError("only 2-D matrices can be dumped")
    header = np.array(matrix.shape, dtype="<u8").tobytes()
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("wb") as handle:
            handle.write(MAGIC)
            handle.write(header)
            handle.write(matrix.tobytes(order="C"))
    except OSError as e:
        raise ArtifactIOError(f"cannot write matrix {path}: {e}", path=str(path)) from e
    return path


def load_matrix(path: PathLike) -> np.ndarray:
    """
    Lee una matriz escrita por :func:`save_matrix`.

    :raises ArtifactIOError: Si el fichero no existe o está corrupto.
    """
    path = Path(path)
    try:
        payload = path.read_bytes()
    except OSError as e:
        raise ArtifactIOError(f"cannot read matrix {path}: {e}", path=str(path)) from e
    if payload[:8] != MAGIC or len(payload) < 24:
        raise ArtifactIOError(f"{path} is not a dynloss matrix dump", path=str(path))
    rows, cols = (int(v) for v in np.frombuffer(payload[8:24], dtype="<u8"))
    if len(payload) - 24 != rows * cols * 8:
        raise ArtifactIOError(f"{path} is truncated", path=str(path))
    data = np.frombuffer(payload[24:], dtype="<f8")
    return data.reshape(rows, cols).astype(np.float64)
