"""
Este módulo genera y persiste el dataset espiral usado en los experimentos.

Cada clase ``j`` sigue un brazo de la espiral: para el índice ``i`` dentro de
la clase, el radio es ``r = i / (n_per_class - 1)`` y el ángulo
``theta = 4 j + 4 r + eps`` con ``eps ~ Normal(0, noise_sd)``. El punto es
``(r sin theta, r cos theta)``.

El conjunto de validación usa la misma fórmula con otra semilla, lo que da
otra distribución de los puntos a lo largo de los brazos.
"""

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
import pandas as pd  # type: ignore

from ..exceptions import ArtifactIOError, ConfigError, DatasetFormatError
from ..seeding import derive_seed

PathLike = Union[str, Path]

ARM_ROTATION = 4.0
ARM_TWIST = 4.0
CSV_COLUMNS = ["x0", "x1", "label"]
_PANDAS_LINE = re.compile(r"line (\d+)")


@dataclass(frozen=True)
class LabeledPoint:
    """
    Muestra etiquetada ``(x, y)``.

    :ivar x: Coordenadas ``(x0, x1)``.
    :ivar y: Índice de clase en ``[0, C)``.
    """

    x: Tuple[float, float]
    y: int


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    Conjunto de muestras etiquetadas en 2-D.

    Internamente guarda una matriz ``features`` de forma ``(P, 2)`` y un vector
    ``labels`` de forma ``(P,)``; ambos se marcan como de solo lectura para que
    el dataset sea inmutable tras su construcción.

    :param features: Coordenadas, forma ``(P, in_dim)``.
    :param labels: Etiquetas enteras, forma ``(P,)``.
    :param num_classes: Número de clases ``C``.
    :raises DatasetFormatError: Si el dataset está vacío.
    :raises ConfigError: Si hay etiquetas fuera de rango o valores no finitos.
    """

    features: np.ndarray
    labels: np.ndarray
    num_classes: int
    _one_hot: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        features = np.array(self.features, dtype=np.float64, copy=True)
        labels = np.array(self.labels, dtype=np.int64, copy=True)
        if features.ndim != 2 or features.shape[0] == 0:
            raise DatasetFormatError("empty dataset")
        if labels.shape != (features.shape[0],):
            raise ConfigError("labels must have one entry per sample", key="labels")
        if self.num_classes < 1:
            raise ConfigError("num_classes must be ≥ 1", key="num_classes")
        if not np.all(np.isfinite(features)):
            raise ConfigError("coordinates must be finite", key="features")
        if labels.min() < 0 or labels.max() >= self.num_classes:
            raise ConfigError(
                f"labels must lie in [0, {self.num_classes})", key="labels"
            )
        one_hot = np.zeros((labels.shape[0], self.num_classes))
        one_hot[np.arange(labels.shape[0]), labels] = 1.0
        for array in (features, labels, one_hot):
            array.setflags(write=False)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_one_hot", one_hot)

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    @property
    def in_dim(self) -> int:
        """Dimensión de las entradas."""
        return int(self.features.shape[1])

    @property
    def one_hot(self) -> np.ndarray:
        """Etiquetas en codificación one-hot, forma ``(P, C)``."""
        return self._one_hot

    @property
    def points(self) -> List[LabeledPoint]:
        """Lista ordenada de :class:`LabeledPoint`."""
        return [
            LabeledPoint(x=(float(row[0]), float(row[1])), y=int(label))
            for row, label in zip(self.features, self.labels)
        ]

    def class_counts(self) -> np.ndarray:
        """
        Número de muestras por clase.

        :return: Vector entero de longitud ``C``.
        """
        return np.bincount(self.labels, minlength=self.num_classes)


def generate_spiral(
    n_per_class: int, num_classes: int, noise_sd: float, seed: int
) -> Dataset:
    """
    Genera el dataset espiral.

    La generación es una función pura de sus cuatro argumentos. El ruido se
    extrae clase a clase, en orden de etiqueta.

    :param n_per_class: Muestras por clase (``≥ 1``).
    :param num_classes: Número de brazos/clases (``≥ 2``).
    :param noise_sd: Desviación típica del ruido angular (``≥ 0``).
    :param seed: Semilla del generador.
    :return: Dataset balanceado de ``n_per_class * num_classes`` puntos.
    :raises ConfigError: Si algún argumento viola su precondición.

    Ejemplo:
    --------
    .. code-block:: python

        train = generate_spiral(100, 3, 0.2, seed=0)
        assert len(train) == 300
    """
    if n_per_class < 1:
        raise ConfigError("n_per_class must be ≥ 1", key="dataset.n_per_class")
    if num_classes < 2:
        raise ConfigError("num_classes must be ≥ 2", key="dataset.num_classes")
    if not noise_sd >= 0:
        raise ConfigError("noise_sd must be ≥ 0", key="dataset.noise_sd")

    rng = np.random.default_rng(seed)
    if n_per_class > 1:
        radius = np.arange(n_per_class) / (n_per_class - 1)
    else:
        radius = np.zeros(1)

    features = np.empty((n_per_class * num_classes, 2))
    labels = np.empty(n_per_class * num_classes, dtype=np.int64)
    for j in range(num_classes):
        eps = rng.normal(0.0, noise_sd, size=n_per_class)
        theta = ARM_ROTATION * j + ARM_TWIST * radius + eps
        block = slice(j * n_per_class, (j + 1) * n_per_class)
        features[block, 0] = radius * np.sin(theta)
        features[block, 1] = radius * np.cos(theta)
        labels[block] = j
    return Dataset(features=features, labels=labels, num_classes=num_classes)


def generate_spiral_pair(
    n_per_class: int, num_classes: int, noise_sd: float, seed: int
) -> Tuple[Dataset, Dataset]:
    """
    Genera el par (entrenamiento, validación) a partir de una única semilla.

    :param n_per_class: Muestras por clase.
    :param num_classes: Número de clases.
    :param noise_sd: Desviación típica del ruido angular.
    :param seed: Semilla base; los flujos 0 y 1 se derivan de ella.
    :return: Tupla ``(train, val)`` del mismo tamaño.
    """
    train = generate_spiral(n_per_class, num_classes, noise_sd, derive_seed(seed, 0))
    val = generate_spiral(n_per_class, num_classes, noise_sd, derive_seed(seed, 1))
    return train, val


def save_csv(dataset: Dataset, path: PathLike) -> None:
    """
    Guarda el dataset en CSV.

    Formato: cabecera ``x0,x1,label,C=<num_classes>`` y una fila por punto con
    las coordenadas en precisión doble completa (``%.17g``).

    :param dataset: Dataset a guardar.
    :param path: Ruta de destino; se crean los directorios intermedios.
    :raises ArtifactIOError: Si no se puede escribir el fichero.
    """
    path = Path(path)
    frame = pd.DataFrame(
        {
            "x0": dataset.features[:, 0],
            "x1": dataset.features[:, 1],
            "label": dataset.labels,
        }
    )
    header = ",".join(CSV_COLUMNS + [f"C={dataset.num_classes}"])
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as handle:
            handle.write(header + "\n")
            frame.to_csv(handle, header=False, index=False, float_format="%.17g")
    except OSError as e:
        raise ArtifactIOError(f"cannot write dataset to {path}: {e}", path=str(path)) from e


def _parse_header(line: str) -> int:
    fields = [f.strip() for f in line.strip().split(",")]
    if fields[:3] != CSV_COLUMNS or len(fields) != 4 or not fields[3].startswith("C="):
        raise DatasetFormatError(f"malformed header: {line.strip()!r}", row=0)
    try:
        num_classes = int(fields[3][2:])
    except ValueError as e:
        raise DatasetFormatError(f"malformed class count in header: {fields[3]!r}", row=0) from e
    if num_classes < 1:
        raise DatasetFormatError("class count in header must be ≥ 1", row=0)
    return num_classes


def _parser_error_row(error: Exception) -> Optional[int]:
    # las líneas de pandas cuentan desde la primera fila tras la cabecera
    match = _PANDAS_LINE.search(str(error))
    return int(match.group(1)) if match else None


def load_csv(path: PathLike) -> Dataset:
    """
    Carga un dataset guardado con :func:`save_csv`.

    :param path: Ruta del fichero.
    :return: Dataset reconstruido (coordenadas exactas, etiquetas exactas).
    :raises ArtifactIOError: Si el fichero no se puede leer.
    :raises DatasetFormatError: Si el fichero está vacío o alguna fila es
        inválida (número de columnas, coordenada no numérica, etiqueta
        ``≥ C``). El mensaje nombra la fila.
    """
    path = Path(path)
    try:
        with path.open("r", newline="") as handle:
            header = handle.readline()
            if not header.strip():
                raise DatasetFormatError("empty dataset")
            num_classes = _parse_header(header)
            try:
                raw = pd.read_csv(
                    handle,
                    header=None,
                    dtype=str,
                    skip_blank_lines=True,
                    keep_default_na=False,
                )
            except pd.errors.EmptyDataError:
                raise DatasetFormatError("empty dataset")
            except pd.errors.ParserError as e:
                row = _parser_error_row(e)
                where = "" if row is None else f"row {row}: "
                raise DatasetFormatError(f"{where}wrong column count", row=row) from e
    except OSError as e:
        raise ArtifactIOError(f"cannot read dataset from {path}: {e}", path=str(path)) from e

    if raw.empty:
        raise DatasetFormatError("empty dataset")

    values = raw.fillna("").to_numpy(dtype=object)
    features = np.empty((len(raw), 2))
    labels = np.empty(len(raw), dtype=np.int64)
    for position, fields in enumerate(values):
        row = position + 1
        present = [str(f).strip() for f in fields if str(f).strip() != ""]
        if len(present) != len(CSV_COLUMNS) or any(
            str(f).strip() == "" for f in fields[: len(CSV_COLUMNS)]
        ):
            raise DatasetFormatError(f"row {row}: wrong column count", row=row)
        x0, x1, label = present
        try:
            features[position] = (float(x0), float(x1))
        except ValueError:
            raise DatasetFormatError(f"row {row}: non-numeric coordinate", row=row)
        try:
            labels[position] = int(label)
        except ValueError:
            raise DatasetFormatError(f"row {row}: non-integer label {label!r}", row=row)
        if not 0 <= labels[position] < num_classes:
            raise DatasetFormatError(
                f"row {row}: label {labels[position]} outside [0, {num_classes})", row=row
            )
        if not np.all(np.isfinite(features[position])):
            raise DatasetFormatError(f"row {row}: non-finite coordinate", row=row)

    return Dataset(features=features, labels=labels, num_classes=num_classes)
