"""
Jerarquía de excepciones de dynloss.

Todas las excepciones heredan de :class:`DynLossError` y además de la excepción
estándar más cercana (``ValueError``, ``MemoryError``...), de modo que el código
cliente puede capturarlas de forma genérica o específica.

La CLI traduce cada familia a un código de salida:

- ``ConfigError`` -> 1 (uso)
- ``TrainingDivergedError`` y errores inesperados -> 2
- ``ArtifactIOError`` / ``DatasetFormatError`` -> 3 (E/S)
"""

from typing import Optional


class DynLossError(Exception):
    """Error base de la librería."""


class ConfigError(DynLossError, ValueError):
    """
    Parámetro inválido o combinación de parámetros no permitida.

    :param message: Descripción del problema.
    :param key: Clave de configuración implicada (``train.A``, ``model.width``...).
    """

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key


class DatasetFormatError(DynLossError, ValueError):
    """
    Fichero de dataset mal formado.

    :param message: Descripción del problema.
    :param row: Número de fila (1 = primera fila de datos tras la cabecera).
    """

    def __init__(self, message: str, row: Optional[int] = None):
        super().__init__(message)
        self.row = row


class MemoryBudgetError(DynLossError, MemoryError):
    """Una matriz densa superaría el límite de memoria configurado."""


class TrainingDivergedError(DynLossError, RuntimeError):
    """
    El entrenamiento produjo una pérdida no finita o mayor que el límite.

    :param step: Paso de gradiente en el que se detectó la divergencia.
    """

    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step


class ArtifactIOError(DynLossError, OSError):
    """
    Error de lectura o escritura de un artefacto.

    :param path: Ruta implicada.
    """

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message)
        self.path = path
