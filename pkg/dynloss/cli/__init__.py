"""
Interfaz de línea de comandos de dynloss.

Functions:
    main: Analiza los argumentos, ejecuta el subcomando y devuelve el código de salida.
    emit_outputs: Escribe los artefactos de una ejecución y su manifiesto.
"""

from .formats import HELP_FORMATS
from .main import EXIT_IO, EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, build_parser, main, run
from .outputs import RunArtifacts, emit_outputs, load_manifest

__all__ = [
    "EXIT_IO",
    "EXIT_OK",
    "EXIT_RUNTIME",
    "EXIT_USAGE",
    "HELP_FORMATS",
    "RunArtifacts",
    "build_parser",
    "emit_outputs",
    "load_manifest",
    "main",
    "run",
]
