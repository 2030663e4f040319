"""
Configuración de las ejecuciones: claves con puntos, fichero ``clave = valor``,
validación por comando y directorio de salida.
"""

from .run_config import (
    COMMANDS,
    DEFAULT_OUTPUT_DIR,
    OUTPUT_ROOT_ENV,
    RunConfig,
    output_root,
    parse_config_text,
)

__all__ = [
    "COMMANDS",
    "DEFAULT_OUTPUT_DIR",
    "OUTPUT_ROOT_ENV",
    "RunConfig",
    "output_root",
    "parse_config_text",
]
