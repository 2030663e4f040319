"""
Configuración del logging de ``dynloss``.

Classes:
    LoggingHandler: Handlers de consola y de fichero (con o sin rotación)
                    para el ``run.log`` de cada ejecución.

Examples:
    >>> from dynloss.handler.logging import LoggingHandler
    >>> logger = LoggingHandler.run_logger()
    >>> logger.info("ready")
"""

from .logging_handler import DEFAULT_FORMAT, PACKAGE_LOGGER, RUN_LOG_FILE, LoggingHandler

__all__ = ["DEFAULT_FORMAT", "LoggingHandler", "PACKAGE_LOGGER", "RUN_LOG_FILE"]
