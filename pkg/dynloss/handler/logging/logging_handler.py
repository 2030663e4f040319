"""
Módulo: logging_handler
========================

Logging de las ejecuciones de ``dynloss``. Los módulos de la librería
escriben en loggers hijos de ``dynloss`` (``dynloss.training``,
``dynloss.sweep``...), así que basta con configurar el logger ``dynloss``
para capturar todo en la consola y en el ``run.log`` de la ejecución.

Ejemplo básico:
---------------
.. code-block:: python

    from dynloss.handler import LoggingHandler

    logger = LoggingHandler.run_logger("runs/oscillation")
    logger.info("Training started")

Los barridos escriben una línea por ejecución; con ``max_bytes`` el
``run.log`` rota por tamaño:

.. code-block:: python

    logger = LoggingHandler.run_logger("runs/phase", max_bytes=10 * 1024 * 1024)
"""

import logging
from logging import FileHandler, StreamHandler
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import List, Optional, Sequence, Union

PathLike = Union[str, Path]

PACKAGE_LOGGER = "dynloss"
RUN_LOG_FILE = "run.log"
DEFAULT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DEFAULT_BACKUP_COUNT = 3


class LoggingHandler:
    """
    Construye los handlers de una ejecución y los instala en un logger.

    El logger no propaga al logger raíz, así que sus mensajes solo salen por
    los handlers instalados aquí.

    :param level: Nivel del logger y de sus handlers.
    :param message_format: Formato de los mensajes.
    :param logger_name: Logger a configurar (por defecto ``dynloss``).

    Ejemplo:
    --------
    .. code-block:: python

        handler = LoggingHandler(level=logging.DEBUG)
        logger = handler.attach([handler.create_stream_handler()])
    """

    def __init__(
        self,
        level: int = logging.INFO,
        message_format: str = DEFAULT_FORMAT,
        logger_name: str = PACKAGE_LOGGER,
    ):
        self.level = level
        self.message_format = message_format
        self.logger = logging.getLogger(logger_name)

    def _configure(self, handler: logging.Handler) -> logging.Handler:
        handler.setLevel(self.level)
        handler.setFormatter(logging.Formatter(self.message_format))
        return handler

    def create_stream_handler(self) -> StreamHandler:
        """Handler de consola (``stderr``)."""
        handler = StreamHandler()
        self._configure(handler)
        return handler

    def create_file_handler(self, log_file: PathLike) -> FileHandler:
        """
        Handler de fichero que sobrescribe ``log_file``; crea los directorios
        intermedios.

        :param log_file: Ruta del fichero de log.
        :return: FileHandler configurado.
        """
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handler = FileHandler(log_path, mode="w", encoding="utf-8")
        self._configure(handler)
        return handler

    def create_size_rotating_file_handler(
        self, log_file: PathLike, max_bytes: int, backup_count: int = DEFAULT_BACKUP_COUNT
    ) -> RotatingFileHandler:
        """
        Handler de fichero con rotación por tamaño.

        :param log_file: Ruta del fichero de log.
        :param max_bytes: Tamaño a partir del cual se rota.
        :param backup_count: Copias que se conservan (``run.log.1``...).
        :return: RotatingFileHandler configurado.
        :raises ValueError: Si ``max_bytes`` no es positivo.
        """
        if max_bytes <= 0:
            raise ValueError(f"max_bytes must be > 0, got {max_bytes}")
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handler = RotatingFileHandler(
            log_path, maxBytes=max_bytes, backupCount=backup_count, encoding="utf-8"
        )
        self._configure(handler)
        return handler

    def attach(self, handlers: Sequence[logging.Handler]) -> logging.Logger:
        """
        Sustituye los handlers del logger por ``handlers``.

        Los handlers anteriores se cierran, de modo que configurar dos veces
        el mismo logger no duplica la salida.

        :return: El logger configurado.
        """
        self.close_handlers(self.logger)
        self.logger.setLevel(self.level)
        self.logger.propagate = False
        for handler in handlers:
            self.logger.addHandler(handler)
        return self.logger

    @staticmethod
    def close_handlers(logger: logging.Logger) -> None:
        """Quita y cierra todos los handlers de ``logger``."""
        for handler in logger.handlers[:]:
            logger.removeHandler(handler)
            handler.close()

    @classmethod
    def run_logger(
        cls,
        output_dir: Optional[PathLike] = None,
        level: int = logging.INFO,
        name: str = PACKAGE_LOGGER,
        max_bytes: Optional[int] = None,
    ) -> logging.Logger:
        """
        Logger de una ejecución: consola y, si hay directorio de salida,
        ``<output_dir>/run.log``.

        :param output_dir: Directorio de salida de la ejecución.
        :param level: Nivel de logging.
        :param name: Nombre del logger.
        :param max_bytes: Si se indica, ``run.log`` rota al superar ese tamaño.
        :return: Logger configurado.
        """
        handler = cls(level=level, logger_name=name)
        handlers: List[logging.Handler] = [handler.create_stream_handler()]
        if output_dir is not None:
            log_file = Path(output_dir) / RUN_LOG_FILE
            if max_bytes is None:
                handlers.append(handler.create_file_handler(log_file))
            else:
                handlers.append(handler.create_size_rotating_file_handler(log_file, max_bytes))
        return handler.attach(handlers)
