"""
Handler Module
==============

Gestión del logging de las ejecuciones (consola y ``run.log``).

>>> from dynloss.handler import LoggingHandler
>>> logger = LoggingHandler.run_logger("runs/baseline")
"""

from .logging.logging_handler import LoggingHandler

__all__ = ["LoggingHandler"]
