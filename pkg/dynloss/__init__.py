"""
dynloss
=======

Funciones de pérdida dinámicas: pesos por clase que oscilan durante el
entrenamiento, análisis espectral de la Hessiana y del NTK, y barridos de
hiperparámetros sobre el dataset espiral.

Sub-paquetes:
    data, schedule, loss, model, training, spectral, sweep, config, cli, handler
"""

__version__ = "1.0.0"

__all__ = ["__version__"]
