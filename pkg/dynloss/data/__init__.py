"""
Módulo de datos: dataset espiral de C brazos.

Classes:
    LabeledPoint: Muestra individual (coordenadas 2-D y etiqueta).
    Dataset: Conjunto inmutable de muestras etiquetadas.

Functions:
    generate_spiral: Genera el dataset espiral de forma determinista.
    generate_spiral_pair: Genera el par entrenamiento/validación.
    save_csv / load_csv: Persistencia en CSV con cabecera ``x0,x1,label,C=<C>``.

Examples:
    >>> from dynloss.data import generate_spiral_pair, save_csv
    >>> train, val = generate_spiral_pair(100, 3, 0.2, seed=0)
    >>> len(train)
    300
    >>> save_csv(train, "train.csv")
"""

from .spiral import (
    Dataset,
    LabeledPoint,
    generate_spiral,
    generate_spiral_pair,
    load_csv,
    save_csv,
)

__all__ = [
    "Dataset",
    "LabeledPoint",
    "generate_spiral",
    "generate_spiral_pair",
    "load_csv",
    "save_csv",
]
