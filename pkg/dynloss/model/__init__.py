"""
Módulo del clasificador de una capa oculta.

Classes:
    MlpParams: Parámetros como vector plano con vistas con forma.

Functions:
    init_params, forward, accuracy: Inicialización, evaluación y exactitud.
    loss_and_grad, grad_loss: Pérdida dinámica y su gradiente exacto.
    hvp: Producto Hessiana-vector exacto (forward-over-reverse).
    output_jacobian: Jacobiano de los logits respecto a los parámetros.
    save_checkpoint, load_checkpoint: Persistencia de parámetros.

El orden del vector plano es ``(W1 por filas, b1, W2 por filas, b2)`` y lo
comparten Lanczos, HVP y los checkpoints.
"""

from .checkpoint import load_checkpoint, save_checkpoint
from .mlp import (
    DEFAULT_MAX_JACOBIAN_ENTRIES,
    MlpParams,
    accuracy,
    accuracy_from_logits,
    forward,
    grad_loss,
    hvp,
    init_params,
    loss_and_grad,
    output_jacobian,
)

__all__ = [
    "DEFAULT_MAX_JACOBIAN_ENTRIES",
    "MlpParams",
    "accuracy",
    "accuracy_from_logits",
    "forward",
    "grad_loss",
    "hvp",
    "init_params",
    "load_checkpoint",
    "loss_and_grad",
    "output_jacobian",
    "save_checkpoint",
]
