"""
Módulo de funciones de pérdida.

Functions:
    dynamical_ce: Entropía cruzada ponderada por clase (pérdida dinámica).
    cross_entropy: Entropía cruzada estándar (pesos 1).
    dynamical_ce_logit_grad: Gradiente de la pérdida dinámica respecto a los logits.
    mse_loss: Error cuadrático medio sobre logits y etiquetas one-hot.
    residuals: Vector de residuos ``g`` del análisis NTK.
    mse_grad_logits: Gradiente del MSE respecto a los logits.
"""

from .losses import (
    cross_entropy,
    dynamical_ce,
    dynamical_ce_logit_grad,
    log_softmax,
    mse_grad_logits,
    mse_loss,
    residuals,
    softmax,
)

__all__ = [
    "cross_entropy",
    "dynamical_ce",
    "dynamical_ce_logit_grad",
    "log_softmax",
    "mse_grad_logits",
    "mse_loss",
    "residuals",
    "softmax",
]
