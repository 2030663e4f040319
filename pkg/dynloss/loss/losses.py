"""
Pérdida dinámica (entropía cruzada ponderada) y maquinaria MSE/residuos.

Convención: las pérdidas son medias sobre las ``P`` muestras, no sumas. Con
esa normalización una tasa de aprendizaje ``eta = 1`` es razonable y coincide
con el convenio ``1/N`` del análisis NTK.
"""

from typing import Optional

import numpy as np

from ..exceptions import ConfigError


def _check_labels(logits: np.ndarray, labels: np.ndarray) -> None:
    if logits.ndim != 2 or labels.shape != (logits.shape[0],):
        raise ConfigError("logits must be (P, C) and labels (P,)")
    if labels.size and (labels.min() < 0 or labels.max() >= logits.shape[1]):
        raise ConfigError("labels must lie in [0, C)")


def _check_gamma(gamma: Optional[np.ndarray], num_classes: int) -> np.ndarray:
    if gamma is None:
        return np.ones(num_classes)
    gamma = np.asarray(gamma, dtype=np.float64)
    if gamma.shape != (num_classes,):
        raise ConfigError(f"gamma must have length C = {num_classes}")
    return gamma


def log_softmax(logits: np.ndarray) -> np.ndarray:
    """``log softmax`` por filas con desplazamiento por el máximo."""
    shifted = logits - logits.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def softmax(logits: np.ndarray) -> np.ndarray:
    """``softmax`` por filas, numéricamente estable."""
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def dynamical_ce(
    logits: np.ndarray, labels: np.ndarray, gamma: Optional[np.ndarray] = None
) -> float:
    """
    Entropía cruzada ponderada por clase.

    ``(1/P) * sum_j gamma[y_j] * (-log softmax(logits_j)[y_j])``

    :param logits: Salidas de la red, forma ``(P, C)``.
    :param labels: Etiquetas enteras, forma ``(P,)``.
    :param gamma: Pesos por clase de longitud ``C``; ``None`` equivale a unos.
    :return: Valor de la pérdida (``≥ 0``).

    Ejemplo:
    --------
    .. code-block:: python

        dynamical_ce(np.zeros((4, 3)), np.array([0, 1, 2, 0]))  # ln 3
    """
    _check_labels(logits, labels)
    gamma = _check_gamma(gamma, logits.shape[1])
    nll = -log_softmax(logits)[np.arange(labels.shape[0]), labels]
    return float(np.mean(gamma[labels] * nll))


def cross_entropy(logits: np.ndarray, labels: np.ndarray) -> float:
    """Entropía cruzada media sin pesos."""
    _check_labels(logits, labels)
    nll = -log_softmax(logits)[np.arange(labels.shape[0]), labels]
    return float(np.mean(nll))


def dynamical_ce_logit_grad(
    logits: np.ndarray, labels: np.ndarray, gamma: Optional[np.ndarray] = None
) -> np.ndarray:
    """
    Gradiente de :func:`dynamical_ce` respecto a los logits.

    :return: Matriz ``(P, C)`` con ``(1/P) gamma[y_j] (softmax_j - onehot_j)``.
    """
    _check_labels(logits, labels)
    gamma = _check_gamma(gamma, logits.shape[1])
    n_samples = labels.shape[0]
    grad = softmax(logits)
    grad[np.arange(n_samples), labels] -= 1.0
    grad *= (gamma[labels] / n_samples)[:, None]
    return grad


def _one_hot(labels: np.ndarray, num_classes: int) -> np.ndarray:
    targets = np.zeros((labels.shape[0], num_classes))
    targets[np.arange(labels.shape[0]), labels] = 1.0
    return targets


def residuals(logits: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """
    Vector de residuos ``g``: entrada ``j*C + k`` igual a ``f_k(x_j) - y_{j,k}``.

    :param logits: Salidas de la red, forma ``(P, C)``.
    :param labels: Etiquetas enteras, forma ``(P,)``.
    :return: Vector de longitud ``P*C`` (orden por filas de ``logits``).
    """
    _check_labels(logits, labels)
    return (logits - _one_hot(labels, logits.shape[1])).reshape(-1)


def mse_loss(logits: np.ndarray, labels: np.ndarray) -> float:
    """
    Error cuadrático medio ``(1/(2N)) sum_{j,k} (f_k(x_j) - y_{j,k})^2`` con ``N = P``.

    Los objetivos son one-hot y se comparan con los logits sin softmax.
    """
    g = residuals(logits, labels)
    return float(g @ g / (2.0 * labels.shape[0]))


def mse_grad_logits(logits: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Gradiente de :func:`mse_loss` respecto a los logits, forma ``(P, C)``."""
    g = residuals(logits, labels).reshape(logits.shape)
    return g / labels.shape[0]
