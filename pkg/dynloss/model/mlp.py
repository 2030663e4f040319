"""
Red de una capa oculta ReLU con diferenciación exacta de primer y segundo orden.

``logits = W2 relu(W1 x + b1) + b2``

El gradiente se obtiene por retropropagación manual y el producto
Hessiana-vector con el operador R de Pearlmutter: una pasada hacia delante
que propaga la dirección ``v`` seguida de la retropropagación de esas
perturbaciones. Se toma ``relu'(0) = 0`` y ``relu'' = 0``.
"""

from typing import NamedTuple, Optional, Tuple

import numpy as np

from ..data import Dataset
from ..exceptions import ConfigError, MemoryBudgetError
from ..loss import dynamical_ce, dynamical_ce_logit_grad, softmax

DEFAULT_MAX_JACOBIAN_ENTRIES = 50_000_000


class MlpParams:
    """
    Parámetros de la red como un único vector plano.

    Las propiedades ``W1``, ``b1``, ``W2`` y ``b2`` son vistas del vector
    plano: modificar una modifica el otro.

    :param flat: Vector de longitud ``n_params``.
    :param width: Unidades ocultas.
    :param in_dim: Dimensión de entrada.
    :param num_classes: Número de clases ``C``.
    """

    def __init__(self, flat: np.ndarray, width: int, in_dim: int, num_classes: int):
        if width < 1 or in_dim < 1 or num_classes < 1:
            raise ConfigError("width, in_dim and num_classes must be ≥ 1", key="model.width")
        flat = np.ascontiguousarray(flat, dtype=np.float64)
        expected = self.count(width, in_dim, num_classes)
        if flat.shape != (expected,):
            raise ConfigError(
                f"flat vector has shape {flat.shape}, expected ({expected},)"
            )
        self.flat = flat
        self.width = width
        self.in_dim = in_dim
        self.num_classes = num_classes

    @staticmethod
    def count(width: int, in_dim: int, num_classes: int) -> int:
        """Número de parámetros ``width*in_dim + width + C*width + C``."""
        return width * in_dim + width + num_classes * width + num_classes

    @property
    def n_params(self) -> int:
        return int(self.flat.shape[0])

    def _offsets(self) -> Tuple[int, int, int]:
        w1_end = self.width * self.in_dim
        b1_end = w1_end + self.width
        w2_end = b1_end + self.num_classes * self.width
        return w1_end, b1_end, w2_end

    @property
    def W1(self) -> np.ndarray:
        w1_end, _, _ = self._offsets()
        return self.flat[:w1_end].reshape(self.width, self.in_dim)

    @property
    def b1(self) -> np.ndarray:
        w1_end, b1_end, _ = self._offsets()
        return self.flat[w1_end:b1_end]

    @property
    def W2(self) -> np.ndarray:
        _, b1_end, w2_end = self._offsets()
        return self.flat[b1_end:w2_end].reshape(self.num_classes, self.width)

    @property
    def b2(self) -> np.ndarray:
        _, _, w2_end = self._offsets()
        return self.flat[w2_end:]

    def split(self, vector: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Divide un vector del espacio de parámetros en bloques con forma."""
        w1_end, b1_end, w2_end = self._offsets()
        return (
            vector[:w1_end].reshape(self.width, self.in_dim),
            vector[w1_end:b1_end],
            vector[b1_end:w2_end].reshape(self.num_classes, self.width),
            vector[w2_end:],
        )

    def with_flat(self, flat: np.ndarray) -> "MlpParams":
        """Nueva instancia con la misma arquitectura y otro vector plano."""
        return MlpParams(flat, self.width, self.in_dim, self.num_classes)

    def copy(self) -> "MlpParams":
        return self.with_flat(self.flat.copy())

    def __repr__(self) -> str:
        return (
            f"MlpParams(width={self.width}, in_dim={self.in_dim}, "
            f"num_classes={self.num_classes}, n_params={self.n_params})"
        )


class _Forward(NamedTuple):
    pre: np.ndarray
    mask: np.ndarray
    hidden: np.ndarray
    logits: np.ndarray


def init_params(width: int, in_dim: int, num_classes: int, seed: int) -> MlpParams:
    """
    Inicializa la red: pesos ``Normal(0, 1/fan_in)``, sesgos a cero.

    :param width: Unidades ocultas (``≥ 1``).
    :param in_dim: Dimensión de entrada.
    :param num_classes: Número de clases.
    :param seed: Semilla del generador.
    :return: Parámetros deterministas para la semilla dada.
    """
    if width < 1:
        raise ConfigError("width must be ≥ 1", key="model.width")
    rng = np.random.default_rng(seed)
    params = MlpParams(
        np.zeros(MlpParams.count(width, in_dim, num_classes)), width, in_dim, num_classes
    )
    params.W1[...] = rng.normal(0.0, np.sqrt(1.0 / in_dim), size=(width, in_dim))
    params.W2[...] = rng.normal(0.0, np.sqrt(1.0 / width), size=(num_classes, width))
    return params


def _check_compatible(params: MlpParams, dataset: Dataset) -> None:
    if dataset.in_dim != params.in_dim:
        raise ConfigError(
            f"dataset feature dim {dataset.in_dim} does not match params in_dim {params.in_dim}"
        )
    if dataset.num_classes != params.num_classes:
        raise ConfigError(
            f"dataset has C = {dataset.num_classes}, params expect C = {params.num_classes}"
        )


def _forward(params: MlpParams, features: np.ndarray) -> _Forward:
    pre = features @ params.W1.T + params.b1
    mask = pre > 0
    hidden = np.where(mask, pre, 0.0)
    logits = hidden @ params.W2.T + params.b2
    return _Forward(pre, mask, hidden, logits)


def forward(params: MlpParams, dataset: Dataset) -> np.ndarray:
    """
    Logits de la red para todas las muestras.

    :return: Matriz ``(P, C)``.
    """
    _check_compatible(params, dataset)
    return _forward(params, dataset.features).logits


def _backward(params: MlpParams, cache: _Forward, features: np.ndarray, g_logits: np.ndarray) -> np.ndarray:
    d_w2 = g_logits.T @ cache.hidden
    d_b2 = g_logits.sum(axis=0)
    d_pre = (g_logits @ params.W2) * cache.mask
    d_w1 = d_pre.T @ features
    d_b1 = d_pre.sum(axis=0)
    return np.concatenate([d_w1.ravel(), d_b1, d_w2.ravel(), d_b2])


def loss_and_grad(
    params: MlpParams, dataset: Dataset, gamma: Optional[np.ndarray] = None
) -> Tuple[float, np.ndarray, np.ndarray]:
    """
    Pérdida dinámica, logits y gradiente con una sola pasada hacia delante.

    :param params: Parámetros de la red.
    :param dataset: Datos de entrenamiento.
    :param gamma: Pesos por clase (``None`` = entropía cruzada estándar).
    :return: Tupla ``(loss, logits, grad)``.
    """
    _check_compatible(params, dataset)
    cache = _forward(params, dataset.features)
    loss = dynamical_ce(cache.logits, dataset.labels, gamma)
    g_logits = dynamical_ce_logit_grad(cache.logits, dataset.labels, gamma)
    return loss, cache.logits, _backward(params, cache, dataset.features, g_logits)


def grad_loss(
    params: MlpParams, dataset: Dataset, gamma: Optional[np.ndarray] = None
) -> np.ndarray:
    """
    Gradiente analítico exacto de la pérdida dinámica.

    :return: Vector plano de longitud ``n_params``.
    """
    return loss_and_grad(params, dataset, gamma)[2]


def hvp(
    params: MlpParams,
    dataset: Dataset,
    gamma: Optional[np.ndarray],
    v: np.ndarray,
) -> np.ndarray:
    """
    Producto exacto ``H v`` de la Hessiana de la pérdida con ``v``.

    No materializa la Hessiana: propaga la dirección ``v`` hacia delante
    (operador R) y retropropaga las perturbaciones de primer orden.

    :param params: Parámetros de la red.
    :param dataset: Datos sobre los que se evalúa la pérdida.
    :param gamma: Pesos por clase (``None`` = unos).
    :param v: Dirección, longitud ``n_params``.
    :return: Vector ``H v`` de longitud ``n_params``.
    """
    _check_compatible(params, dataset)
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (params.n_params,):
        raise ConfigError(f"v must have length n_params = {params.n_params}")
    gamma = np.ones(params.num_classes) if gamma is None else np.asarray(gamma, dtype=np.float64)
    features, labels = dataset.features, dataset.labels
    n_samples = labels.shape[0]
    v_w1, v_b1, v_w2, v_b2 = params.split(v)

    cache = _forward(params, features)
    r_pre = features @ v_w1.T + v_b1
    r_hidden = r_pre * cache.mask
    r_logits = r_hidden @ params.W2.T + cache.hidden @ v_w2.T + v_b2

    probs = softmax(cache.logits)
    scale = (gamma[labels] / n_samples)[:, None]
    g_logits = probs.copy()
    g_logits[np.arange(n_samples), labels] -= 1.0
    g_logits *= scale
    r_probs = probs * (r_logits - (probs * r_logits).sum(axis=1, keepdims=True))
    r_g_logits = r_probs * scale

    r_w2 = r_g_logits.T @ cache.hidden + g_logits.T @ r_hidden
    r_b2 = r_g_logits.sum(axis=0)
    r_d_pre = (r_g_logits @ params.W2 + g_logits @ v_w2) * cache.mask
    r_w1 = r_d_pre.T @ features
    r_b1 = r_d_pre.sum(axis=0)
    return np.concatenate([r_w1.ravel(), r_b1, r_w2.ravel(), r_b2])


def output_jacobian(
    params: MlpParams,
    dataset: Dataset,
    max_entries: int = DEFAULT_MAX_JACOBIAN_ENTRIES,
) -> np.ndarray:
    """
    Jacobiano de los logits respecto al vector plano de parámetros.

    La fila ``j*C + k`` contiene el gradiente del logit ``k`` de la muestra
    ``j``.

    :param params: Parámetros de la red.
    :param dataset: Muestras.
    :param max_entries: Límite de entradas de la matriz resultante.
    :return: Matriz ``(P*C, n_params)``.
    :raises MemoryBudgetError: Si ``P*C*n_params`` supera ``max_entries``.
    """
    _check_compatible(params, dataset)
    n_samples = len(dataset)
    num_classes, width, in_dim = params.num_classes, params.width, params.in_dim
    entries = n_samples * num_classes * params.n_params
    if entries > max_entries:
        raise MemoryBudgetError(
            f"output Jacobian needs {entries} entries, cap is {max_entries}"
        )
    cache = _forward(params, dataset.features)
    eye = np.eye(num_classes)

    # d logit_k / d pre_i = W2[k, i] * relu'(pre_i)
    d_pre = params.W2[None, :, :] * cache.mask[:, None, :]
    d_w1 = (d_pre[..., None] * dataset.features[:, None, None, :]).reshape(
        n_samples, num_classes, width * in_dim
    )
    d_w2 = (eye[None, :, :, None] * cache.hidden[:, None, None, :]).reshape(
        n_samples, num_classes, num_classes * width
    )
    d_b2 = np.broadcast_to(eye, (n_samples, num_classes, num_classes))
    jac = np.concatenate([d_w1, d_pre, d_w2, d_b2], axis=2)
    return jac.reshape(n_samples * num_classes, params.n_params)


def accuracy_from_logits(logits: np.ndarray, labels: np.ndarray) -> float:
    """Fracción de aciertos; los empates se resuelven hacia el índice menor."""
    return float(np.mean(np.argmax(logits, axis=1) == labels))


def accuracy(params: MlpParams, dataset: Dataset) -> float:
    """
    Exactitud de clasificación de la red.

    :return: Valor en ``[0, 1]``.
    """
    return accuracy_from_logits(forward(params, dataset), dataset.labels)
