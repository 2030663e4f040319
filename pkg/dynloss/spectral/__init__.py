"""
Módulo espectral: Lanczos, Hessiana, NTK, estabilidad y leyes de escala.

Classes:
    SpectrumEstimate: Valores de Ritz de una ejecución de Lanczos.
    NtkTrajectory: Evolución linealizada de los residuos.
    StabilityRegime: Régimen de un modo bajo el paso discreto.
    ExponentFit: Ajuste log-log del umbral frente a la tasa de aprendizaje.

Examples:
    >>> from dynloss.spectral import hessian_top_k, classify_stability
    >>> est = hessian_top_k(params, train, gamma, k=3)
    >>> classify_stability(450.0, eta=1.0, n=300)
    <StabilityRegime.OSCILLATORY_CONVERGENT: 'oscillatory_convergent'>
"""

from .hessian import (
    DEFAULT_DENSE_HESSIAN_CAP,
    dense_hessian,
    hessian_operator,
    hessian_top_k,
)
from .lanczos import DEFAULT_LANCZOS_ITERS, SpectrumEstimate, lanczos_top_k
from .matrix_io import load_matrix, save_matrix
from .ntk import (
    DEFAULT_MAX_NTK_ENTRIES,
    NtkTrajectory,
    ntk,
    ntk_top_eigenvalue,
    simulate_continuous_ntk,
    simulate_discrete_ntk,
)
from .scaling import ExponentFit, fit_threshold_exponent
from .stability import (
    StabilityRegime,
    classify_stability,
    critical_eigenvalues,
    regime_counts,
    stability_multiplier,
)

__all__ = [
    "DEFAULT_DENSE_HESSIAN_CAP",
    "DEFAULT_LANCZOS_ITERS",
    "DEFAULT_MAX_NTK_ENTRIES",
    "ExponentFit",
    "NtkTrajectory",
    "SpectrumEstimate",
    "StabilityRegime",
    "classify_stability",
    "critical_eigenvalues",
    "dense_hessian",
    "fit_threshold_exponent",
    "hessian_operator",
    "hessian_top_k",
    "lanczos_top_k",
    "load_matrix",
    "ntk",
    "ntk_top_eigenvalue",
    "regime_counts",
    "save_matrix",
    "simulate_continuous_ntk",
    "simulate_discrete_ntk",
    "stability_multiplier",
]
