"""
Clasificación de la estabilidad del paso discreto de gradiente.

Para un autovalor ``lambda`` del NTK (o de la Hessiana) el modo asociado se
multiplica en cada paso por ``mu = 1 - (eta/n) lambda``:

- ``0 < mu < 1``: convergencia monótona (estable)
- ``-1 < mu <= 0``: convergencia con cambio de signo en cada paso
- ``mu <= -1``: divergencia con cambio de signo (dos ramas)
- ``mu >= 1``: sólo con ``lambda = 0``; el modo no se mueve (estable marginal)
"""

from enum import Enum
from typing import Dict, Iterable, Tuple

from ..exceptions import ConfigError


class StabilityRegime(Enum):
    """Régimen de un modo bajo el paso discreto."""

    STABLE = "stable"
    STABLE_MARGINAL = "stable_marginal"
    OSCILLATORY_CONVERGENT = "oscillatory_convergent"
    DIVERGENT = "divergent"


def stability_multiplier(lam: float, eta: float, n: int) -> float:
    """``mu = 1 - eta * lambda / n``."""
    return 1.0 - eta * lam / n


def critical_eigenvalues(eta: float, n: int) -> Tuple[float, float]:
    """
    Fronteras de los regímenes.

    :return: ``(n/eta, 2n/eta)``: inicio de la oscilación y de la divergencia.
    """
    return n / eta, 2.0 * n / eta


def classify_stability(lam: float, eta: float, n: int) -> StabilityRegime:
    """
    Régimen del modo con autovalor ``lam``.

    :param lam: Autovalor (``≥ 0``).
    :param eta: Tasa de aprendizaje (``> 0``).
    :param n: Número de muestras de la normalización (``≥ 1``).
    :return: :class:`StabilityRegime`.

    Ejemplo:
    --------
    .. code-block:: python

        classify_stability(450.0, 1.0, 300)  # OSCILLATORY_CONVERGENT
    """
    if lam < 0:
        raise ConfigError(f"eigenvalue must be ≥ 0, got {lam}")
    if not eta > 0:
        raise ConfigError("eta must be > 0", key="train.eta")
    if n < 1:
        raise ConfigError("n must be ≥ 1")
    mu = stability_multiplier(lam, eta, n)
    if mu >= 1.0:
        return StabilityRegime.STABLE_MARGINAL
    if mu > 0.0:
        return StabilityRegime.STABLE
    if mu > -1.0:
        return StabilityRegime.OSCILLATORY_CONVERGENT
    return StabilityRegime.DIVERGENT


def regime_counts(eigenvalues: Iterable[float], eta: float, n: int) -> Dict[str, int]:
    """Número de autovalores en cada régimen (los negativos por redondeo cuentan como 0)."""
    counts = {regime.value: 0 for regime in StabilityRegime}
    for lam in eigenvalues:
        counts[classify_stability(max(float(lam), 0.0), eta, n).value] += 1
    return counts
