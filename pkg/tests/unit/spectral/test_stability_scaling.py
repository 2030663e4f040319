"""Tests unitarios para la clasificación de estabilidad y el ajuste de exponentes."""
import numpy as np
import pytest

from dynloss.exceptions import ConfigError
from dynloss.spectral import (
    StabilityRegime,
    classify_stability,
    critical_eigenvalues,
    fit_threshold_exponent,
    regime_counts,
    stability_multiplier,
)


@pytest.mark.unit
class TestClassifyStability:
    """Tests para classify_stability"""

    @pytest.mark.parametrize(
        "lam,regime",
        [
            (150.0, StabilityRegime.STABLE),
            (450.0, StabilityRegime.OSCILLATORY_CONVERGENT),
            (700.0, StabilityRegime.DIVERGENT),
            (0.0, StabilityRegime.STABLE_MARGINAL),
        ],
    )
    def test_reference_values(self, lam, regime):
        """Test eta = 1, n = 300"""
        assert classify_stability(lam, 1.0, 300) is regime

    def test_exact_boundaries(self):
        """Test lambda = n/eta es oscilatorio y lambda = 2n/eta diverge"""
        low, high = critical_eigenvalues(1.0, 300)
        assert (low, high) == (300.0, 600.0)
        assert classify_stability(low, 1.0, 300) is StabilityRegime.OSCILLATORY_CONVERGENT
        assert classify_stability(high, 1.0, 300) is StabilityRegime.DIVERGENT
        assert classify_stability(np.nextafter(low, 0), 1.0, 300) is StabilityRegime.STABLE
        assert classify_stability(np.nextafter(high, 0), 1.0, 300) is StabilityRegime.OSCILLATORY_CONVERGENT

    def test_multiplier(self):
        """Test mu = 1 - eta lambda / n"""
        assert stability_multiplier(700.0, 1.0, 300) == pytest.approx(-4 / 3)

    def test_regime_counts(self):
        """Test recuento por régimen con autovalores ligeramente negativos"""
        counts = regime_counts([-1e-12, 150.0, 450.0, 500.0, 700.0], 1.0, 300)
        assert counts == {
            "stable": 1,
            "stable_marginal": 1,
            "oscillatory_convergent": 2,
            "divergent": 1,
        }

    @pytest.mark.edge_case
    def test_invalid_inputs(self):
        """Test autovalor negativo, eta nulo y n nulo"""
        with pytest.raises(ConfigError):
            classify_stability(-1.0, 1.0, 300)
        with pytest.raises(ConfigError):
            classify_stability(1.0, 0.0, 300)
        with pytest.raises(ConfigError):
            classify_stability(1.0, 1.0, 0)


@pytest.mark.unit
class TestFitThresholdExponent:
    """Tests para fit_threshold_exponent"""

    def test_exact_power_law(self):
        """Test umbrales 2/eta -> exponente -1"""
        etas = [0.25, 0.5, 1.0, 2.0]
        fit = fit_threshold_exponent(etas, [2.0 / eta for eta in etas])
        assert fit.exponent == pytest.approx(-1.0, abs=1e-12)
        assert fit.intercept == pytest.approx(np.log(2.0), abs=1e-12)
        assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
        assert fit.n_points == 4

    def test_noisy_power_law(self):
        """Test c eta^-0.9 con 1% de ruido"""
        etas = np.geomspace(0.25, 2.0, 8)
        noise = 1.0 + 0.01 * np.random.default_rng(0).normal(size=8)
        fit = fit_threshold_exponent(etas, 40.0 * etas**-0.9 * noise)
        assert fit.exponent == pytest.approx(-0.9, abs=0.05)

    def test_to_dict(self):
        """Test serialización del ajuste"""
        fit = fit_threshold_exponent([1.0, 2.0, 4.0], [4.0, 2.0, 1.0])
        assert set(fit.to_dict()) == {"exponent", "intercept", "r_squared", "n_points"}

    @pytest.mark.edge_case
    @pytest.mark.parametrize(
        "etas,thresholds",
        [
            ([1.0, 2.0], [1.0, 0.5]),
            ([1.0, 2.0, 4.0], [1.0, 0.5]),
            ([1.0, 2.0, 4.0], [1.0, 0.0, 0.25]),
            ([-1.0, 2.0, 4.0], [1.0, 0.5, 0.25]),
            ([1.0, 1.0, 1.0], [1.0, 0.5, 0.25]),
        ],
    )
    def test_invalid_inputs(self, etas, thresholds):
        """Test pocos pares, longitudes distintas y valores no positivos"""
        with pytest.raises(ConfigError):
            fit_threshold_exponent(etas, thresholds)
