"""Tests unitarios para el NTK y la dinámica linealizada de los residuos."""
import numpy as np
import pytest

from dynloss.exceptions import ConfigError, MemoryBudgetError
from dynloss.model import output_jacobian
from dynloss.spectral import ntk, ntk_top_eigenvalue, simulate_continuous_ntk, simulate_discrete_ntk
from tests.fixtures.spiral_fixtures import small_dataset, tiny_params


def rotated_diagonal(eigenvalues, seed=0):
    """Matriz simétrica con autovalores dados en una base aleatoria."""
    q, _ = np.linalg.qr(np.random.default_rng(seed).normal(size=(len(eigenvalues),) * 2))
    return q @ np.diag(eigenvalues) @ q.T


@pytest.mark.unit
class TestNtkMatrix:
    """Tests para ntk / ntk_top_eigenvalue"""

    def test_linear_model_blocks(self):
        """Test modelo lineal: bloques x_i . x_j"""
        x1, x2 = np.array([1.0, 2.0, 0.5]), np.array([-1.0, 0.0, 3.0])
        theta = ntk(np.stack([x1, x2]))
        np.testing.assert_allclose(theta, [[x1 @ x1, x1 @ x2], [x2 @ x1, x2 @ x2]])

    def test_spiral_net_symmetric_psd(self):
        """Test Theta simétrico y semidefinido positivo"""
        jacobian = output_jacobian(tiny_params(), small_dataset())
        theta = ntk(jacobian)
        assert theta.shape == (90, 90)
        assert np.max(np.abs(theta - theta.T)) < 1e-10
        assert np.linalg.eigvalsh(theta).min() >= -1e-8

    @pytest.mark.parametrize("shape", [(90, 38), (12, 40)])
    def test_top_eigenvalue_via_smaller_gram(self, shape):
        """Test el autovalor mayor no depende del Gram elegido"""
        jacobian = np.random.default_rng(1).normal(size=shape)
        expected = np.linalg.eigvalsh(jacobian @ jacobian.T).max()
        assert ntk_top_eigenvalue(jacobian) == pytest.approx(expected, rel=1e-10)

    @pytest.mark.edge_case
    def test_budget_and_finite(self):
        """Test límite de memoria y Jacobiano no finito"""
        with pytest.raises(MemoryBudgetError):
            ntk(np.ones((20, 3)), max_entries=100)
        with pytest.raises(ConfigError):
            ntk(np.array([[np.nan, 1.0]]))


@pytest.mark.unit
class TestDiscreteDynamics:
    """Tests para simulate_discrete_ntk"""

    def test_norm_halves(self):
        """Test Theta = lambda I con mu = 0.5"""
        g0 = np.array([3.0, -4.0])
        trajectory = simulate_discrete_ntk(150.0 * np.eye(2), g0, eta=1.0, n=300, steps=100)
        expected = 5.0 * 0.5 ** np.arange(101)
        np.testing.assert_allclose(trajectory.norms, expected, rtol=1e-10)
        assert not trajectory.overflowed

    def test_sign_flips_with_negative_multiplier(self):
        """Test mu = -0.5: el coeficiente cambia de signo y se divide por 2"""
        trajectory = simulate_discrete_ntk(np.array([[450.0]]), np.array([1.0]), 1.0, 300, 20)
        coefficients = trajectory.mode_coefficients[:, 0]
        assert np.all(coefficients[1:] * coefficients[:-1] < 0)
        np.testing.assert_allclose(np.abs(coefficients[1:] / coefficients[:-1]), 0.5, rtol=1e-12)

    def test_modes_follow_scalar_law(self):
        """Test cada modo evoluciona como mu^t (0.5, -0.5, -1.2)"""
        theta = rotated_diagonal([150.0, 450.0, 660.0])
        g0 = np.array([0.3, -1.0, 0.7])
        trajectory = simulate_discrete_ntk(theta, g0, eta=1.0, n=300, steps=100)
        np.testing.assert_allclose(trajectory.multipliers, [0.5, -0.5, -1.2], atol=1e-12)
        powers = trajectory.multipliers[None, :] ** np.arange(101)[:, None]
        expected = trajectory.mode_coefficients[0][None, :] * powers
        np.testing.assert_allclose(
            trajectory.mode_coefficients, expected, rtol=0, atol=1e-10 * np.abs(expected).max()
        )

    def test_overflow_truncates(self):
        """Test mu = -10 trunca la serie por desbordamiento"""
        trajectory = simulate_discrete_ntk(np.array([[3300.0]]), np.array([1.0]), 1.0, 300, 1000)
        assert trajectory.overflowed
        assert len(trajectory.norms) < 200
        assert np.all(np.isfinite(trajectory.norms))

    @pytest.mark.edge_case
    def test_invalid_inputs(self):
        """Test dimensiones incompatibles y eta no positivo"""
        with pytest.raises(ConfigError):
            simulate_discrete_ntk(np.eye(2), np.ones(3), 1.0, 10, 5)
        with pytest.raises(ConfigError):
            simulate_discrete_ntk(np.eye(2), np.ones(2), 0.0, 10, 5)


@pytest.mark.unit
class TestContinuousDynamics:
    """Tests para simulate_continuous_ntk"""

    def test_exponential_decay(self):
        """Test Theta = lambda I decae como exp(-(eta/n) lambda t)"""
        times = np.array([0.0, 1.0, 10.0, 100.0])
        norms = simulate_continuous_ntk(450.0 * np.eye(2), np.array([3.0, 4.0]), 1.0, 300, times)
        np.testing.assert_allclose(norms, 5.0 * np.exp(-1.5 * times), rtol=1e-12)

    def test_never_oscillates(self):
        """Test el flujo continuo es monótono incluso con lambda > 2n/eta"""
        theta = rotated_diagonal([10.0, 700.0, 2000.0], seed=2)
        norms = simulate_continuous_ntk(theta, np.ones(3), 1.0, 300, np.arange(50.0))
        assert np.all(np.diff(norms) <= 0)

    @pytest.mark.edge_case
    def test_negative_time(self):
        """Test instantes negativos"""
        with pytest.raises(ConfigError):
            simulate_continuous_ntk(np.eye(1), np.ones(1), 1.0, 1, np.array([-1.0]))
