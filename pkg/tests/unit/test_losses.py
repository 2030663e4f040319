"""Tests unitarios para la pérdida dinámica y los residuos MSE."""
import numpy as np
import pytest

from dynloss.exceptions import ConfigError
from dynloss.loss import (
    cross_entropy,
    dynamical_ce,
    dynamical_ce_logit_grad,
    log_softmax,
    mse_grad_logits,
    mse_loss,
    residuals,
    softmax,
)
from tests.fixtures.spiral_fixtures import central_difference, relative_error


@pytest.fixture
def batch():
    rng = np.random.default_rng(3)
    logits = rng.normal(size=(12, 3))
    labels = rng.integers(0, 3, size=12)
    return logits, labels


@pytest.mark.unit
class TestDynamicalCe:
    """Tests para dynamical_ce"""

    def test_uniform_logits(self):
        """Test logits uniformes dan ln 3"""
        assert dynamical_ce(np.zeros((4, 3)), np.array([0, 1, 2, 0])) == pytest.approx(np.log(3), rel=1e-14)

    def test_ones_equals_cross_entropy(self, batch):
        """Test gamma = 1 coincide con la entropía cruzada"""
        logits, labels = batch
        assert dynamical_ce(logits, labels, np.ones(3)) == cross_entropy(logits, labels)

    def test_hand_value(self):
        """Test un ejemplo con prob. 0.5 y gamma_y = 2.5"""
        logits = np.array([[np.log(2.0), 0.0, 0.0]])
        gamma = np.array([2.5, 0.25, 0.25])
        assert dynamical_ce(logits, np.array([0]), gamma) == pytest.approx(2.5 * np.log(2), rel=1e-12)

    def test_shift_invariance(self, batch):
        """Test sumar una constante por fila no cambia la pérdida"""
        logits, labels = batch
        shifted = logits + np.arange(12)[:, None] * 3.0
        assert dynamical_ce(shifted, labels) == pytest.approx(dynamical_ce(logits, labels), rel=1e-12)

    def test_linear_in_gamma(self, batch):
        """Test combinación convexa de pesos"""
        logits, labels = batch
        g1, g2, alpha = np.array([2.0, 0.5, 0.5]), np.array([0.5, 0.5, 2.0]), 0.3
        mixed = dynamical_ce(logits, labels, alpha * g1 + (1 - alpha) * g2)
        expected = alpha * dynamical_ce(logits, labels, g1) + (1 - alpha) * dynamical_ce(logits, labels, g2)
        assert mixed == pytest.approx(expected, rel=1e-12)

    def test_large_logits_are_stable(self):
        """Test logits grandes no producen overflow"""
        logits = np.array([[1000.0, 0.0, -1000.0]])
        assert dynamical_ce(logits, np.array([0])) == pytest.approx(0.0, abs=1e-12)
        assert dynamical_ce(logits, np.array([2])) == pytest.approx(2000.0, rel=1e-12)
        assert np.all(np.isfinite(log_softmax(logits)))

    def test_logit_grad_matches_finite_differences(self, batch):
        """Test gradiente respecto a los logits"""
        logits, labels = batch
        gamma = np.array([1.7, 0.4, 0.9])
        analytic = dynamical_ce_logit_grad(logits, labels, gamma).ravel()
        numeric = central_difference(
            lambda flat: dynamical_ce(flat.reshape(12, 3), labels, gamma), logits.ravel()
        )
        assert relative_error(analytic, numeric) < 1e-7

    @pytest.mark.edge_case
    def test_invalid_inputs(self, batch):
        """Test gamma y etiquetas inválidas"""
        logits, labels = batch
        with pytest.raises(ConfigError):
            dynamical_ce(logits, labels, np.ones(2))
        with pytest.raises(ConfigError):
            dynamical_ce(logits, np.full(12, 3))


@pytest.mark.unit
class TestMse:
    """Tests para mse_loss / residuals"""

    def test_perfect_logits(self):
        """Test logits one-hot dan pérdida y residuo nulos"""
        labels = np.array([0, 2, 1])
        logits = np.eye(3)[labels]
        assert mse_loss(logits, labels) == 0.0
        np.testing.assert_array_equal(residuals(logits, labels), np.zeros(9))

    def test_zero_logits(self):
        """Test logits nulos: 0.5 y -1 en las coordenadas de la etiqueta"""
        labels = np.array([0, 2, 1, 1])
        assert mse_loss(np.zeros((4, 3)), labels) == pytest.approx(0.5, rel=1e-15)
        g = residuals(np.zeros((4, 3)), labels).reshape(4, 3)
        np.testing.assert_array_equal(g, -np.eye(3)[labels])

    def test_quadratic_and_consistency(self, batch):
        """Test duplicar residuos cuadruplica la pérdida y |g|^2/(2P)"""
        logits, labels = batch
        onehot = np.eye(3)[labels]
        doubled = onehot + 2.0 * (logits - onehot)
        assert mse_loss(doubled, labels) == pytest.approx(4 * mse_loss(logits, labels), rel=1e-12)
        g = residuals(logits, labels)
        assert g @ g / 24 == pytest.approx(mse_loss(logits, labels), rel=1e-14)

    def test_grad(self, batch):
        """Test gradiente MSE respecto a los logits"""
        logits, labels = batch
        numeric = central_difference(lambda flat: mse_loss(flat.reshape(12, 3), labels), logits.ravel())
        assert relative_error(mse_grad_logits(logits, labels).ravel(), numeric) < 1e-7


@pytest.mark.unit
def test_softmax_rows_sum_to_one():
    """Test softmax normalizado por filas"""
    probs = softmax(np.random.default_rng(0).normal(size=(5, 4)) * 50)
    np.testing.assert_allclose(probs.sum(axis=1), 1.0, rtol=1e-14)
