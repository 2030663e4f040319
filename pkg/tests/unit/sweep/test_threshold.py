"""Tests unitarios para el barrido de umbrales frente a la tasa de aprendizaje."""
import json

import pytest

from dynloss.exceptions import ConfigError
from dynloss.sweep import (
    RunTemplate,
    ScanOutcome,
    THRESHOLD_COLUMNS,
    rescaled_protocol,
    threshold_scan,
    write_threshold_csv,
)
from tests.fixtures.spiral_fixtures import stub_threshold_runner


@pytest.mark.unit
class TestRescaledProtocol:
    """Tests para rescaled_protocol"""

    @pytest.mark.parametrize(
        "eta,expected",
        [(0.25, (20000, 280000)), (0.5, (10000, 140000)), (1.0, (5000, 70000)), (2.0, (2500, 35000))],
    )
    def test_reference_values(self, eta, expected):
        """Test T = 5000/eta y pasos = 70000/eta"""
        assert rescaled_protocol(eta) == expected

    @pytest.mark.edge_case
    def test_non_positive(self):
        """Test eta no positivo"""
        with pytest.raises(ConfigError):
            rescaled_protocol(0.0)


@pytest.mark.unit
class TestThresholdScan:
    """Tests para threshold_scan"""

    def test_exact_inverse_law(self):
        """Test umbrales 2/eta -> exponente -1"""
        scan = threshold_scan([0.25, 0.5, 1.0, 2.0], runner=stub_threshold_runner)
        assert scan.fit.exponent == pytest.approx(-1.0, abs=1e-12)
        assert scan.per_width_fits[100].exponent == pytest.approx(-1.0, abs=1e-12)
        assert scan.missing == []
        assert scan.thresholds(100)[0.5] == pytest.approx(4.0)

    def test_points_carry_protocol(self):
        """Test cada punto guarda su protocolo reescalado"""
        scan = threshold_scan([1.0, 2.0], widths=[10, 20], runner=stub_threshold_runner)
        assert [(p.eta, p.width, p.period, p.total_steps) for p in scan.points] == [
            (1.0, 10, 5000, 70000),
            (1.0, 20, 5000, 70000),
            (2.0, 10, 2500, 35000),
            (2.0, 20, 2500, 35000),
        ]
        assert scan.fit is not None
        assert scan.per_width_fits == {10: None, 20: None}

    def test_missing_thresholds(self, tmp_path):
        """Test ejecuciones sin inestabilidad quedan fuera del ajuste"""

        def runner(task):
            if task.eta == 2.0:
                return ScanOutcome(threshold=None)
            return stub_threshold_runner(task)

        scan = threshold_scan([0.25, 0.5, 1.0, 2.0], runner=runner)
        assert [(p.eta, p.width) for p in scan.missing] == [(2.0, 100)]
        assert scan.fit.n_points == 3
        payload = json.loads(json.dumps(scan.to_dict()))
        assert payload["missing"] == [[2.0, 100]]

        lines = write_threshold_csv(scan, tmp_path / "threshold.csv").read_text().splitlines()
        assert lines[0] == ",".join(THRESHOLD_COLUMNS)
        assert lines[-1].split(",")[4] == ""

    def test_too_few_points(self):
        """Test sin ajuste con menos de 3 umbrales"""
        scan = threshold_scan([1.0, 2.0], runner=stub_threshold_runner)
        assert scan.fit is None
        assert scan.to_dict()["fit"] is None

    @pytest.mark.edge_case
    def test_invalid_inputs(self):
        """Test ejes vacíos y plantilla sin registro espectral"""
        with pytest.raises(ConfigError):
            threshold_scan([], runner=stub_threshold_runner)
        with pytest.raises(ConfigError):
            threshold_scan([1.0], widths=[0], runner=stub_threshold_runner)
        with pytest.raises(ConfigError):
            threshold_scan([1.0], template=RunTemplate(), runner=stub_threshold_runner)

    @pytest.mark.slow
    def test_default_runner_on_small_net(self):
        """Test runner por defecto sobre una red pequeña con protocolo corto"""
        template = RunTemplate(width=5, n_per_class=10, spectra_stride=10, lanczos_iters=10, log_every=10**6)
        scan = threshold_scan([50.0, 100.0], widths=[5], template=template)
        assert len(scan.points) == 2
        assert all(p.total_steps == round(70000 / p.eta) for p in scan.points)
