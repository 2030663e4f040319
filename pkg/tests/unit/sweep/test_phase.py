"""Tests unitarios para los diagramas de fase."""
import json
from unittest.mock import Mock

import numpy as np
import pandas as pd
import pytest

from dynloss.exceptions import ConfigError
from dynloss.seeding import derive_seed
from dynloss.sweep import (
    PHASE_COLUMNS,
    PhaseDiagram,
    RunResult,
    RunState,
    RunTemplate,
    phase_diagram,
    phase_tasks,
    train_from_seed,
    write_phase_csv,
)

TINY = RunTemplate(width=5, n_per_class=10, total_steps=12, val_stride=4, log_every=1000)


def make_result(period, amplitude, replicate, acc, state=RunState.SUCCESS):
    return RunResult(
        period=period,
        amplitude=amplitude,
        replicate=replicate,
        seed=replicate,
        state=state,
        train_acc=acc,
        val_acc=acc,
        duration=0.0,
    )


@pytest.fixture(scope="module")
def diagram():
    return phase_diagram([4, 6], [1.0, 5.0], TINY, n_seeds=2, seed_base=3)


@pytest.mark.unit
class TestPhaseTasks:
    """Tests para phase_tasks"""

    def test_seeds_by_indices(self):
        """Test semilla derivada de (base, índice T, índice A, réplica)"""
        tasks = phase_tasks([4, 6], [1.0, 5.0], TINY, n_seeds=2, seed_base=3)
        assert len(tasks) == 8
        assert tasks[-1].seed == derive_seed(3, 1, 1, 1)
        assert len({task.seed for task in tasks}) == 8

    @pytest.mark.edge_case
    @pytest.mark.parametrize(
        "T_values,A_values,n_seeds",
        [([], [1.0], 1), ([1], [1.0], 1), ([4], [0.5], 1), ([4], [1.0], 0)],
    )
    def test_invalid_grid(self, T_values, A_values, n_seeds):
        """Test ejes vacíos o fuera de rango"""
        with pytest.raises(ConfigError):
            phase_tasks(T_values, A_values, TINY, n_seeds)


@pytest.mark.unit
class TestPhaseDiagram:
    """Tests para phase_diagram / PhaseDiagram"""

    def test_long_frame(self, diagram):
        """Test una fila por ejecución en formato largo"""
        frame = diagram.to_long_frame()
        assert list(frame.columns) == PHASE_COLUMNS
        assert len(frame) == 8
        assert frame["train_acc"].between(0, 1).all()

    def test_static_row_matches_direct_training(self, diagram):
        """Test la fila A = 1 coincide con entrenar directamente con esa semilla"""
        first = diagram.results[0]
        assert (first.period, first.amplitude, first.replicate) == (4, 1.0, 0)
        trace = train_from_seed(TINY, 4, 1.0, derive_seed(3, 0, 0, 0))
        assert first.train_acc == trace.final_train_accuracy
        assert first.val_acc == trace.final_val_accuracy

    def test_aggregate(self, diagram):
        """Test una fila agregada por celda con medias en [0, 1]"""
        table = diagram.aggregate()
        assert len(table) == 4
        assert table["n"].tolist() == [2, 2, 2, 2]
        assert table["train_acc_mean"].between(0, 1).all()
        assert diagram.mean_grid("val_acc").shape == (2, 2)
        assert diagram.metrics.to_dict()["total_runs"] == 8

    def test_independent_of_jobs(self, diagram):
        """Test los resultados no dependen del número de procesos"""
        parallel = phase_diagram([4, 6], [1.0, 5.0], TINY, n_seeds=2, seed_base=3, jobs=2)
        pd.testing.assert_frame_equal(parallel.to_long_frame(), diagram.to_long_frame())

    def test_to_dict_is_json_serializable(self, diagram):
        """Test el agregado se serializa a JSON"""
        payload = json.loads(json.dumps(diagram.to_dict()))
        assert payload["n_seeds"] == 2
        assert len(payload["cells"]) == 4

    def test_write_phase_csv(self, tmp_path, diagram):
        """Test cabecera del CSV"""
        path = write_phase_csv(diagram, tmp_path / "phase.csv")
        assert path.read_text().splitlines()[0] == "T,A,seed,train_acc,val_acc"

    def test_logs_to_injected_logger(self):
        """Test progreso en el logger inyectado"""
        logger = Mock()
        phase_diagram([4], [1.0], TINY, n_seeds=1, logger=logger)
        assert logger.info.called


@pytest.mark.unit
class TestAggregate:
    """Tests para la agregación con ejecuciones fallidas y divergentes"""

    def test_failed_excluded_and_diverged_zero(self):
        """Test FAILED se excluye y DIVERGED cuenta como 0"""
        diagram = PhaseDiagram(
            T_values=[4],
            A_values=[2.0],
            n_seeds=3,
            results=[
                make_result(4, 2.0, 0, 0.9),
                make_result(4, 2.0, 1, 0.0, RunState.DIVERGED),
                make_result(4, 2.0, 2, float("nan"), RunState.FAILED),
            ],
        )
        row = diagram.aggregate().iloc[0]
        assert row["n"] == 2
        assert row["divergent"] == 1
        assert row["failed"] == 1
        assert row["train_acc_mean"] == pytest.approx(0.45)
        assert row["train_acc_sd"] == pytest.approx(np.std([0.9, 0.0], ddof=1))
        assert row["train_acc_low"] == 0.0
        assert json.dumps(diagram.to_dict())

    def test_bands_clipped(self):
        """Test bandas media ± sd recortadas a [0, 1]"""
        diagram = PhaseDiagram(
            T_values=[4],
            A_values=[1.0],
            n_seeds=2,
            results=[make_result(4, 1.0, 0, 1.0), make_result(4, 1.0, 1, 0.6)],
        )
        row = diagram.aggregate().iloc[0]
        assert row["train_acc_high"] == 1.0
        assert row["train_acc_sem"] == pytest.approx(row["train_acc_sd"] / np.sqrt(2))
