"""Tests de integración para la línea de comandos ``dynloss``.

Ejecutan los subcomandos con redes y datasets pequeños sobre directorios
temporales y comprueban los ficheros producidos y los códigos de salida.
"""
import importlib
import json
import logging

import pandas as pd
import pytest

from dynloss import __version__
from dynloss.cli import main
from dynloss.config import OUTPUT_ROOT_ENV
from dynloss.data import load_csv
from dynloss.model import load_checkpoint
from dynloss.spectral import load_matrix
from tests.fixtures.spiral_fixtures import write_text

TINY_TRAIN = [
    "train",
    "--width", "5",
    "--n-per-class", "10",
    "--steps", "30",
    "--A", "5",
    "--T", "10",
    "--eta", "0.5",
    "--spectra-stride", "10",
    "--lanczos-iters", "10",
    "--val-stride", "5",
    "--seed", "1",
]


@pytest.fixture(autouse=True)
def reset_package_logger():
    yield
    logger = logging.getLogger("dynloss")
    for h in logger.handlers[:]:
        logger.removeHandler(h)
        h.close()


@pytest.mark.integration
class TestTopLevel:
    """Tests para las opciones globales"""

    def test_version(self, capsys):
        """Test --version"""
        assert main(["--version"]) == 0
        assert capsys.readouterr().out.strip() == f"dynloss {__version__}"

    def test_help_formats(self, capsys):
        """Test --help-formats describe los ficheros"""
        assert main(["--help-formats"]) == 0
        out = capsys.readouterr().out
        for name in ("trace.csv", "summary.json", "phase.csv", "manifest.json"):
            assert name in out

    def test_missing_subcommand(self, capsys):
        """Test sin subcomando -> 1"""
        assert main([]) == 1
        assert capsys.readouterr().err.startswith("dynloss: error:")

    def test_unknown_flag(self, capsys):
        """Test opción desconocida -> 1"""
        assert main(["train", "--bogus"]) == 1

    def test_unexpected_error_exits_two(self, tmp_path, capsys, mocker):
        """Test un error inesperado en un subcomando -> 2 con diagnóstico"""
        cli_module = importlib.import_module("dynloss.cli.main")
        boom = mocker.Mock(side_effect=RuntimeError("boom"))
        mocker.patch.dict(cli_module.COMMAND_HANDLERS, {"spiral-gen": boom})
        assert main(["spiral-gen", "--output-dir", str(tmp_path)]) == 2
        assert "boom" in capsys.readouterr().err
        boom.assert_called_once()


@pytest.mark.integration
class TestSpiralGen:
    """Tests para spiral-gen"""

    def test_writes_datasets_and_manifest(self, tmp_path):
        """Test train.csv, val.csv y manifest.json"""
        out = tmp_path / "data"
        assert main(["spiral-gen", "--n-per-class", "7", "--seed", "2", "--output-dir", str(out)]) == 0
        train_set = load_csv(out / "train.csv")
        val_set = load_csv(out / "val.csv")
        assert len(train_set) == 21 and len(val_set) == 21
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["command"] == "spiral-gen"
        assert manifest["artifacts"] == ["train.csv", "val.csv"]
        assert manifest["config"]["seed"] == 2


@pytest.mark.integration
class TestTrain:
    """Tests para train"""

    def test_tiny_run(self, tmp_path):
        """Test artefactos de una ejecución corta"""
        out = tmp_path / "run"
        assert main(TINY_TRAIN + ["--output-dir", str(out)]) == 0
        for name in ("trace.csv", "summary.json", "final.ckpt", "manifest.json", "run.log"):
            assert (out / name).exists()
        trace = pd.read_csv(out / "trace.csv")
        assert len(trace) == 30
        assert trace["hessian_eig_1"].notna().sum() == 3
        summary = json.loads((out / "summary.json").read_text())
        assert summary["steps_run"] == 30
        params, seed = load_checkpoint(out / "final.ckpt")
        assert (params.width, seed) == (5, 1)

    def test_default_records_spectra_every_50_steps(self, tmp_path):
        """Test sin --spectra-stride se registran espectros cada 50 pasos"""
        args = ["train", "--width", "5", "--n-per-class", "10", "--A", "5", "--T", "10",
                "--eta", "0.5", "--steps", "101", "--lanczos-iters", "10", "--seed", "1"]
        out = tmp_path / "run"
        assert main(args + ["--output-dir", str(out)]) == 0
        trace = pd.read_csv(out / "trace.csv")
        recorded = trace.loc[trace["hessian_eig_1"].notna(), "step"].tolist()
        assert recorded == [0, 50, 100]
        assert trace["ntk_top_eig"].notna().sum() == 3
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["config"]["spectra.stride"] == 50

    def test_no_spectra_switch(self, tmp_path):
        """Test --no-spectra deja vacías las columnas espectrales"""
        position = TINY_TRAIN.index("--spectra-stride")
        base = TINY_TRAIN[:position] + TINY_TRAIN[position + 2 :]
        out = tmp_path / "run"
        assert main(base + ["--no-spectra", "--output-dir", str(out)]) == 0
        trace = pd.read_csv(out / "trace.csv")
        assert trace["hessian_eig_1"].notna().sum() == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["config"]["spectra.stride"] is None

    def test_amplitude_below_one(self, tmp_path, capsys):
        """Test --A 0.5 -> código 1 y diagnóstico con la clave"""
        code = main(["train", "--A", "0.5", "--output-dir", str(tmp_path / "x")])
        assert code == 1
        err = capsys.readouterr().err
        assert "A must be ≥ 1" in err
        assert "train.A" in err
        assert not (tmp_path / "x").exists()

    def test_manifest_replay_is_byte_identical(self, tmp_path):
        """Test repetir desde el manifiesto reproduce trace.csv bit a bit"""
        first, second = tmp_path / "first", tmp_path / "second"
        assert main(TINY_TRAIN + ["--output-dir", str(first)]) == 0
        assert main(["train", "--manifest", str(first / "manifest.json"), "--output-dir", str(second)]) == 0
        assert (first / "trace.csv").read_bytes() == (second / "trace.csv").read_bytes()
        assert (first / "summary.json").read_bytes() == (second / "summary.json").read_bytes()

    def test_manifest_command_mismatch(self, tmp_path):
        """Test un manifiesto de spiral-gen no sirve para train"""
        out = tmp_path / "data"
        assert main(["spiral-gen", "--n-per-class", "3", "--output-dir", str(out)]) == 0
        assert main(["train", "--manifest", str(out / "manifest.json"), "--output-dir", str(tmp_path / "r")]) == 1

    def test_config_file(self, tmp_path):
        """Test fichero de configuración con sobrescritura desde la CLI"""
        config = write_text(
            tmp_path,
            "run.cfg",
            "model.width = 4\ndataset.n_per_class = 5\ntrain.steps = 40\ntrain.val_stride = 10\n",
        )
        out = tmp_path / "run"
        assert main(["train", "--config", str(config), "--steps", "6", "--output-dir", str(out)]) == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["config"]["model.width"] == 4
        assert manifest["config"]["train.steps"] == 6

    def test_divergence_exits_two_and_keeps_outputs(self, tmp_path):
        """Test divergencia -> código 2 con traza escrita"""
        config = write_text(tmp_path, "div.cfg", "train.divergence_limit = 10\n")
        out = tmp_path / "div"
        args = ["train", "--config", str(config), "--width", "5", "--n-per-class", "10",
                "--steps", "20", "--eta", "1000000", "--output-dir", str(out)]
        assert main(args) == 2
        summary = json.loads((out / "summary.json").read_text())
        assert summary["diverged"] is True

    def test_train_from_csv(self, tmp_path):
        """Test entrenamiento sobre los CSV de spiral-gen"""
        data = tmp_path / "data"
        assert main(["spiral-gen", "--n-per-class", "6", "--output-dir", str(data)]) == 0
        out = tmp_path / "run"
        args = ["train", "--width", "4", "--steps", "5", "--train-csv", str(data / "train.csv"),
                "--val-csv", str(data / "val.csv"), "--output-dir", str(out)]
        assert main(args) == 0
        assert len(pd.read_csv(out / "trace.csv")) == 5

    def test_malformed_dataset_exits_three(self, tmp_path, capsys):
        """Test dataset con una fila inválida -> código 3 nombrando la fila"""
        bad = write_text(tmp_path, "bad.csv", "x0,x1,label,C=3\n0.1,0.2,0\n0.3,0.4,7\n")
        args = ["train", "--train-csv", str(bad), "--val-csv", str(bad), "--output-dir", str(tmp_path / "o")]
        assert main(args) == 3
        assert "row 2" in capsys.readouterr().err

    def test_unwritable_output_dir(self, tmp_path):
        """Test directorio de salida no escribible -> código 3"""
        blocker = write_text(tmp_path, "blocker", "x")
        assert main(TINY_TRAIN + ["--output-dir", str(blocker / "run")]) == 3

    def test_output_root_from_environment(self, tmp_path, monkeypatch):
        """Test DYNLOSS_OUTPUT_ROOT sustituye a output.dir"""
        monkeypatch.setenv(OUTPUT_ROOT_ENV, str(tmp_path / "env-root"))
        assert main(["spiral-gen", "--n-per-class", "3"]) == 0
        assert (tmp_path / "env-root" / "train.csv").exists()


@pytest.mark.integration
class TestSpectra:
    """Tests para spectra"""

    def test_checkpoint_spectra_and_dumps(self, tmp_path):
        """Test espectros de un checkpoint y volcado de matrices"""
        run = tmp_path / "run"
        assert main(TINY_TRAIN + ["--output-dir", str(run)]) == 0
        out = tmp_path / "spectra"
        args = ["spectra", "--checkpoint", str(run / "final.ckpt"), "--n-per-class", "10",
                "--lanczos-iters", "20", "--dump-matrices", "--output-dir", str(out)]
        assert main(args) == 0
        payload = json.loads((out / "spectra.json").read_text())
        assert len(payload["hessian_top_eigs"]) == 3
        assert payload["ntk_regime"] in ("stable", "stable_marginal", "oscillatory_convergent", "divergent")
        assert payload["n_samples"] == 30
        assert load_matrix(out / "hessian.bin").shape == (33, 33)
        assert load_matrix(out / "ntk.bin").shape == (90, 90)

    def test_requires_checkpoint(self, tmp_path, capsys):
        """Test sin checkpoint -> código 1"""
        assert main(["spectra", "--output-dir", str(tmp_path / "s")]) == 1
        assert "spectra.checkpoint" in capsys.readouterr().err

    def test_missing_checkpoint_file(self, tmp_path):
        """Test checkpoint inexistente -> código 3"""
        args = ["spectra", "--checkpoint", str(tmp_path / "none.ckpt"), "--output-dir", str(tmp_path / "s")]
        assert main(args) == 3


@pytest.mark.integration
class TestSweeps:
    """Tests para sweep y threshold-scan"""

    def test_sweep_tiny_grid(self, tmp_path):
        """Test diagrama de fase pequeño"""
        out = tmp_path / "sweep"
        args = ["sweep", "--width", "5", "--n-per-class", "10", "--steps", "12", "--val-stride", "4",
                "--T-values", "4", "--A-values", "1,5", "--n-seeds", "2", "--jobs", "1",
                "--output-dir", str(out)]
        assert main(args) == 0
        lines = (out / "phase.csv").read_text().splitlines()
        assert lines[0] == "T,A,seed,train_acc,val_acc"
        assert len(lines) == 5
        payload = json.loads((out / "phase.json").read_text())
        assert len(payload["cells"]) == 2
        assert (out / "run.log").exists()

    def test_sweep_rejects_bad_amplitude(self, tmp_path):
        """Test amplitud < 1 en el eje A -> código 1"""
        args = ["sweep", "--A-values", "0.5,2", "--output-dir", str(tmp_path / "s")]
        assert main(args) == 1

    def test_threshold_scan_short_protocol(self, tmp_path):
        """Test barrido de umbrales con tasas grandes (protocolo corto)"""
        out = tmp_path / "scan"
        args = ["threshold-scan", "--eta-values", "100,200", "--widths", "5", "--n-per-class", "10",
                "--scan-stride", "50", "--lanczos-iters", "10", "--jobs", "1", "--output-dir", str(out)]
        assert main(args) == 0
        lines = (out / "threshold.csv").read_text().splitlines()
        assert lines[0] == "eta,width,T,steps,threshold,n_intervals,diverged"
        assert len(lines) == 3
        assert "fit" in json.loads((out / "threshold.json").read_text())
