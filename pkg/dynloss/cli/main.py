"""
Punto de entrada de la línea de comandos.

Subcomandos: ``spiral-gen``, ``train``, ``sweep``, ``threshold-scan`` y
``spectra``. Códigos de salida: 0 éxito, 1 error de uso o configuración,
2 divergencia o ejecución abortada, 3 error de E/S.

Ejemplo:
--------
.. code-block:: bash

    dynloss train --width 100 --A 70 --T 5000 --eta 1 --steps 70000 \\
        --output-dir runs/oscillation
    dynloss train --A 1 --steps 35000 --no-spectra --output-dir runs/static
"""

import argparse
import logging
import sys
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from .. import __version__
from ..config import RunConfig, output_root
from ..data import Dataset, generate_spiral_pair, load_csv
from ..exceptions import (
    ArtifactIOError,
    ConfigError,
    DatasetFormatError,
    DynLossError,
    TrainingDivergedError,
)
from ..handler import LoggingHandler
from ..model import init_params, load_checkpoint, output_jacobian
from ..schedule import OscillationSchedule
from ..seeding import derive_seed
from ..spectral import (
    classify_stability,
    dense_hessian,
    hessian_top_k,
    ntk,
    ntk_top_eigenvalue,
)
from ..sweep import RunTemplate, default_jobs, phase_diagram, threshold_scan
from ..training import TrainConfig, train
from .formats import HELP_FORMATS
from .outputs import HESSIAN_BIN, NTK_BIN, RunArtifacts, emit_outputs, load_manifest

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2
EXIT_IO = 3

DUMP_HESSIAN_CAP = 5000
SWEEP_LOG_MAX_BYTES = 10 * 1024 * 1024
ROTATING_LOG_COMMANDS = ("sweep", "threshold-scan")


class UsageError(ConfigError):
    """Error de argumentos de la línea de comandos."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _option(parser: argparse.ArgumentParser, flag: str, key: str, kind: Any, help_text: str) -> None:
    parser.add_argument(flag, dest=key, type=kind, default=None, help=f"{help_text} [{key}]")


def _switch(parser: argparse.ArgumentParser, flag: str, key: str, value: Any, help_text: str) -> None:
    parser.add_argument(
        flag, dest=key, action="store_const", const=value, default=None, help=f"{help_text} [{key}]"
    )


def _common_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--manifest", help="replay the configuration stored in a manifest.json")
    common.add_argument("--output-dir", help="output directory (overrides DYNLOSS_OUTPUT_ROOT)")
    _option(common, "--jobs", "jobs", int, "worker processes")
    _option(common, "--seed", "seed", int, "root seed")
    common.add_argument(
        "--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"]
    )
    return common


def _dataset_options(parser: argparse.ArgumentParser) -> None:
    _option(parser, "--n-per-class", "dataset.n_per_class", str, "points per class")
    _option(parser, "--num-classes", "dataset.num_classes", str, "number of classes")
    _option(parser, "--noise", "dataset.noise_sd", str, "angular noise sd")


def _model_options(parser: argparse.ArgumentParser) -> None:
    _option(parser, "--width", "model.width", str, "hidden units")
    _option(parser, "--eta", "train.eta", str, "learning rate")
    _option(parser, "--steps", "train.steps", str, "gradient steps")
    _option(parser, "--val-stride", "train.val_stride", str, "validation accuracy stride")
    _option(parser, "--log-every", "train.log_every", str, "progress log stride")


def _spectra_options(parser: argparse.ArgumentParser) -> None:
    _option(parser, "--top-k", "spectra.top_k", str, "Hessian eigenvalues per record")
    _option(parser, "--lanczos-iters", "spectra.lanczos_iters", str, "Lanczos iterations")


def build_parser() -> argparse.ArgumentParser:
    """Parser completo de la CLI."""
    parser = _Parser(
        prog="dynloss",
        description="Dynamical loss functions: training, spectra and sweeps on the spiral dataset",
    )
    parser.add_argument("--version", action="store_true", help="print the version and exit")
    parser.add_argument(
        "--help-formats", action="store_true", help="describe the output file formats and exit"
    )
    common = _common_parser()
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    gen = sub.add_parser("spiral-gen", parents=[common], help="write train.csv and val.csv")
    _dataset_options(gen)

    run = sub.add_parser("train", parents=[common], help="single training run")
    _dataset_options(run)
    _model_options(run)
    _spectra_options(run)
    _option(run, "--A", "train.A", str, "oscillation amplitude")
    _option(run, "--T", "train.T", str, "oscillation period")
    _option(run, "--stop-step", "train.stop_step", str, "step at which oscillations stop")
    _switch(run, "--stop-last-period", "train.stop_last_period", True, "gamma = 1 in the last period")
    _option(run, "--spectra-stride", "spectra.stride", str, "spectra recording stride (none disables)")
    _switch(run, "--no-spectra", "spectra.stride", "none", "do not record Hessian or NTK spectra")
    _switch(run, "--no-ntk", "spectra.record_ntk", False, "do not record the NTK eigenvalue")
    _option(run, "--train-csv", "dataset.train_path", str, "training set CSV")
    _option(run, "--val-csv", "dataset.val_path", str, "validation set CSV")

    sweep = sub.add_parser("sweep", parents=[common], help="(T, A) phase diagram")
    _dataset_options(sweep)
    _model_options(sweep)
    _option(sweep, "--T-values", "sweep.T_values", str, "comma-separated periods")
    _option(sweep, "--A-values", "sweep.A_values", str, "comma-separated amplitudes")
    _option(sweep, "--n-seeds", "sweep.n_seeds", str, "replicates per cell")

    scan = sub.add_parser("threshold-scan", parents=[common], help="threshold vs learning rate")
    _dataset_options(scan)
    _spectra_options(scan)
    _option(scan, "--eta-values", "scan.eta_values", str, "comma-separated learning rates")
    _option(scan, "--widths", "scan.widths", str, "comma-separated widths")
    _option(scan, "--scan-A", "scan.A", str, "oscillation amplitude")
    _option(scan, "--scan-stride", "scan.stride", str, "spectra recording stride")

    spectra = sub.add_parser("spectra", parents=[common], help="Hessian/NTK spectra of a checkpoint")
    _dataset_options(spectra)
    _spectra_options(spectra)
    _option(spectra, "--checkpoint", "spectra.checkpoint", str, "checkpoint written by train")
    _option(spectra, "--eta", "train.eta", str, "learning rate for the stability regime")
    _switch(spectra, "--dump-matrices", "spectra.dump_matrices", True, "write hessian.bin and ntk.bin")
    _option(spectra, "--train-csv", "dataset.train_path", str, "training set CSV")
    _option(spectra, "--val-csv", "dataset.val_path", str, "validation set CSV")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Valores por defecto, fichero o manifiesto y opciones, en ese orden; después valida."""
    config = RunConfig()
    if args.config and args.manifest:
        raise UsageError("--config and --manifest are mutually exclusive")
    if args.config:
        config = RunConfig.from_file(args.config)
    elif args.manifest:
        command, values = load_manifest(args.manifest)
        if command != args.command:
            raise UsageError(f"manifest was written by {command!r}, not {args.command!r}")
        config = RunConfig.from_mapping(values)
    known = RunConfig.keys()
    overrides: Dict[str, Any] = {
        key: value for key, value in vars(args).items() if key in known and value is not None
    }
    config = config.with_overrides(overrides)
    config.validate(args.command)
    return config


def _datasets(config: RunConfig, seed: Optional[int] = None) -> Tuple[Dataset, Dataset]:
    if config.train_path and config.val_path:
        return load_csv(config.train_path), load_csv(config.val_path)
    seed = config.seed if seed is None else seed
    return generate_spiral_pair(
        config.n_per_class, config.num_classes, config.noise_sd, derive_seed(seed, 0)
    )


def _jobs(config: RunConfig) -> int:
    return config.jobs or default_jobs()


def cmd_spiral_gen(config: RunConfig, log: logging.Logger) -> Tuple[RunArtifacts, int]:
    train_set, val_set = _datasets(config)
    log.info(f"Generated {len(train_set)} training and {len(val_set)} validation points")
    return RunArtifacts(train_set=train_set, val_set=val_set), EXIT_OK


def cmd_train(config: RunConfig, log: logging.Logger) -> Tuple[RunArtifacts, int]:
    train_set, val_set = _datasets(config)
    params = init_params(config.width, train_set.in_dim, train_set.num_classes, derive_seed(config.seed, 1))
    schedule = OscillationSchedule(
        amplitude=config.amplitude,
        period=config.period,
        num_classes=train_set.num_classes,
        stop_step=config.resolved_stop_step(),
    )
    train_config = TrainConfig(
        learning_rate=config.eta,
        total_steps=config.steps,
        schedule=schedule,
        spectra_stride=config.spectra_stride,
        hessian_top_k=config.top_k,
        lanczos_iters=config.lanczos_iters,
        val_stride=config.val_stride,
        seed=config.seed,
        divergence_limit=config.divergence_limit,
        record_ntk=config.record_ntk,
        jump_threshold=config.jump_threshold,
        log_every=config.log_every,
    )
    log.info(
        f"Training width={config.width} A={config.amplitude} T={config.period} "
        f"eta={config.eta} steps={config.steps}"
    )
    final, trace = train(params, train_set, val_set, train_config, logger=log)
    artifacts = RunArtifacts(trace=trace, final_params=final)
    try:
        trace.raise_if_diverged()
    except TrainingDivergedError as e:
        log.error(f"{e}; writing the partial trace")
        return artifacts, exit_code_for(e)
    log.info(
        f"Final train accuracy {trace.final_train_accuracy:.4f}, "
        f"val accuracy {trace.final_val_accuracy:.4f}"
    )
    return artifacts, EXIT_OK


def _template(config: RunConfig, **changes: Any) -> RunTemplate:
    template = RunTemplate(
        width=config.width,
        n_per_class=config.n_per_class,
        num_classes=config.num_classes,
        noise_sd=config.noise_sd,
        learning_rate=config.eta,
        total_steps=config.steps,
        val_stride=config.val_stride,
        divergence_limit=config.divergence_limit,
        hessian_top_k=config.top_k,
        lanczos_iters=config.lanczos_iters,
        jump_threshold=config.jump_threshold,
        log_every=config.log_every,
    )
    return template.with_overrides(**changes)


def cmd_sweep(config: RunConfig, log: logging.Logger) -> Tuple[RunArtifacts, int]:
    diagram = phase_diagram(
        config.T_values,
        config.A_values,
        _template(config, stop_last_period=True),
        n_seeds=config.n_seeds,
        jobs=_jobs(config),
        seed_base=config.seed,
        logger=log,
    )
    return RunArtifacts(phase=diagram), EXIT_OK


def cmd_threshold_scan(config: RunConfig, log: logging.Logger) -> Tuple[RunArtifacts, int]:
    scan = threshold_scan(
        config.eta_values,
        widths=config.widths,
        template=_template(config, spectra_stride=config.scan_stride, record_ntk=False),
        amplitude=config.scan_amplitude,
        seed=config.seed,
        jobs=_jobs(config),
        logger=log,
    )
    if scan.missing:
        log.warning(f"{len(scan.missing)} runs detected no instability and were left out of the fit")
    return RunArtifacts(scan=scan), EXIT_OK


def cmd_spectra(config: RunConfig, log: logging.Logger) -> Tuple[RunArtifacts, int]:
    assert config.checkpoint is not None
    params, seed = load_checkpoint(config.checkpoint)
    train_set, _ = _datasets(config, seed=seed)
    gamma = np.ones(train_set.num_classes)
    estimate = hessian_top_k(
        params, train_set, gamma, k=config.top_k, iters=config.lanczos_iters,
        seed=derive_seed(seed, 2),
    )
    jacobian = output_jacobian(params, train_set)
    ntk_top = ntk_top_eigenvalue(jacobian)
    n_samples = len(train_set)
    payload = {
        "checkpoint": str(config.checkpoint),
        "hessian_top_eigs": [float(v) for v in estimate.top_eigs],
        "lanczos_iterations": estimate.iterations,
        "residual_norms": [float(v) for v in estimate.residual_norms],
        "breakdown": estimate.breakdown,
        "ntk_top_eig": ntk_top,
        "ntk_regime": classify_stability(max(ntk_top, 0.0), config.eta, n_samples).value,
        "eta": config.eta,
        "n_samples": n_samples,
    }
    log.info(f"Hessian top eigenvalues {payload['hessian_top_eigs']}, NTK top {ntk_top:.6g}")
    artifacts = RunArtifacts(spectra=payload)
    if config.dump_matrices:
        artifacts.matrices[HESSIAN_BIN] = dense_hessian(
            params, train_set, gamma, max_params=DUMP_HESSIAN_CAP
        )
        artifacts.matrices[NTK_BIN] = ntk(jacobian)
    return artifacts, EXIT_OK


COMMAND_HANDLERS = {
    "spiral-gen": cmd_spiral_gen,
    "train": cmd_train,
    "sweep": cmd_sweep,
    "threshold-scan": cmd_threshold_scan,
    "spectra": cmd_spectra,
}


def exit_code_for(error: BaseException) -> int:
    """Código de salida de una excepción: E/S 3, configuración 1, resto (divergencia incluida) 2."""
    if isinstance(error, (ArtifactIOError, DatasetFormatError, OSError)):
        return EXIT_IO
    if isinstance(error, ConfigError):
        return EXIT_USAGE
    return EXIT_RUNTIME


def _diagnostic(error: BaseException) -> str:
    message = str(error).splitlines()[0] if str(error) else type(error).__name__
    key = getattr(error, "key", None)
    if key and key not in message:
        message = f"{message} ({key})"
    return f"dynloss: error: {message}"


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Analiza ``argv``, ejecuta el subcomando y devuelve el código de salida.

    :param argv: Argumentos (por defecto ``sys.argv[1:]``).
    :return: 0, 1, 2 o 3.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(list(sys.argv[1:] if argv is None else argv))
        if args.version:
            print(f"dynloss {__version__}")
            return EXIT_OK
        if args.help_formats:
            print(HELP_FORMATS)
            return EXIT_OK
        if not args.command:
            raise UsageError("a subcommand is required (spiral-gen, train, sweep, threshold-scan, spectra)")
        config = resolve_config(args)
        out = output_root(config, args.output_dir)
        config = config.with_overrides({"output.dir": str(out)})
        try:
            out.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ArtifactIOError(f"cannot create output directory {out}: {e}", path=str(out)) from e
        log = LoggingHandler.run_logger(
            out,
            level=getattr(logging, args.log_level),
            max_bytes=SWEEP_LOG_MAX_BYTES if args.command in ROTATING_LOG_COMMANDS else None,
        )
        artifacts, code = COMMAND_HANDLERS[args.command](config, log)
        written = emit_outputs(artifacts, out, args.command, config)
        log.info(f"Wrote {len(written)} files to {out}")
        return code
    except DynLossError as e:
        print(_diagnostic(e), file=sys.stderr)
        return exit_code_for(e)
    except OSError as e:
        print(_diagnostic(e), file=sys.stderr)
        return EXIT_IO
    except Exception as e:  # noqa: BLE001
        logging.getLogger("dynloss").exception("Unexpected error")
        print(_diagnostic(e), file=sys.stderr)
        return EXIT_RUNTIME


def run() -> None:
    """Entrada del script de consola ``dynloss``."""
    sys.exit(main())
