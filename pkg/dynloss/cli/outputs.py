"""
Escritura de los artefactos de una ejecución con nombres deterministas y
del manifiesto que permite repetirla.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from .. import __version__
from ..config import RunConfig
from ..data import Dataset, save_csv
from ..exceptions import ArtifactIOError, ConfigError
from ..model import MlpParams, save_checkpoint
from ..seeding import derive_seed
from ..spectral import save_matrix
from ..sweep import PhaseDiagram, ThresholdScan, write_phase_csv, write_threshold_csv
from ..training import TrainTrace, write_json, write_summary_json, write_trace_csv

PathLike = Union[str, Path]

TRAIN_CSV = "train.csv"
VAL_CSV = "val.csv"
TRACE_CSV = "trace.csv"
SUMMARY_JSON = "summary.json"
CHECKPOINT = "final.ckpt"
PHASE_CSV = "phase.csv"
PHASE_JSON = "phase.json"
THRESHOLD_CSV = "threshold.csv"
THRESHOLD_JSON = "threshold.json"
SPECTRA_JSON = "spectra.json"
HESSIAN_BIN = "hessian.bin"
NTK_BIN = "ntk.bin"
MANIFEST_JSON = "manifest.json"


@dataclass
class RunArtifacts:
    """Artefactos producidos por un subcomando; los ausentes no se escriben."""

    train_set: Optional[Dataset] = None
    val_set: Optional[Dataset] = None
    trace: Optional[TrainTrace] = None
    final_params: Optional[MlpParams] = None
    phase: Optional[PhaseDiagram] = None
    scan: Optional[ThresholdScan] = None
    spectra: Optional[Dict[str, Any]] = None
    matrices: Dict[str, np.ndarray] = field(default_factory=dict)


def seed_derivations(seed: int) -> Dict[str, int]:
    """Semillas derivadas de ``seed`` que usan los subcomandos."""
    return {"run": seed, "data": derive_seed(seed, 0), "init": derive_seed(seed, 1)}


def build_manifest(command: str, config: RunConfig, artifacts: List[str]) -> Dict[str, Any]:
    """Manifiesto sin marcas de tiempo: versión, comando, configuración, semillas y ficheros."""
    return {
        "version": __version__,
        "command": command,
        "config": config.to_dotted(),
        "seeds": seed_derivations(config.seed),
        "artifacts": sorted(artifacts),
    }


def load_manifest(path: PathLike) -> Tuple[str, Dict[str, Any]]:
    """
    Lee un manifiesto.

    :return: Tupla ``(comando, claves con puntos)``.
    :raises ArtifactIOError: Si no se puede leer.
    :raises ConfigError: Si no tiene la estructura esperada.
    """
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
    except OSError as e:
        raise ArtifactIOError(f"cannot read manifest {path}: {e}", path=str(path)) from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"manifest {path} is not valid JSON: {e}") from e
    if not isinstance(payload, dict) or "command" not in payload or not isinstance(
        payload.get("config"), dict
    ):
        raise ConfigError(f"manifest {path} lacks 'command' or 'config'")
    return str(payload["command"]), payload["config"]


def emit_outputs(
    artifacts: RunArtifacts,
    output_dir: PathLike,
    command: str,
    config: RunConfig,
    seed: Optional[int] = None,
) -> List[Path]:
    """
    Escribe los artefactos presentes y el manifiesto.

    :param artifacts: Artefactos de la ejecución.
    :param output_dir: Directorio de salida (se crea si no existe).
    :param command: Subcomando ejecutado.
    :param config: Configuración resuelta.
    :param seed: Semilla guardada en el checkpoint (por defecto ``config.seed``).
    :return: Rutas escritas, manifiesto incluido.
    :raises ArtifactIOError: Con la ruta que no se pudo escribir.
    """
    out = Path(output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ArtifactIOError(f"cannot create output directory {out}: {e}", path=str(out)) from e

    written: List[Path] = []
    if artifacts.train_set is not None:
        save_csv(artifacts.train_set, out / TRAIN_CSV)
        written.append(out / TRAIN_CSV)
    if artifacts.val_set is not None:
        save_csv(artifacts.val_set, out / VAL_CSV)
        written.append(out / VAL_CSV)
    if artifacts.trace is not None:
        written.append(write_trace_csv(artifacts.trace, out / TRACE_CSV))
        written.append(write_summary_json(artifacts.trace, out / SUMMARY_JSON))
    if artifacts.final_params is not None:
        written.append(
            save_checkpoint(
                artifacts.final_params, config.seed if seed is None else seed, out / CHECKPOINT
            )
        )
    if artifacts.phase is not None:
        written.append(write_phase_csv(artifacts.phase, out / PHASE_CSV))
        written.append(write_json(artifacts.phase.to_dict(), out / PHASE_JSON))
    if artifacts.scan is not None:
        written.append(write_threshold_csv(artifacts.scan, out / THRESHOLD_CSV))
        written.append(write_json(artifacts.scan.to_dict(), out / THRESHOLD_JSON))
    if artifacts.spectra is not None:
        written.append(write_json(artifacts.spectra, out / SPECTRA_JSON))
    for name in sorted(artifacts.matrices):
        written.append(save_matrix(artifacts.matrices[name], out / name))

    manifest = build_manifest(command, config, [p.name for p in written])
    written.append(write_json(manifest, out / MANIFEST_JSON))
    return written
