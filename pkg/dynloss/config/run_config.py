"""
Configuración resuelta de una ejecución de la CLI.

Las claves tienen forma ``sección.nombre`` (``train.eta``, ``sweep.A_values``)
y se cargan desde un fichero de texto plano::

    # oscilaciones con registro espectral
    seed = 0
    model.width = 100
    train.A = 70
    train.T = 5000
    train.steps = 70000
    spectra.stride = 50

Orden de precedencia: valores por defecto, fichero (o manifiesto), variable
de entorno ``DYNLOSS_OUTPUT_ROOT`` para el directorio de salida y, por último,
las opciones de la línea de comandos.
"""

import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple, Union

from ..exceptions import ArtifactIOError, ConfigError

OUTPUT_ROOT_ENV = "DYNLOSS_OUTPUT_ROOT"
DEFAULT_OUTPUT_DIR = "runs"
COMMANDS = ("spiral-gen", "train", "sweep", "threshold-scan", "spectra")

Parser = Callable[[Any], Any]


def _as_int(value: Any) -> int:
    if isinstance(value, bool):
        raise ValueError("expected an integer")
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if not value.is_integer():
            raise ValueError("expected an integer")
        return int(value)
    return int(str(value).strip())


def _as_float(value: Any) -> float:
    if isinstance(value, bool):
        raise ValueError("expected a number")
    return float(value) if not isinstance(value, str) else float(value.strip())


def _as_bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("true", "yes", "on", "1"):
        return True
    if text in ("false", "no", "off", "0"):
        return False
    raise ValueError("expected a boolean")


def _optional(parser: Parser) -> Parser:
    def parse(value: Any) -> Any:
        if value is None or (isinstance(value, str) and value.strip().lower() in ("", "none")):
            return None
        return parser(value)

    return parse


def _as_str(value: Any) -> str:
    return str(value).strip()


def _list_of(parser: Parser) -> Parser:
    def parse(value: Any) -> List[Any]:
        if isinstance(value, str):
            items = [item for item in value.replace(" ", "").split(",") if item]
        else:
            items = list(value)
        return [parser(item) for item in items]

    return parse


def _key(name: str, parser: Parser) -> Dict[str, Any]:
    return {"key": name, "parser": parser}


@dataclass(frozen=True)
class RunConfig:
    """
    Todas las claves configurables con sus valores por defecto.

    Cada campo declara en sus metadatos la clave con puntos y el parser que
    convierte el texto del fichero.
    """

    seed: int = field(default=0, metadata=_key("seed", _as_int))
    jobs: Optional[int] = field(default=None, metadata=_key("jobs", _optional(_as_int)))

    n_per_class: int = field(default=100, metadata=_key("dataset.n_per_class", _as_int))
    num_classes: int = field(default=3, metadata=_key("dataset.num_classes", _as_int))
    noise_sd: float = field(default=0.2, metadata=_key("dataset.noise_sd", _as_float))
    train_path: Optional[str] = field(
        default=None, metadata=_key("dataset.train_path", _optional(_as_str))
    )
    val_path: Optional[str] = field(
        default=None, metadata=_key("dataset.val_path", _optional(_as_str))
    )

    width: int = field(default=100, metadata=_key("model.width", _as_int))

    eta: float = field(default=1.0, metadata=_key("train.eta", _as_float))
    steps: int = field(default=35000, metadata=_key("train.steps", _as_int))
    amplitude: float = field(default=1.0, metadata=_key("train.A", _as_float))
    period: int = field(default=200, metadata=_key("train.T", _as_int))
    stop_step: Optional[int] = field(
        default=None, metadata=_key("train.stop_step", _optional(_as_int))
    )
    stop_last_period: bool = field(
        default=False, metadata=_key("train.stop_last_period", _as_bool)
    )
    val_stride: int = field(default=100, metadata=_key("train.val_stride", _as_int))
    divergence_limit: float = field(
        default=1e6, metadata=_key("train.divergence_limit", _as_float)
    )
    jump_threshold: float = field(default=0.1, metadata=_key("train.jump_threshold", _as_float))
    log_every: int = field(default=5000, metadata=_key("train.log_every", _as_int))

    spectra_stride: Optional[int] = field(
        default=50, metadata=_key("spectra.stride", _optional(_as_int))
    )
    top_k: int = field(default=3, metadata=_key("spectra.top_k", _as_int))
    lanczos_iters: int = field(default=60, metadata=_key("spectra.lanczos_iters", _as_int))
    record_ntk: bool = field(default=True, metadata=_key("spectra.record_ntk", _as_bool))
    checkpoint: Optional[str] = field(
        default=None, metadata=_key("spectra.checkpoint", _optional(_as_str))
    )
    dump_matrices: bool = field(default=False, metadata=_key("spectra.dump_matrices", _as_bool))

    T_values: Tuple[int, ...] = field(
        default=(50, 100, 200, 300, 500, 700, 1000, 2000, 5000),
        metadata=_key("sweep.T_values", _list_of(_as_int)),
    )
    A_values: Tuple[float, ...] = field(
        default=(1.0, 2.0, 5.0, 10.0, 20.0, 30.0, 50.0, 70.0, 100.0),
        metadata=_key("sweep.A_values", _list_of(_as_float)),
    )
    n_seeds: int = field(default=10, metadata=_key("sweep.n_seeds", _as_int))

    eta_values: Tuple[float, ...] = field(
        default=(0.25, 0.5, 1.0, 2.0), metadata=_key("scan.eta_values", _list_of(_as_float))
    )
    widths: Tuple[int, ...] = field(default=(100,), metadata=_key("scan.widths", _list_of(_as_int)))
    scan_amplitude: float = field(default=70.0, metadata=_key("scan.A", _as_float))
    scan_stride: int = field(default=50, metadata=_key("scan.stride", _as_int))

    output_dir: str = field(default=DEFAULT_OUTPUT_DIR, metadata=_key("output.dir", _as_str))

    @classmethod
    def keys(cls) -> Dict[str, str]:
        """Mapa ``clave con puntos -> nombre del campo``."""
        return {f.metadata["key"]: f.name for f in fields(cls)}

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any], base: Optional["RunConfig"] = None) -> "RunConfig":
        """
        Construye una configuración a partir de claves con puntos.

        :param values: Claves con puntos y sus valores (texto o ya tipados).
        :param base: Configuración de partida (por defecto, valores por defecto).
        :raises ConfigError: Con una clave desconocida o un valor inválido.
        """
        by_key = {f.metadata["key"]: f for f in fields(cls)}
        changes: Dict[str, Any] = {}
        for key, raw in values.items():
            spec = by_key.get(key)
            if spec is None:
                raise ConfigError(f"unknown configuration key {key!r}", key=key)
            try:
                value = spec.metadata["parser"](raw)
            except (TypeError, ValueError) as e:
                raise ConfigError(f"invalid value {raw!r} for {key}: {e}", key=key) from e
            changes[spec.name] = tuple(value) if isinstance(value, list) else value
        return replace(base or cls(), **changes)

    @classmethod
    def from_file(cls, path: Union[str, Path], base: Optional["RunConfig"] = None) -> "RunConfig":
        """
        Lee un fichero ``clave = valor``; ``#`` inicia un comentario.

        :raises ArtifactIOError: Si el fichero no se puede leer.
        :raises ConfigError: Con líneas mal formadas, claves repetidas o desconocidas.
        """
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as e:
            raise ArtifactIOError(f"cannot read config {path}: {e}", path=str(path)) from e
        return cls.from_mapping(parse_config_text(text), base=base)

    def with_overrides(self, values: Mapping[str, Any]) -> "RunConfig":
        """Aplica claves con puntos sobre esta configuración."""
        return type(self).from_mapping(values, base=self)

    def to_dotted(self) -> Dict[str, Any]:
        """Configuración completa como claves con puntos (para el manifiesto)."""
        result: Dict[str, Any] = {}
        for f in fields(self):
            value = getattr(self, f.name)
            result[f.metadata["key"]] = list(value) if isinstance(value, tuple) else value
        return result

    def resolved_stop_step(self) -> Optional[int]:
        """``train.stop_step`` o, con ``train.stop_last_period``, ``steps - T``."""
        if self.stop_step is not None:
            return self.stop_step
        if self.stop_last_period:
            return max(self.steps - self.period, 0)
        return None

    def validate(self, command: str) -> None:
        """
        Comprueba todas las precondiciones del comando antes de trabajar.

        :param command: Uno de :data:`COMMANDS`.
        :raises ConfigError: Con el primer problema encontrado, nombrando la clave.
        """
        if command not in COMMANDS:
            raise ConfigError(f"unknown command {command!r}")
        if self.seed < 0:
            raise ConfigError("seed must be ≥ 0", key="seed")
        if self.jobs is not None and self.jobs < 1:
            raise ConfigError("jobs must be ≥ 1", key="jobs")
        if not self.output_dir:
            raise ConfigError("output directory must not be empty", key="output.dir")
        if self.n_per_class < 1:
            raise ConfigError("n_per_class must be ≥ 1", key="dataset.n_per_class")
        if self.num_classes < 2:
            raise ConfigError("num_classes must be ≥ 2", key="dataset.num_classes")
        if not self.noise_sd >= 0:
            raise ConfigError("noise_sd must be ≥ 0", key="dataset.noise_sd")
        if command == "spiral-gen":
            return

        if self.width < 1:
            raise ConfigError("width must be ≥ 1", key="model.width")
        if not self.eta > 0:
            raise ConfigError("eta must be > 0", key="train.eta")
        if self.steps < 0:
            raise ConfigError("steps must be ≥ 0", key="train.steps")
        if not self.amplitude >= 1:
            raise ConfigError("A must be ≥ 1", key="train.A")
        if self.period < 2:
            raise ConfigError("T must be an integer ≥ 2", key="train.T")
        if self.stop_step is not None and self.stop_step < 0:
            raise ConfigError("stop_step must be ≥ 0", key="train.stop_step")
        if self.val_stride < 1:
            raise ConfigError("val stride must be ≥ 1", key="train.val_stride")
        if not self.divergence_limit > 0:
            raise ConfigError("divergence limit must be > 0", key="train.divergence_limit")
        if self.log_every < 1:
            raise ConfigError("log_every must be ≥ 1", key="train.log_every")
        if self.spectra_stride is not None and self.spectra_stride < 1:
            raise ConfigError("spectra stride must be ≥ 1", key="spectra.stride")
        if self.top_k < 1:
            raise ConfigError("top_k must be ≥ 1", key="spectra.top_k")
        if self.lanczos_iters < self.top_k:
            raise ConfigError("lanczos_iters must be ≥ top_k", key="spectra.lanczos_iters")
        if (self.train_path is None) != (self.val_path is None):
            raise ConfigError(
                "dataset.train_path and dataset.val_path must be given together",
                key="dataset.train_path",
            )

        if command == "sweep":
            if not self.T_values:
                raise ConfigError("T_values must not be empty", key="sweep.T_values")
            if any(t < 2 for t in self.T_values):
                raise ConfigError("T must be an integer ≥ 2", key="sweep.T_values")
            if not self.A_values:
                raise ConfigError("A_values must not be empty", key="sweep.A_values")
            if any(not a >= 1 for a in self.A_values):
                raise ConfigError("A must be ≥ 1", key="sweep.A_values")
            if self.n_seeds < 1:
                raise ConfigError("n_seeds must be ≥ 1", key="sweep.n_seeds")
        elif command == "threshold-scan":
            if not self.eta_values or any(not e > 0 for e in self.eta_values):
                raise ConfigError("eta values must be > 0", key="scan.eta_values")
            if not self.widths or any(w < 1 for w in self.widths):
                raise ConfigError("widths must be ≥ 1", key="scan.widths")
            if not self.scan_amplitude >= 1:
                raise ConfigError("A must be ≥ 1", key="scan.A")
            if self.scan_stride < 1:
                raise ConfigError("scan stride must be ≥ 1", key="scan.stride")
        elif command == "spectra" and not self.checkpoint:
            raise ConfigError("spectra needs a checkpoint", key="spectra.checkpoint")


def parse_config_text(text: str) -> Dict[str, str]:
    """
    Convierte el texto ``clave = valor`` en un diccionario.

    :raises ConfigError: Con líneas sin ``=``, claves vacías o repetidas.
    """
    values: Dict[str, str] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        if "=" not in content:
            raise ConfigError(f"line {number}: expected 'key = value', got {line.strip()!r}")
        key, value = (part.strip() for part in content.split("=", 1))
        if not key:
            raise ConfigError(f"line {number}: empty key")
        if key in values:
            raise ConfigError(f"line {number}: duplicate key {key!r}", key=key)
        values[key] = value
    return values


def output_root(
    config: RunConfig,
    cli_value: Optional[str] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> Path:
    """
    Directorio de salida: opción de la CLI, variable ``DYNLOSS_OUTPUT_ROOT``
    o ``output.dir``, en ese orden.
    """
    environ = os.environ if environ is None else environ
    if cli_value:
        return Path(cli_value)
    if environ.get(OUTPUT_ROOT_ENV):
        return Path(environ[OUTPUT_ROOT_ENV])
    return Path(config.output_dir)
