"""
Barrido del umbral de ``lambda_max`` frente a la tasa de aprendizaje.

Para cada ``eta`` se reescala el protocolo de referencia: ``T = round(5000/eta)``,
``total_steps = round(70000/eta)`` y ``A = 70``. El umbral de cada ejecución
es el que estima la detección de inestabilidades del entrenador; después se
ajusta el exponente de ``threshold ~ eta^exponent``.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Union

import pandas as pd  # type: ignore

from ..exceptions import ArtifactIOError, ConfigError
from ..seeding import derive_seed
from ..spectral import ExponentFit, fit_threshold_exponent
from .runner import RunTemplate, execute_tasks, train_from_seed

_logger = logging.getLogger("dynloss.sweep")

PathLike = Union[str, Path]

REFERENCE_PERIOD = 5000.0
REFERENCE_STEPS = 70000.0
SCAN_AMPLITUDE = 70.0
DEFAULT_ETA_VALUES = (0.25, 0.5, 1.0, 2.0)
DEFAULT_SCAN_STRIDE = 50
THRESHOLD_COLUMNS = ["eta", "width", "T", "steps", "threshold", "n_intervals", "diverged"]


@dataclass(frozen=True)
class ScanTask:
    """Una ejecución del barrido: ``eta`` y anchura con su protocolo reescalado."""

    eta: float
    width: int
    period: int
    total_steps: int
    amplitude: float
    seed: int
    template: RunTemplate


@dataclass(frozen=True)
class ScanOutcome:
    """Lo que devuelve un runner: umbral detectado (o ``None``) y contexto."""

    threshold: Optional[float]
    n_intervals: int = 0
    diverged: bool = False


@dataclass
class ThresholdPoint:
    eta: float
    width: int
    period: int
    total_steps: int
    threshold: Optional[float]
    n_intervals: int
    diverged: bool


@dataclass
class ThresholdScan:
    """
    Resultado del barrido.

    :ivar eta_values: Tasas de aprendizaje.
    :ivar widths: Anchuras de la red.
    :ivar points: Un :class:`ThresholdPoint` por ``(eta, width)``.
    :ivar fit: Ajuste conjunto de todos los puntos con umbral, o ``None``.
    :ivar per_width_fits: Ajuste por anchura (``None`` con menos de 3 puntos).
    """

    eta_values: List[float]
    widths: List[int]
    points: List[ThresholdPoint] = field(default_factory=list)
    fit: Optional[ExponentFit] = None
    per_width_fits: Dict[int, Optional[ExponentFit]] = field(default_factory=dict)

    @property
    def missing(self) -> List[ThresholdPoint]:
        """Ejecuciones sin inestabilidad detectada."""
        return [p for p in self.points if p.threshold is None]

    def thresholds(self, width: int) -> Dict[float, Optional[float]]:
        """Umbral por ``eta`` para una anchura."""
        return {p.eta: p.threshold for p in self.points if p.width == width}

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                (p.eta, p.width, p.period, p.total_steps, p.threshold, p.n_intervals, p.diverged)
                for p in self.points
            ],
            columns=THRESHOLD_COLUMNS,
        )

    def to_dict(self) -> dict:
        return {
            "eta_values": list(self.eta_values),
            "widths": list(self.widths),
            "fit": self.fit.to_dict() if self.fit else None,
            "per_width_fits": {
                str(width): fit.to_dict() if fit else None
                for width, fit in self.per_width_fits.items()
            },
            "missing": [[p.eta, p.width] for p in self.missing],
        }


def rescaled_protocol(eta: float) -> tuple:
    """``(T, total_steps)`` para ``eta``: ``(round(5000/eta), round(70000/eta))``."""
    if not eta > 0:
        raise ConfigError("eta must be > 0", key="scan.eta_values")
    return int(round(REFERENCE_PERIOD / eta)), int(round(REFERENCE_STEPS / eta))


def run_scan_task(task: ScanTask) -> ScanOutcome:
    """Runner por defecto: entrena con el protocolo reescalado y lee el umbral."""
    template = task.template.with_overrides(
        width=task.width,
        learning_rate=task.eta,
        total_steps=task.total_steps,
        stop_last_period=False,
    )
    trace = train_from_seed(template, task.period, task.amplitude, task.seed)
    return ScanOutcome(
        threshold=trace.threshold_estimate,
        n_intervals=len(trace.instability_intervals),
        diverged=trace.diverged,
    )


def _fit_or_none(points: Sequence[ThresholdPoint]) -> Optional[ExponentFit]:
    usable = [p for p in points if p.threshold is not None and p.threshold > 0]
    if len(usable) < 3 or len({p.eta for p in usable}) < 2:
        return None
    return fit_threshold_exponent([p.eta for p in usable], [p.threshold for p in usable])


def threshold_scan(
    eta_values: Sequence[float] = DEFAULT_ETA_VALUES,
    widths: Sequence[int] = (100,),
    template: Optional[RunTemplate] = None,
    amplitude: float = SCAN_AMPLITUDE,
    seed: int = 0,
    jobs: int = 1,
    runner: Optional[Callable[[ScanTask], ScanOutcome]] = None,
    logger: Optional[logging.Logger] = None,
) -> ThresholdScan:
    """
    Ejecuta el barrido de umbrales y ajusta el exponente.

    :param eta_values: Tasas de aprendizaje (``> 0``).
    :param widths: Anchuras de la red.
    :param template: Parámetros comunes; por defecto registra espectros cada
        50 pasos sin NTK.
    :param amplitude: Amplitud de la oscilación.
    :param seed: Semilla raíz; cada ejecución usa ``derive_seed(seed, i_eta, i_width)``.
    :param jobs: Procesos en paralelo.
    :param runner: Sustituto de :func:`run_scan_task` (debe ser serializable si ``jobs > 1``).
    :param logger: Logger opcional.
    :return: :class:`ThresholdScan`. Las ejecuciones sin inestabilidad no
        aportan punto al ajuste y se listan en ``missing``.

    Ejemplo:
    --------
    .. code-block:: python

        scan = threshold_scan([0.25, 0.5, 1.0, 2.0], widths=[100, 1000], jobs=8)
        scan.fit.exponent  # ≈ -0.9
    """
    log = logger or _logger
    if not eta_values:
        raise ConfigError("eta_values must not be empty", key="scan.eta_values")
    if not widths or any(w < 1 for w in widths):
        raise ConfigError("widths must be ≥ 1", key="scan.widths")
    template = template or RunTemplate(spectra_stride=DEFAULT_SCAN_STRIDE, record_ntk=False)
    if template.spectra_stride is None:
        raise ConfigError("threshold scans need a spectra stride", key="spectra.stride")
    runner = runner or run_scan_task

    tasks = []
    for ei, eta in enumerate(eta_values):
        period, total_steps = rescaled_protocol(eta)
        for wi, width in enumerate(widths):
            tasks.append(
                ScanTask(
                    eta=float(eta),
                    width=int(width),
                    period=period,
                    total_steps=total_steps,
                    amplitude=amplitude,
                    seed=derive_seed(seed, ei, wi),
                    template=template,
                )
            )
    log.info(f"Threshold scan: {len(tasks)} runs, jobs={jobs}")
    outcomes = execute_tasks(tasks, runner, jobs=jobs)

    scan = ThresholdScan(eta_values=[float(e) for e in eta_values], widths=[int(w) for w in widths])
    for task, outcome in zip(tasks, outcomes):
        scan.points.append(
            ThresholdPoint(
                eta=task.eta,
                width=task.width,
                period=task.period,
                total_steps=task.total_steps,
                threshold=outcome.threshold,
                n_intervals=outcome.n_intervals,
                diverged=outcome.diverged,
            )
        )
        if outcome.threshold is None:
            log.warning(f"No instability detected for eta={task.eta} width={task.width}")
        else:
            log.info(f"eta={task.eta} width={task.width} threshold={outcome.threshold:.6g}")

    scan.fit = _fit_or_none(scan.points)
    for width in scan.widths:
        scan.per_width_fits[width] = _fit_or_none([p for p in scan.points if p.width == width])
    if scan.fit is not None:
        log.info(f"Fitted exponent {scan.fit.exponent:.4f} (r2={scan.fit.r_squared:.4f})")
    return scan


def write_threshold_csv(scan: ThresholdScan, path: PathLike) -> Path:
    """
    Escribe ``eta,width,T,steps,threshold,n_intervals,diverged``.

    :raises ArtifactIOError: Si no se puede escribir.
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        scan.to_frame().to_csv(
            path, index=False, na_rep="", float_format="%.17g", lineterminator="\n"
        )
    except OSError as e:
        raise ArtifactIOError(f"cannot write threshold table to {path}: {e}", path=str(path)) from e
    return path
