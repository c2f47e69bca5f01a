"""Entanglement detection by phase-rotation tomography.

A detector sequence undoes the preparation with phase-shifted pulses
and reads out the population difference across one ESR transition (the
spin-echo observable).  Sweeping the two pulse phases at artificial
frequencies nu1, nu2 turns the phase dependence of the prepared state
into an interferogram: entangled states oscillate at the combination
frequency |nu1 -+ nu2|, separable residues at nu1 or nu2 alone.
"""

from __future__ import annotations

import csv
import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .imperfections import perturb_program
from .pulses import PulseProgram, PulseStep, compile_program
from .spincore import DensityMatrix, evolve, fictitious_z, trace_expectation


class DetectorFamily(enum.Enum):
    """Which Bell pair the detector addresses, fixing its ESR transition."""

    PSI = "psi"
    PHI = "phi"

    @property
    def esr_transition(self) -> tuple[int, int]:
        return (1, 3) if self is DetectorFamily.PSI else (2, 4)


@dataclass(frozen=True)
class ScanSettings:
    """Phase-increment scan parameters.

    Phases advance as phi_j(n) = 2 pi nu_j n dt; flip-angle deviations
    delta1 (ESR) and delta2 (NMR) apply to every pulse of the pipeline.
    """

    nu1: float  # Hz
    nu2: float  # Hz
    dt: float = 100e-9  # s
    n_samples: int = 200
    phase_cycle: bool = False
    delta1: float = 0.0
    delta2: float = 0.0

    def __post_init__(self):
        if self.n_samples < 2:
            raise ValueError("need at least 2 samples")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        for name in ("delta1", "delta2"):
            if abs(getattr(self, name)) >= 1.0:
                raise ValueError(f"{name} must satisfy |delta| < 1")
        top = abs(self.nu1) + abs(self.nu2)
        if top > 0 and self.dt >= 1.0 / (2.0 * top):
            warnings.warn(
                f"dt = {self.dt:g} s undersamples |nu1|+|nu2| = {top:g} Hz",
                stacklevel=2,
            )


@dataclass(frozen=True, eq=False)
class Interferogram:
    """Detector signal versus experiment index n at spacing dt."""

    samples: np.ndarray
    dt: float
    family: str | None = None
    state: str | None = None
    settings: ScanSettings | None = None

    def __post_init__(self):
        s = np.array(self.samples, dtype=float).reshape(-1)
        if not np.all(np.isfinite(s)):
            raise ValueError("interferogram samples must be finite")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.samples)) * self.dt


def detector_program(family: DetectorFamily | str, phi1: float, phi2: float) -> PulseProgram:
    """Back-transformation sequence with detection-pulse phases phi1 (ESR), phi2 (NMR)."""
    family = DetectorFamily(family)
    j, k = family.esr_transition
    return PulseProgram(
        (
            PulseStep("S", j, k, -math.pi, phi1),
            PulseStep("I", 1, 2, -math.pi / 2, phi2),
        ),
        label=f"detect-{family.value}",
    )


def echo_signal(rho: DensityMatrix, family: DetectorFamily | str) -> float:
    """Echo observable: population difference across the family's ESR transition."""
    family = DetectorFamily(family)
    return trace_expectation(rho, 2.0 * fictitious_z(*family.esr_transition))


def detect(rho: DensityMatrix, family: DetectorFamily | str,
           phi1: float, phi2: float) -> float:
    """Detector signal for an already-prepared state."""
    program = detector_program(family, phi1, phi2)
    return echo_signal(evolve(rho, compile_program(program)), family)


def pipeline_signal(prep: PulseProgram, init: DensityMatrix,
                    family: DetectorFamily | str, phi1: float, phi2: float,
                    delta1: float = 0.0, delta2: float = 0.0) -> float:
    """One full experiment: preparation plus detection from a fresh ensemble.

    The flip-angle deviations scale every pulse, preparation and
    detection alike, modeling incomplete excitation of broad lines.
    """
    program = prep + detector_program(family, phi1, phi2)
    if delta1 != 0.0 or delta2 != 0.0:
        program = perturb_program(program, delta1, delta2)
    return echo_signal(evolve(init, compile_program(program)), family)


def phase_cycled_detect(prep: PulseProgram, init: DensityMatrix,
                        family: DetectorFamily | str, phi1: float, phi2: float,
                        delta1: float = 0.0, delta2: float = 0.0) -> float:
    """Mean of the signals at (phi1, phi2) and (phi1+pi, phi2+pi).

    Averaging rather than summing keeps amplitudes comparable with
    uncycled runs; single-phase cosine components cancel exactly while
    the combination-phase components survive.
    """
    plain = pipeline_signal(prep, init, family, phi1, phi2, delta1, delta2)
    shifted = pipeline_signal(prep, init, family, phi1 + math.pi, phi2 + math.pi,
                              delta1, delta2)
    return 0.5 * (plain + shifted)


def interferogram(prep: PulseProgram, init: DensityMatrix,
                  family: DetectorFamily | str, settings: ScanSettings) -> Interferogram:
    """Phase-increment scan; every sample restarts from the initial ensemble."""
    family = DetectorFamily(family)
    samples = np.empty(settings.n_samples)
    for n in range(settings.n_samples):
        phi1 = 2.0 * math.pi * settings.nu1 * n * settings.dt
        phi2 = 2.0 * math.pi * settings.nu2 * n * settings.dt
        if settings.phase_cycle:
            samples[n] = phase_cycled_detect(prep, init, family, phi1, phi2,
                                             settings.delta1, settings.delta2)
        else:
            samples[n] = pipeline_signal(prep, init, family, phi1, phi2,
                                         settings.delta1, settings.delta2)
    return Interferogram(samples, settings.dt, family=family.value,
                         state=prep.label, settings=settings)


def detection_surface(prep: PulseProgram, init: DensityMatrix,
                      family: DetectorFamily | str, delta1: float = 0.0,
                      delta2: float = 0.0, grid: int = 32,
                      phase_cycle: bool = False) -> np.ndarray:
    """Signal sampled on a uniform (phi1, phi2) grid over [0, 2pi)^2.

    Axis 0 runs over phi1.  The grid feeds the phase-component fit.
    """
    if grid < 8:
        raise ValueError("grid must be at least 8 points per axis")
    phis = 2.0 * math.pi * np.arange(grid) / grid
    surface = np.empty((grid, grid))
    for i, phi1 in enumerate(phis):
        for j, phi2 in enumerate(phis):
            if phase_cycle:
                surface[i, j] = phase_cycled_detect(prep, init, family, phi1, phi2,
                                                    delta1, delta2)
            else:
                surface[i, j] = pipeline_signal(prep, init, family, phi1, phi2,
                                                delta1, delta2)
    return surface


def write_interferogram_csv(ig: Interferogram, path) -> None:
    """CSV with header n,t_us,signal at 12 significant digits."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["n", "t_us", "signal"])
        for n, (t, s) in enumerate(zip(ig.times, ig.samples)):
            writer.writerow([n, f"{t * 1e6:.12g}", f"{s:.12g}"])


def read_interferogram_csv(path) -> Interferogram:
    with open(path, "r", newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["n", "t_us", "signal"]:
        raise ValueError(f"{path}: expected header n,t_us,signal")
    if len(rows) < 3:
        raise ValueError(f"{path}: need at least 2 samples")
    try:
        times = [float(r[1]) * 1e-6 for r in rows[1:]]
        samples = [float(r[2]) for r in rows[1:]]
    except (IndexError, ValueError) as exc:
        raise ValueError(f"{path}: malformed interferogram row: {exc}") from exc
    dt = times[1] - times[0]
    if dt <= 0:
        raise ValueError(f"{path}: time column is not increasing")
    return Interferogram(np.array(samples), dt)
