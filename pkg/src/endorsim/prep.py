"""Initial ensembles, experiment configuration, and Bell-state preparation.

The thermal electron polarization K sets how much of the ensemble
behaves like the traceless "pseudo" part: the high-temperature state is
the convex mix (1-K)/4 * identity + K * rho_pseudo, where rho_pseudo
carries full electron polarization (levels 3 and 4 equally occupied).
A preparatory pi-pulse on one ESR transition turns those populations
into a pseudo-pure level within a three-level subsystem, from which a
single NMR pi/2 pulse plus an ESR pi pulse reaches any Bell state.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, fields

import numpy as np

from .pulses import PulseProgram, PulseStep
from .spincore import DensityMatrix, PureState, basis_state

# CODATA 2018 values; k_B and h are exact in the SI.
BOHR_MAGNETON = 9.2740100783e-24  # J/T
BOLTZMANN = 1.380649e-23  # J/K
PLANCK = 6.62607015e-34  # J s
HBAR = PLANCK / (2.0 * math.pi)

HALF_PI = math.pi / 2


class ConfigError(ValueError):
    """Bad experiment configuration value or file."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Reference experimental parameters.

    Defaults follow the X-band electron / proton setting: the working
    field is the midpoint of the two resolved ESR line positions, which
    are kept as metadata only.
    """

    esr_frequency: float = 9.49e9  # Hz
    nmr_frequency: float = 28.05e6  # Hz
    field: float = 0.3387  # T
    temperature: float = 40.0  # K
    esr_pi_duration: float = 32.0  # ns
    nmr_pi_duration: float = 1600.0  # ns
    g_factor: float = 2.0
    esr_line_fields: tuple[float, float] = (0.3382, 0.3392)  # T, metadata

    def __post_init__(self):
        for name in ("esr_frequency", "nmr_frequency", "field", "temperature",
                     "esr_pi_duration", "nmr_pi_duration", "g_factor"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be a positive finite number, got {value!r}")
        object.__setattr__(self, "esr_line_fields", tuple(self.esr_line_fields))
        if self.esr_frequency / self.nmr_frequency <= 10.0:
            warnings.warn(
                "electron/nuclear frequency ratio below 10; the electron-only "
                "polarization model is questionable here",
                stacklevel=2,
            )


def load_config(path) -> ExperimentConfig:
    """Read an ExperimentConfig from a flat key=value text file.

    Blank lines and '#' comments are ignored; keys must match config
    field names and unknown keys are errors.  ``esr_line_fields`` takes
    two comma-separated teslas.
    """
    known = {f.name for f in fields(ExperimentConfig)}
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, text = line.partition("=")
        key = key.strip()
        text = text.strip()
        if key not in known:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            if key == "esr_line_fields":
                parts = [float(p) for p in text.split(",")]
                if len(parts) != 2:
                    raise ValueError("need exactly two fields")
                values[key] = tuple(parts)
            else:
                values[key] = float(text)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key!r}: {exc}") from exc
    try:
        return ExperimentConfig(**values)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


class BellState(enum.Enum):
    """The four maximally entangled two-qubit states."""

    PSI_MINUS = "psi-minus"
    PSI_PLUS = "psi-plus"
    PHI_MINUS = "phi-minus"
    PHI_PLUS = "phi-plus"


def thermal_polarization(config: ExperimentConfig, mode: str = "linear") -> float:
    """Electron polarization K of the thermal ensemble.

    ``linear`` returns g mu_B B / (2 k_B T), the high-temperature
    expansion; ``exact`` returns the tanh of the same argument.
    """
    x = config.g_factor * BOHR_MAGNETON * config.field / (2.0 * BOLTZMANN * config.temperature)
    if mode == "linear":
        if x >= 1.0:
            raise ConfigError(
                "linear polarization >= 1; outside the high-temperature regime"
            )
        return x
    if mode == "exact":
        return math.tanh(x)
    raise ValueError(f"mode must be 'linear' or 'exact', got {mode!r}")


def pseudo_boltzmann() -> DensityMatrix:
    """Traceless-part-normalized thermal state: electron fully polarized."""
    return DensityMatrix.from_diagonal([0.0, 0.0, 0.5, 0.5])


def boltzmann_density(polarization: float) -> DensityMatrix:
    """High-temperature thermal state (1-K)/4 * identity + K * pseudo-Boltzmann."""
    k = float(polarization)
    if not 0.0 <= k <= 1.0:
        raise ValueError(f"polarization must lie in [0, 1], got {k!r}")
    m = (1.0 - k) / 4.0 * np.eye(4, dtype=complex) + k * pseudo_boltzmann().matrix
    return DensityMatrix(m)


def pseudo_pure(level: int) -> DensityMatrix:
    """Projector onto one level (the pseudo-pure ensemble state)."""
    return basis_state(level).to_density_matrix()


_BELL_AMPLITUDES = {
    BellState.PSI_MINUS: (0.0, 1.0, -1.0, 0.0),
    BellState.PSI_PLUS: (0.0, 1.0, +1.0, 0.0),
    BellState.PHI_MINUS: (1.0, 0.0, 0.0, -1.0),
    BellState.PHI_PLUS: (1.0, 0.0, 0.0, +1.0),
}


def bell_state(label: BellState | str) -> PureState:
    """Target state vector in the level-1..4 ordering."""
    label = BellState(label)
    return PureState(np.array(_BELL_AMPLITUDES[label], dtype=complex) / math.sqrt(2.0))


def bell_start_level(label: BellState | str) -> int:
    """Pseudo-pure level from which the label's preparation sequence starts."""
    label = BellState(label)
    return 1 if label in (BellState.PSI_MINUS, BellState.PSI_PLUS) else 2


def bell_prep_program(label: BellState | str,
                      include_pseudo_pure_step: bool = False) -> PulseProgram:
    """Pulse program that prepares the requested Bell state.

    The Psi states are built in the 1,2,3 sublevel set, the Phi states
    in 1,2,4.  With ``include_pseudo_pure_step`` a preparatory ESR
    pi-pulse first converts pseudo-Boltzmann populations into the
    pseudo-pure start level of that set; from the matching pseudo-pure
    state the flag must stay off.  The Phi-plus sequence produces the
    target with an overall minus sign, which no density matrix can see.
    """
    label = BellState(label)
    esr = (1, 3) if label in (BellState.PSI_MINUS, BellState.PSI_PLUS) else (2, 4)
    steps = []
    if include_pseudo_pure_step:
        steps.append(PulseStep("S", *esr, math.pi))
    nmr_angle = -HALF_PI if label is BellState.PHI_MINUS else HALF_PI
    steps.append(PulseStep("I", 1, 2, nmr_angle))
    esr_angle = math.pi if label is BellState.PSI_PLUS else -math.pi
    steps.append(PulseStep("S", *esr, esr_angle))
    return PulseProgram(tuple(steps), label=label.value)
