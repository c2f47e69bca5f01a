"""Transition-selective pulses, z-rotations, and pulse-program compilation.

A selective pulse drives exactly one allowed two-level transition and
leaves the other levels untouched.  The rotation convention is fixed
once and for all here:

    |j>  ->  cos(b/2) |j> + exp(-i phi) sin(b/2) |k>
    |k>  -> -exp(+i phi) sin(b/2) |j> + cos(b/2) |k>

for flip angle ``b`` and pulse phase ``phi`` on the transition j < k.
At phi = 0 a positive flip angle rotates |j> toward +|k> with real
coefficients; shifting the phase is identical to sandwiching the
phi = 0 pulse between z-rotations on the transition's fictitious spin
(tested as an invariant).  This choice reproduces the entangling
sequences and the detector signal formulas exactly, so it must not be
altered without regenerating every golden value downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .spincore import (
    DIM,
    ESR_TRANSITIONS,
    NMR_TRANSITIONS,
    fictitious_z,
    standard_operator,
)

CHANNEL_TRANSITIONS = {"S": ESR_TRANSITIONS, "I": NMR_TRANSITIONS}


class TransitionError(ValueError):
    """A pulse addressed a transition its channel cannot drive."""


def normalize_phase(phi: float) -> float:
    """Wrap a phase into (-pi, pi]."""
    if not math.isfinite(phi):
        raise ValueError("phase must be finite")
    wrapped = math.remainder(phi, math.tau)
    return math.pi if wrapped <= -math.pi else wrapped


@dataclass(frozen=True)
class PulseStep:
    """One selective pulse: channel, transition j<k, flip angle, phase (rad)."""

    channel: str
    j: int
    k: int
    flip_angle: float
    phase: float = 0.0

    def __post_init__(self):
        if self.channel not in CHANNEL_TRANSITIONS:
            raise TransitionError(f"unknown channel {self.channel!r}; expected 'S' or 'I'")
        if (self.j, self.k) not in CHANNEL_TRANSITIONS[self.channel]:
            raise TransitionError(
                f"transition {self.j}<->{self.k} is not an {self.channel}-channel transition"
            )
        if not math.isfinite(self.flip_angle) or abs(self.flip_angle) > math.tau:
            raise ValueError(f"flip angle must lie in [-2pi, 2pi], got {self.flip_angle!r}")
        object.__setattr__(self, "phase", normalize_phase(self.phase))


@dataclass(frozen=True)
class PulseProgram:
    """Time-ordered pulse sequence; steps apply left to right."""

    steps: tuple[PulseStep, ...] = ()
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __add__(self, other: "PulseProgram") -> "PulseProgram":
        return PulseProgram(self.steps + other.steps)

    def with_phase_offsets(self, s_phase: float = 0.0, i_phase: float = 0.0) -> "PulseProgram":
        """Add a phase offset to every pulse of the S and/or I channel."""
        shifted = tuple(
            replace(st, phase=st.phase + (s_phase if st.channel == "S" else i_phase))
            for st in self.steps
        )
        return PulseProgram(shifted, self.label)


def step_unitary(step: PulseStep) -> np.ndarray:
    u = np.eye(DIM, dtype=complex)
    half = 0.5 * step.flip_angle
    c = math.cos(half)
    s = math.sin(half)
    ph = np.exp(1j * step.phase)
    a, b = step.j - 1, step.k - 1
    u[a, a] = c
    u[a, b] = -s * ph
    u[b, a] = s / ph
    u[b, b] = c
    return u


def selective_unitary(channel: str, j: int, k: int, flip_angle: float,
                      phase: float = 0.0) -> np.ndarray:
    """Unitary of one selective pulse (see module docstring for the convention)."""
    return step_unitary(PulseStep(channel, j, k, flip_angle, phase))


def z_rotation(target, angle: float) -> np.ndarray:
    """Rotation about the quantization axis.

    ``target`` is ``"S"`` or ``"I"`` for exp(-i angle Sz/Iz), or a level
    pair ``(j, k)`` for the same rotation on that transition's
    fictitious spin.
    """
    if not math.isfinite(angle):
        raise ValueError("rotation angle must be finite")
    if target == "S":
        diag = standard_operator("Sz").matrix.diagonal()
    elif target == "I":
        diag = standard_operator("Iz").matrix.diagonal()
    elif isinstance(target, tuple) and len(target) == 2:
        diag = fictitious_z(*target).matrix.diagonal()
    else:
        raise ValueError(f"z-rotation target must be 'S', 'I' or a level pair, got {target!r}")
    return np.diag(np.exp(-1j * angle * diag))


def compile_program(program: PulseProgram) -> np.ndarray:
    """Net unitary of the program: the reverse-ordered product of step unitaries."""
    u = np.eye(DIM, dtype=complex)
    for step in program.steps:
        u = step_unitary(step) @ u
    return u


def program_duration(program: PulseProgram, config) -> float:
    """Total duration in ns; each step costs its channel's pi time scaled by |flip|/pi.

    Phase shifts are free.  ``config`` must expose ``esr_pi_duration``
    and ``nmr_pi_duration`` in ns.
    """
    try:
        per_pi = {"S": float(config.esr_pi_duration), "I": float(config.nmr_pi_duration)}
    except (AttributeError, TypeError) as exc:
        raise ValueError("config must provide esr_pi_duration and nmr_pi_duration") from exc
    if per_pi["S"] <= 0 or per_pi["I"] <= 0:
        raise ValueError("pulse durations must be positive")
    return sum(per_pi[st.channel] * abs(st.flip_angle) / math.pi for st in program.steps)
