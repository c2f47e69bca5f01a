"""Flip-angle error model and phase-surface component analysis.

Incomplete excitation of the broad ESR and NMR lines shortens every
effective rotation angle.  The model scales each S-channel flip angle
by (1 - delta1) and each I-channel flip angle by (1 - delta2), leaving
phases untouched.  The resulting detector surface separates, on a
uniform phase grid, into the mutually orthogonal components

    1, cos(phi1), cos(phi2), cos(phi1 - phi2), cos(phi1 + phi2)

plus the matching sine terms, so the least-squares fit reduces to
inner products with each basis function.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace

import numpy as np

from .pulses import PulseProgram
from .spincore import sig12


@dataclass(frozen=True)
class PhaseComponents:
    """Fitted or model amplitudes of the detector phase surface.

    ``a12m``/``a12p`` multiply cos(phi1 -+ phi2); ``s*`` are the sine
    counterparts.  ``None`` marks a component the source does not
    define (the closed-form error model gives only a1, a2 and the
    difference-phase cosine).
    """

    a0: float | None = None
    a1: float | None = None
    a2: float | None = None
    a12m: float | None = None
    a12p: float | None = None
    s1: float | None = None
    s2: float | None = None
    s12m: float | None = None
    s12p: float | None = None
    residual_norm: float | None = None

    def to_json(self) -> dict:
        return {key: (None if value is None else sig12(value))
                for key, value in asdict(self).items()}


def perturb_program(program: PulseProgram, delta1: float, delta2: float) -> PulseProgram:
    """Scale S-channel flip angles by (1 - delta1) and I-channel by (1 - delta2)."""
    for name, delta in (("delta1", delta1), ("delta2", delta2)):
        if abs(delta) >= 1.0:
            raise ValueError(f"{name} must satisfy |delta| < 1, got {delta!r}")
    scaled = tuple(
        replace(step, flip_angle=step.flip_angle * (1.0 - (delta1 if step.channel == "S" else delta2)))
        for step in program.steps
    )
    return PulseProgram(scaled, program.label)


def fit_phase_components(surface) -> PhaseComponents:
    """Project a uniformly sampled phase surface onto the component basis.

    ``surface[i, j]`` holds the signal at phi1 = 2 pi i / m1,
    phi2 = 2 pi j / m2; at least 8 points per axis are required for the
    basis functions to stay orthogonal on the grid.
    """
    s = np.asarray(surface, dtype=float)
    if s.ndim != 2 or min(s.shape) < 8:
        raise ValueError("phase surface must be a uniform grid of at least 8x8 samples")
    m1, m2 = s.shape
    phi1 = 2.0 * np.pi * np.arange(m1) / m1
    phi2 = 2.0 * np.pi * np.arange(m2) / m2
    f1, f2 = np.meshgrid(phi1, phi2, indexing="ij")

    basis = {
        "a1": np.cos(f1),
        "a2": np.cos(f2),
        "a12m": np.cos(f1 - f2),
        "a12p": np.cos(f1 + f2),
        "s1": np.sin(f1),
        "s2": np.sin(f2),
        "s12m": np.sin(f1 - f2),
        "s12p": np.sin(f1 + f2),
    }
    components = {"a0": float(s.mean())}
    reconstruction = np.full_like(s, components["a0"])
    for name, values in basis.items():
        amplitude = 2.0 * float((s * values).mean())
        components[name] = amplitude
        reconstruction = reconstruction + amplitude * values
    residual = float(np.linalg.norm(s - reconstruction))
    return PhaseComponents(residual_norm=residual, **components)


def model_coefficients(delta1: float, delta2: float) -> PhaseComponents:
    """Closed-form surface coefficients for small flip-angle errors.

    Only a1, a2 and the difference-phase cosine amplitude are defined;
    the offset and sum-phase terms are reported as absent.
    """
    for name, delta in (("delta1", delta1), ("delta2", delta2)):
        if abs(delta) >= 1.0:
            raise ValueError(f"{name} must satisfy |delta| < 1, got {delta!r}")
    return PhaseComponents(
        a1=-0.5 * delta1 * (1.0 - delta1) * delta2 ** 2,
        a2=-0.25 * delta1 * delta2,
        a12m=0.25 * (1.0 - delta1 ** 2) * (1.0 - delta2 ** 2),
    )
