"""Partial-transpose entanglement test, negativity, and the thermal quantum limit.

A two-qubit state is entangled exactly when its partial transpose has a
negative eigenvalue; the negativity (sum of the magnitudes of those
eigenvalues) quantifies the violation.  For the thermally prepared
singlet ensemble the violation appears once the electron polarization
exceeds 1/sqrt(2), which translates into a threshold temperature for a
given electron resonance frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .prep import BOLTZMANN, PLANCK, BellState, bell_prep_program, boltzmann_density
from .pulses import compile_program
from .spincore import DensityMatrix, evolve, hermitian_eigenvalues, sig12

# Electron polarization above which the prepared thermal ensemble violates
# the partial-transpose criterion; the transposed block eigenvalue is
# 1/4 - sqrt(2) K / 4.
THRESHOLD_POLARIZATION = 1.0 / math.sqrt(2.0)

# Eigenvalues above this are treated as numerical noise around zero.
NEGATIVE_EIGENVALUE_TOL = 1e-10


def partial_transpose(rho: DensityMatrix | np.ndarray, subsystem: str = "electron") -> np.ndarray:
    """Transpose the chosen spin's indices only; Hermitian but not always PSD."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    t = m.reshape(2, 2, 2, 2)
    if subsystem == "electron":
        t = t.transpose(2, 1, 0, 3)
    elif subsystem == "nucleus":
        t = t.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"subsystem must be 'electron' or 'nucleus', got {subsystem!r}")
    return t.reshape(4, 4).copy()


def negativity(rho: DensityMatrix) -> float:
    """Sum of |negative eigenvalues| of the partial transpose.

    Both subsystem choices give the same value (the two partial
    transposes are each other's full transpose); computed for both and
    asserted equal as a consistency check.
    """
    results = {}
    for subsystem in ("electron", "nucleus"):
        eigenvalues = hermitian_eigenvalues(partial_transpose(rho, subsystem))
        negative = eigenvalues[eigenvalues < -NEGATIVE_EIGENVALUE_TOL]
        results[subsystem] = -float(negative.sum())
    assert abs(results["electron"] - results["nucleus"]) <= 1e-10
    return results["electron"]


@dataclass(frozen=True)
class QuantumLimitResult:
    """Threshold polarization and temperature for a given ESR frequency."""

    threshold_polarization: float
    temperature: float  # K
    esr_frequency: float  # Hz

    def __post_init__(self):
        k = math.tanh(PLANCK * self.esr_frequency / (2.0 * BOLTZMANN * self.temperature))
        if abs(k - self.threshold_polarization) > 1e-9:
            raise ValueError("temperature and threshold polarization are inconsistent")

    def to_json(self) -> dict:
        return {
            "threshold_polarization": sig12(self.threshold_polarization),
            "threshold_temperature_k": sig12(self.temperature),
            "esr_frequency_hz": sig12(self.esr_frequency),
        }

    def summary(self) -> str:
        return (
            f"quantum limit at {self.esr_frequency / 1e9:.6g} GHz: "
            f"entanglement below T_Q = {self.temperature:.6g} K "
            f"(threshold polarization {self.threshold_polarization:.6g})"
        )


def quantum_limit_temperature(esr_frequency: float) -> QuantumLimitResult:
    """Closed-form threshold temperature: tanh(h nu / 2 k_B T) = 1/sqrt(2)."""
    if not esr_frequency > 0:
        raise ValueError("esr_frequency must be positive")
    t_q = PLANCK * esr_frequency / (2.0 * BOLTZMANN * math.atanh(THRESHOLD_POLARIZATION))
    return QuantumLimitResult(THRESHOLD_POLARIZATION, t_q, esr_frequency)


def entangled_at(esr_frequency: float, temperature: float) -> bool:
    """Whether the thermally prepared ensemble is entangled (strict threshold)."""
    if not (esr_frequency > 0 and temperature > 0):
        raise ValueError("frequency and temperature must be positive")
    k = math.tanh(PLANCK * esr_frequency / (2.0 * BOLTZMANN * temperature))
    return k > THRESHOLD_POLARIZATION


def pipeline_limit_temperature(esr_frequency: float, rel_tol: float = 1e-9) -> float:
    """Threshold temperature found by bisection on the simulated ensemble.

    Independent route to the quantum limit: prepare the singlet from the
    exact thermal state (tanh polarization) through the actual pulse
    program and bisect the temperature at which the negativity of the
    result stops being positive.
    """
    if not esr_frequency > 0:
        raise ValueError("esr_frequency must be positive")
    unitary = compile_program(bell_prep_program(BellState.PSI_MINUS,
                                                include_pseudo_pure_step=True))

    def is_entangled(temperature: float) -> bool:
        x = PLANCK * esr_frequency / (2.0 * BOLTZMANN * temperature)
        rho = evolve(boltzmann_density(math.tanh(x)), unitary)
        return negativity(rho) > 0.0

    # Bracket via the dimensionless argument x = h nu / (2 k_B T):
    # x = 10 is deeply polarized, x = 0.1 is deeply thermal.
    lo = PLANCK * esr_frequency / (2.0 * BOLTZMANN * 10.0)
    hi = PLANCK * esr_frequency / (2.0 * BOLTZMANN * 0.1)
    if not is_entangled(lo) or is_entangled(hi):
        raise RuntimeError("bisection bracket does not straddle the threshold")
    while (hi - lo) > rel_tol * lo:
        mid = 0.5 * (lo + hi)
        if is_entangled(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
