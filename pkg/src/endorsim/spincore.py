"""Linear algebra core for the coupled electron-nucleus spin pair.

The four Zeeman product levels of an S = 1/2, I = 1/2 pair are numbered
1..4 in the fixed order ``|uu>, |ud>, |du>, |dd>`` (electron spin first);
the matrix index of level ``n`` is ``n - 1``.  Every other module shares
this ordering, so sign conventions established here propagate unchanged
through pulses, tomography, and entanglement metrics.

Spin-up corresponds to m = +1/2 and qubit bit 0, spin-down to m = -1/2
and bit 1.  Allowed single-quantum transitions split into the electron
(ESR) pairs 1-3 / 2-4 and the nuclear (NMR) pairs 1-2 / 3-4; the
remaining pairs 1-4 / 2-3 are double/zero-quantum and cannot be driven
by a selective pulse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DIM = 4

# Absolute tolerances; every matrix entry handled here is O(1).
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
NORM_TOL = 1e-12
UNITARY_TOL = 1e-12
PSD_TOL = 1e-10


@dataclass(frozen=True)
class Level:
    """One Zeeman product level with its spin and qubit labels."""

    level: int
    m_s: float
    m_i: float
    qubit: str

    @property
    def index(self) -> int:
        return self.level - 1


LEVELS: tuple[Level, ...] = (
    Level(1, +0.5, +0.5, "00"),
    Level(2, +0.5, -0.5, "01"),
    Level(3, -0.5, +0.5, "10"),
    Level(4, -0.5, -0.5, "11"),
)

ESR_TRANSITIONS = ((1, 3), (2, 4))
NMR_TRANSITIONS = ((1, 2), (3, 4))
FORBIDDEN_TRANSITIONS = ((1, 4), (2, 3))

_SZ_DIAG = np.array([lv.m_s for lv in LEVELS])
_IZ_DIAG = np.array([lv.m_i for lv in LEVELS])


def level_info(level: int) -> Level:
    """Return the :class:`Level` record for a 1-based level number."""
    _check_level(level)
    return LEVELS[level - 1]


def transition_kind(j: int, k: int) -> str:
    """Classify the unordered level pair as ``"esr"``, ``"nmr"`` or ``"forbidden"``."""
    _check_level(j)
    _check_level(k)
    if j == k:
        raise ValueError("transition needs two distinct levels")
    pair = (min(j, k), max(j, k))
    if pair in ESR_TRANSITIONS:
        return "esr"
    if pair in NMR_TRANSITIONS:
        return "nmr"
    return "forbidden"


def _check_level(level: int) -> None:
    if level not in (1, 2, 3, 4):
        raise ValueError(f"level must be 1..4, got {level!r}")


def _freeze(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def sig12(value: float) -> float:
    """Round to 12 significant digits (the serialization precision)."""
    return float(f"{value:.12g}")


def matrix_to_json(matrix: np.ndarray) -> dict:
    """Row-major [re, im] nested-array form with the basis tag."""
    m = np.asarray(matrix, dtype=complex)
    return {
        "basis": "level-1..4",
        "entries": [[[sig12(v.real), sig12(v.imag)] for v in row] for row in m],
    }


def hermitian_eigenvalues(matrix: np.ndarray, tol: float = 1e-15,
                          max_sweeps: int = 60) -> np.ndarray:
    """Eigenvalues of a small Hermitian matrix by cyclic complex Jacobi rotations.

    Each sweep annihilates every off-diagonal element in turn with a
    unitary plane rotation; for the 4x4 matrices handled here a handful
    of sweeps reaches machine precision.  Returns the eigenvalues in
    ascending order.
    """
    a = np.array(matrix, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    if np.abs(a - a.conj().T).max() > 1e-9:
        raise ValueError("matrix is not Hermitian")
    scale = max(1.0, float(np.linalg.norm(a)))
    for _ in range(max_sweeps):
        off = math.sqrt(sum(abs(a[p, q]) ** 2
                            for p in range(n - 1) for q in range(p + 1, n)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                phase = apq / abs(apq)
                theta = 0.5 * math.atan2(2.0 * abs(apq), (a[q, q] - a[p, p]).real)
                c = math.cos(theta)
                s = phase * math.sin(theta)
                rot = np.eye(n, dtype=complex)
                rot[p, p] = c
                rot[p, q] = s
                rot[q, p] = -np.conj(s)
                rot[q, q] = c
                a = rot.conj().T @ a @ rot
    else:
        raise RuntimeError("Jacobi sweep did not converge")
    return np.sort(np.diag(a).real)


def is_unitary(matrix: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    m = np.asarray(matrix, dtype=complex)
    if m.shape != (DIM, DIM):
        return False
    return bool(np.abs(m.conj().T @ m - np.eye(DIM)).max() <= tol)


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector of the spin pair."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.array(self.amplitudes, dtype=complex).reshape(DIM)
        norm = float(np.linalg.norm(amp))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm} deviates from 1 beyond {NORM_TOL}")
        object.__setattr__(self, "amplitudes", _freeze(amp))

    def overlap(self, other: "PureState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def to_density_matrix(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """4x4 Hermitian, unit-trace, positive-semidefinite ensemble state."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex).reshape(DIM, DIM)
        if np.abs(m - m.conj().T).max() > HERMITIAN_TOL:
            raise ValueError("density matrix is not Hermitian")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace {tr} deviates from 1")
        if hermitian_eigenvalues(m)[0] < -PSD_TOL:
            raise ValueError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "matrix", _freeze(m))

    @classmethod
    def from_pure(cls, state: PureState) -> "DensityMatrix":
        return state.to_density_matrix()

    @classmethod
    def from_diagonal(cls, populations) -> "DensityMatrix":
        return cls(np.diag(np.asarray(populations, dtype=complex)))

    @property
    def populations(self) -> np.ndarray:
        return self.matrix.diagonal().real.copy()

    def to_json(self) -> dict:
        return matrix_to_json(self.matrix)


@dataclass(frozen=True, eq=False)
class Operator:
    """4x4 observable or general operator; validated when flagged Hermitian."""

    matrix: np.ndarray
    hermitian: bool = True

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex).reshape(DIM, DIM)
        if self.hermitian and np.abs(m - m.conj().T).max() > HERMITIAN_TOL:
            raise ValueError("operator flagged Hermitian is not")
        object.__setattr__(self, "matrix", _freeze(m))

    def __add__(self, other: "Operator") -> "Operator":
        return Operator(self.matrix + other.matrix,
                        hermitian=self.hermitian and other.hermitian)

    def __rmul__(self, scalar) -> "Operator":
        keeps = self.hermitian and abs(complex(scalar).imag) == 0.0
        return Operator(scalar * self.matrix, hermitian=keeps)

    __mul__ = __rmul__

    def to_json(self) -> dict:
        return matrix_to_json(self.matrix)


def basis_state(level: int) -> PureState:
    """Basis vector |level> in the fixed 1..4 ordering."""
    _check_level(level)
    amp = np.zeros(DIM, dtype=complex)
    amp[level - 1] = 1.0
    return PureState(amp)


def standard_operator(name: str) -> Operator:
    """One of the shared diagonal spin operators: Sz, Iz, SzIz or identity."""
    diagonals = {
        "Sz": _SZ_DIAG,
        "Iz": _IZ_DIAG,
        "SzIz": _SZ_DIAG * _IZ_DIAG,
        "identity": np.ones(DIM),
    }
    if name not in diagonals:
        raise ValueError(f"unknown operator {name!r}; expected one of {sorted(diagonals)}")
    return Operator(np.diag(diagonals[name].astype(complex)))


def fictitious_z(j: int, k: int) -> Operator:
    """Effective spin-1/2 z operator of the j-k two-level subspace.

    Defined as (|j><j| - |k><k|)/2 and zero elsewhere; twice this
    operator measures the population difference across the transition.
    """
    _check_level(j)
    _check_level(k)
    if j >= k:
        raise ValueError("fictitious_z requires j < k")
    m = np.zeros((DIM, DIM), dtype=complex)
    m[j - 1, j - 1] = 0.5
    m[k - 1, k - 1] = -0.5
    return Operator(m)


def evolve(rho: DensityMatrix, unitary: np.ndarray) -> DensityMatrix:
    """Conjugate the state: U rho U^dagger."""
    u = np.asarray(unitary, dtype=complex)
    if not is_unitary(u):
        raise ValueError("evolution operator is not unitary within tolerance")
    return DensityMatrix(u @ rho.matrix @ u.conj().T)


def apply_unitary(state: PureState, unitary: np.ndarray) -> PureState:
    u = np.asarray(unitary, dtype=complex)
    if not is_unitary(u):
        raise ValueError("evolution operator is not unitary within tolerance")
    return PureState(u @ state.amplitudes)


def trace_expectation(rho: DensityMatrix, operator: Operator) -> float:
    """tr(O rho); the imaginary part (zero for Hermitian O) is discarded."""
    value = complex(np.trace(operator.matrix @ rho.matrix))
    return value.real


def fidelity(rho: DensityMatrix, state: PureState) -> float:
    """Overlap <psi| rho |psi>, clamped to [0, 1]."""
    amp = state.amplitudes
    value = complex(np.vdot(amp, rho.matrix @ amp)).real
    return min(max(value, 0.0), 1.0)
