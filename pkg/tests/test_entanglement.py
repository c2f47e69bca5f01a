"""Partial transpose, negativity, and the thermal quantum limit."""

import math

import numpy as np
import pytest

from endorsim.entanglement import (
    QuantumLimitResult,
    THRESHOLD_POLARIZATION,
    entangled_at,
    negativity,
    partial_transpose,
    pipeline_limit_temperature,
    quantum_limit_temperature,
)
from endorsim.prep import (
    BOLTZMANN,
    PLANCK,
    BellState,
    bell_prep_program,
    bell_start_level,
    bell_state,
    boltzmann_density,
    pseudo_pure,
)
from endorsim.pulses import compile_program
from endorsim.spincore import DensityMatrix, basis_state, evolve

from support import random_density_matrix


def prepared_thermal(polarization: float) -> DensityMatrix:
    program = bell_prep_program(BellState.PSI_MINUS, include_pseudo_pure_step=True)
    return evolve(boltzmann_density(polarization), compile_program(program))


def test_partial_transpose_product_state_invariant():
    rho = basis_state(1).to_density_matrix()
    for subsystem in ("electron", "nucleus"):
        assert np.array_equal(partial_transpose(rho, subsystem), rho.matrix)


def test_partial_transpose_of_singlet():
    rho = bell_state("psi-minus").to_density_matrix()
    pt = partial_transpose(rho, "electron")
    # independent eigenvalue oracle
    eigenvalues = np.linalg.eigvalsh(pt)
    assert eigenvalues[0] == pytest.approx(-0.5, abs=1e-12)
    assert np.abs(pt - pt.conj().T).max() < 1e-15
    assert np.trace(pt).real == pytest.approx(1.0, abs=1e-15)


def test_partial_transpose_is_involution():
    rng = np.random.RandomState(13)
    for _ in range(20):
        rho = random_density_matrix(rng)
        for subsystem in ("electron", "nucleus"):
            twice = partial_transpose(partial_transpose(rho, subsystem), subsystem)
            assert np.abs(twice - rho.matrix).max() < 1e-15
    with pytest.raises(ValueError):
        partial_transpose(rho, "photon")


def test_negativity_of_bell_states():
    for label in BellState:
        rho = bell_state(label).to_density_matrix()
        assert negativity(rho) == pytest.approx(0.5, abs=1e-10)


def test_negativity_of_diagonal_states_is_zero():
    rng = np.random.RandomState(5)
    for _ in range(10):
        rho = DensityMatrix.from_diagonal(rng.dirichlet(np.ones(4)).astype(complex))
        assert negativity(rho) == 0.0


def test_negativity_of_separable_mixtures_is_zero():
    rng = np.random.RandomState(23)
    for _ in range(20):
        mix = np.zeros((4, 4), dtype=complex)
        weights = rng.dirichlet(np.ones(5))
        for w in weights:
            e = rng.randn(2) + 1j * rng.randn(2)
            n = rng.randn(2) + 1j * rng.randn(2)
            amp = np.kron(e / np.linalg.norm(e), n / np.linalg.norm(n))
            mix += w * np.outer(amp, amp.conj())
        assert negativity(DensityMatrix(mix)) <= 1e-10


def test_negativity_invariant_under_local_unitaries():
    rng = np.random.RandomState(41)

    def random_su2():
        raw = rng.randn(2, 2) + 1j * rng.randn(2, 2)
        q, r = np.linalg.qr(raw)
        return q * (np.diag(r) / np.abs(np.diag(r)))

    for _ in range(20):
        rho = random_density_matrix(rng)
        local = np.kron(random_su2(), random_su2())
        rotated = DensityMatrix(local @ rho.matrix @ local.conj().T)
        assert negativity(rotated) == pytest.approx(negativity(rho), abs=1e-10)


def test_thermal_pipeline_threshold():
    # transposed-block eigenvalue of the prepared ensemble is
    # 1/4 - sqrt(2) K / 4, so the state is entangled exactly for K > 1/sqrt(2)
    for k in (0.70, 0.7071067811865476, 0.7072, 0.9):
        rho = prepared_thermal(k)
        closed_form = 0.25 - math.sqrt(2.0) * k / 4.0
        numeric = np.linalg.eigvalsh(partial_transpose(rho, "electron")).min()
        assert numeric == pytest.approx(closed_form, abs=1e-12)
        expected = max(0.0, -closed_form)
        assert negativity(rho) == pytest.approx(expected, abs=1e-9)


def test_pipeline_negativity_monotone_in_temperature():
    nu = 95e9
    temps = np.linspace(0.5, 6.0, 12)
    values = []
    for t in temps:
        k = math.tanh(PLANCK * nu / (2 * BOLTZMANN * t))
        values.append(negativity(prepared_thermal(k)))
    assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))


def test_quantum_limit_temperature():
    result = quantum_limit_temperature(95e9)
    assert result.temperature == pytest.approx(2.576, rel=0.01)
    assert result.threshold_polarization == pytest.approx(2 ** -0.5, abs=1e-15)
    # closed form scales linearly with frequency
    low = quantum_limit_temperature(9.49e9)
    assert low.temperature == pytest.approx(result.temperature * 9.49 / 95, rel=1e-12)
    assert low.temperature == pytest.approx(0.258, rel=0.01)
    with pytest.raises(ValueError):
        quantum_limit_temperature(0.0)


def test_quantum_limit_result_consistency():
    result = quantum_limit_temperature(95e9)
    k = math.tanh(PLANCK * result.esr_frequency / (2 * BOLTZMANN * result.temperature))
    assert k == pytest.approx(result.threshold_polarization, abs=1e-9)
    with pytest.raises(ValueError):
        QuantumLimitResult(0.5, result.temperature, result.esr_frequency)


def test_quantum_limit_json_and_summary():
    result = quantum_limit_temperature(95e9)
    doc = result.to_json()
    assert set(doc) == {"threshold_polarization", "threshold_temperature_k",
                        "esr_frequency_hz"}
    assert doc["esr_frequency_hz"] == 95e9
    assert "T_Q" in result.summary() and "95 GHz" in result.summary()


def test_entangled_at():
    t_q = quantum_limit_temperature(95e9).temperature
    assert entangled_at(95e9, 1e-6)
    assert entangled_at(95e9, 2.0)
    assert not entangled_at(95e9, 3.0)
    assert not entangled_at(95e9, 40.0)
    assert not entangled_at(95e9, t_q)  # strict inequality at the boundary
    with pytest.raises(ValueError):
        entangled_at(-1.0, 1.0)
    with pytest.raises(ValueError):
        entangled_at(95e9, 0.0)


def test_pipeline_bisection_agrees_with_closed_form():
    closed = quantum_limit_temperature(95e9).temperature
    bisected = pipeline_limit_temperature(95e9)
    assert bisected == pytest.approx(closed, rel=1e-6)
