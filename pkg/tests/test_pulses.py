"""Selective-pulse conventions, z-rotations, compilation, durations."""

import math

import numpy as np
import pytest

from endorsim.prep import ExperimentConfig
from endorsim.pulses import (
    PulseProgram,
    PulseStep,
    TransitionError,
    compile_program,
    normalize_phase,
    program_duration,
    selective_unitary,
    z_rotation,
)
from endorsim.spincore import apply_unitary, basis_state

from support import random_program

S2 = 2 ** -0.5


def test_half_pulse_creates_equal_superposition():
    u = selective_unitary("I", 1, 2, math.pi / 2)
    out = apply_unitary(basis_state(1), u)
    assert np.allclose(out.amplitudes, [S2, S2, 0, 0], atol=1e-15)


def test_negative_pi_pulse_completes_singlet():
    mid = apply_unitary(basis_state(1), selective_unitary("I", 1, 2, math.pi / 2))
    out = apply_unitary(mid, selective_unitary("S", 1, 3, -math.pi))
    assert np.allclose(out.amplitudes, [0, S2, -S2, 0], atol=1e-15)


def test_phased_detection_population_formula():
    # phased back-transformation of the singlet: level-1 population follows
    # (1 - cos(phi1 - phi2)) / 2; checked against explicitly built matrices
    singlet = np.zeros(4, dtype=complex)
    singlet[1], singlet[2] = S2, -S2
    for phi1 in np.linspace(-math.pi, math.pi, 7):
        for phi2 in np.linspace(-math.pi, math.pi, 7):
            u1 = selective_unitary("S", 1, 3, -math.pi, phi1)
            u2 = selective_unitary("I", 1, 2, -math.pi / 2, phi2)
            final = u2 @ (u1 @ singlet)
            expected = 0.5 * (1 - math.cos(phi1 - phi2))
            assert abs(final[0]) ** 2 == pytest.approx(expected, abs=1e-12)


def test_forbidden_transitions():
    with pytest.raises(TransitionError):
        selective_unitary("S", 1, 2, math.pi)
    with pytest.raises(TransitionError):
        selective_unitary("I", 1, 3, math.pi)
    for j, k in [(1, 4), (2, 3)]:
        for channel in "SI":
            with pytest.raises(TransitionError):
                selective_unitary(channel, j, k, math.pi)
    with pytest.raises(TransitionError):
        PulseStep("X", 1, 2, math.pi)


def test_flip_angle_bounds():
    selective_unitary("S", 1, 3, 2 * math.pi)  # boundary allowed
    with pytest.raises(ValueError):
        selective_unitary("S", 1, 3, 2 * math.pi + 0.1)


def test_phase_normalization():
    assert PulseStep("S", 1, 3, 1.0, 3 * math.pi).phase == pytest.approx(math.pi)
    assert PulseStep("S", 1, 3, 1.0, -math.pi).phase == math.pi
    assert -math.pi < PulseStep("S", 1, 3, 1.0, 123.456).phase <= math.pi
    assert normalize_phase(0.25) == 0.25


def test_z_rotation_phase_factors():
    phi1, phi2 = 0.7, -1.3
    u = z_rotation("S", phi1) @ z_rotation("I", phi2)
    for level, (m_s, m_i) in enumerate([(0.5, 0.5), (0.5, -0.5), (-0.5, 0.5), (-0.5, -0.5)]):
        expected = np.exp(-1j * (phi1 * m_s + phi2 * m_i))
        assert u[level, level] == pytest.approx(expected, abs=1e-15)
    assert np.allclose(z_rotation("S", 0.0), np.eye(4), atol=1e-15)
    assert np.allclose(z_rotation("S", 2 * math.pi), -np.eye(4), atol=1e-12)


def test_z_rotation_transition_target_and_errors():
    u = z_rotation((1, 3), 0.8)
    assert u[0, 0] == pytest.approx(np.exp(-0.4j))
    assert u[2, 2] == pytest.approx(np.exp(0.4j))
    assert u[1, 1] == 1.0
    with pytest.raises(ValueError):
        z_rotation("X", 1.0)
    with pytest.raises(ValueError):
        z_rotation("S", math.inf)


def test_phase_shift_law():
    # phased pulse equals z-sandwiched unphased pulse; this pins the sign
    # convention of the exp(-i phi) factors
    for beta in np.linspace(-2 * math.pi, 2 * math.pi, 9):
        for phi in np.linspace(-3.0, 3.0, 7):
            direct = selective_unitary("S", 2, 4, beta, phi)
            sandwich = (z_rotation((2, 4), -phi)
                        @ selective_unitary("S", 2, 4, beta)
                        @ z_rotation((2, 4), phi))
            assert np.abs(direct - sandwich).max() < 1e-12


def test_inverse_law():
    rng = np.random.RandomState(3)
    for _ in range(25):
        beta = rng.uniform(-2 * math.pi, 2 * math.pi)
        phi = rng.uniform(-math.pi, math.pi)
        u = selective_unitary("I", 3, 4, beta, phi)
        v = selective_unitary("I", 3, 4, -beta, phi)
        assert np.abs(u @ v - np.eye(4)).max() < 1e-12


def test_flip_angle_periodicity():
    u0 = selective_unitary("S", 1, 3, 0.5, 0.3)
    u_plus = selective_unitary("S", 1, 3, 0.5 - 2 * math.pi, 0.3)
    # 2 pi offset flips the sign inside the subspace block only
    block = np.ix_([0, 2], [0, 2])
    assert np.abs(u0[block] + u_plus[block]).max() < 1e-12
    rho = basis_state(1).to_density_matrix()
    a = (u0 @ rho.matrix @ u0.conj().T)
    b = (u_plus @ rho.matrix @ u_plus.conj().T)
    assert np.abs(a - b).max() < 1e-12
    # a full 4 pi separation gives the identical unitary
    lo = selective_unitary("I", 3, 4, -2 * math.pi, 0.7)
    hi = selective_unitary("I", 3, 4, 2 * math.pi, 0.7)
    assert np.abs(lo - hi).max() < 1e-12


def test_unitarity_over_random_steps():
    rng = np.random.RandomState(11)
    for _ in range(200):
        u = compile_program(random_program(rng))
        assert np.abs(u.conj().T @ u - np.eye(4)).max() < 1e-12


def test_compile_empty_program():
    assert np.array_equal(compile_program(PulseProgram()), np.eye(4))


def test_compile_entangling_sequence():
    program = PulseProgram((
        PulseStep("I", 1, 2, math.pi / 2),
        PulseStep("S", 1, 3, -math.pi),
    ))
    out = apply_unitary(basis_state(1), compile_program(program))
    assert np.allclose(out.amplitudes, [0, S2, -S2, 0], atol=1e-15)


def test_compile_phi_sequence_gives_global_minus():
    program = PulseProgram((
        PulseStep("I", 1, 2, math.pi / 2),
        PulseStep("S", 2, 4, -math.pi),
    ))
    out = apply_unitary(basis_state(2), compile_program(program))
    assert np.allclose(out.amplitudes, [-S2, 0, 0, -S2], atol=1e-15)


def test_compile_concatenation():
    rng = np.random.RandomState(5)
    for _ in range(30):
        a = random_program(rng)
        b = random_program(rng)
        combined = compile_program(a + b)
        product = compile_program(b) @ compile_program(a)
        assert np.abs(combined - product).max() < 1e-12


def test_program_duration():
    config = ExperimentConfig()
    entangle = PulseProgram((
        PulseStep("I", 1, 2, math.pi / 2),
        PulseStep("S", 1, 3, -math.pi),
    ))
    assert program_duration(entangle, config) == 832.0
    assert program_duration(PulseProgram(), config) == 0.0
    single = PulseProgram((PulseStep("S", 1, 3, math.pi),))
    assert program_duration(single, config) == 32.0
    half = PulseProgram((PulseStep("S", 1, 3, math.pi / 2),))
    assert program_duration(half, config) == 16.0


def test_program_duration_requires_durations():
    program = PulseProgram((PulseStep("S", 1, 3, math.pi),))
    with pytest.raises(ValueError):
        program_duration(program, object())


def test_phase_offsets():
    program = PulseProgram((
        PulseStep("S", 1, 3, math.pi, 0.1),
        PulseStep("I", 1, 2, math.pi / 2, 0.2),
    ))
    shifted = program.with_phase_offsets(0.5, -0.5)
    assert shifted.steps[0].phase == pytest.approx(0.6)
    assert shifted.steps[1].phase == pytest.approx(-0.3)
