"""Shared random-instance generators for the test suite (seeded, no hypothesis)."""

from __future__ import annotations

import numpy as np

from endorsim.pseq import InitDirective, MeasureDirective, ProgramDocument, degrees_to_radians
from endorsim.pulses import CHANNEL_TRANSITIONS, PulseProgram, PulseStep
from endorsim.spincore import DensityMatrix


def random_step(rng: np.random.RandomState) -> PulseStep:
    channel = rng.choice(["S", "I"])
    j, k = CHANNEL_TRANSITIONS[channel][rng.randint(2)]
    flip = rng.uniform(-2 * np.pi, 2 * np.pi)
    phase = rng.uniform(-np.pi, np.pi)
    return PulseStep(channel, j, k, flip, phase)


def random_program(rng: np.random.RandomState, max_steps: int = 6) -> PulseProgram:
    n = rng.randint(1, max_steps + 1)
    return PulseProgram(tuple(random_step(rng) for _ in range(n)))


def random_density_matrix(rng: np.random.RandomState) -> DensityMatrix:
    """Random mixed state: Haar-ish eigenbasis with Dirichlet weights."""
    raw = rng.randn(4, 4) + 1j * rng.randn(4, 4)
    q, _ = np.linalg.qr(raw)
    weights = rng.dirichlet(np.ones(4))
    return DensityMatrix(q @ np.diag(weights.astype(complex)) @ q.conj().T)


def _representable_degrees(rng: np.random.RandomState, lo: float, hi: float) -> float:
    # keep within 6 significant digits so canonical text reproduces the value
    if rng.rand() < 0.3:
        return float(15 * rng.randint(round(lo / 15), round(hi / 15) + 1))
    return float(round(rng.uniform(lo, hi), 2))


def random_document(rng: np.random.RandomState) -> ProgramDocument:
    init = None
    roll = rng.rand()
    if roll < 0.2:
        init = InitDirective("pseudo-pure", level=int(rng.randint(1, 5)))
    elif roll < 0.4:
        init = InitDirective("pure", level=int(rng.randint(1, 5)))
    elif roll < 0.6:
        init = InitDirective("pseudo-boltzmann")
    elif roll < 0.8:
        init = InitDirective(
            "boltzmann",
            temperature=float(round(rng.uniform(1.0, 300.0), 2)),
            field_mt=float(round(rng.uniform(0.1, 1000.0), 2)),
        )
    steps = []
    for _ in range(rng.randint(0, 6)):
        channel = rng.choice(["S", "I"])
        j, k = CHANNEL_TRANSITIONS[channel][rng.randint(2)]
        flip = degrees_to_radians(_representable_degrees(rng, -360.0, 360.0))
        phase = 0.0
        if rng.rand() < 0.5:
            phase = degrees_to_radians(_representable_degrees(rng, -179.0, 180.0))
        steps.append(PulseStep(channel, j, k, flip, phase))
    measure = None
    if rng.rand() < 0.5:
        channel = rng.choice(["S", "I"])
        j, k = CHANNEL_TRANSITIONS[channel][rng.randint(2)]
        measure = MeasureDirective(channel, j, k)
    return ProgramDocument(init, tuple(steps), measure)
