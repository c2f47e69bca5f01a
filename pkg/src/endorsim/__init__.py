"""Desk-scale simulator of pulsed ENDOR Bell-state experiments.

Prepares the four maximally entangled states of an electron-nuclear
spin pair with transition-selective pulse sequences, detects them by
phase-rotation tomography, analyzes the resulting interferograms and
spectra, models flip-angle errors with phase cycling, and evaluates the
partial-transpose entanglement criterion including the thermal quantum
limit.
"""

from .entanglement import (
    QuantumLimitResult,
    entangled_at,
    negativity,
    partial_transpose,
    pipeline_limit_temperature,
    quantum_limit_temperature,
)
from .imperfections import PhaseComponents, fit_phase_components, model_coefficients, perturb_program
from .prep import (
    BellState,
    ExperimentConfig,
    bell_prep_program,
    bell_start_level,
    bell_state,
    boltzmann_density,
    load_config,
    pseudo_boltzmann,
    pseudo_pure,
    thermal_polarization,
)
from .pseq import ParseError, ProgramDocument, format_document, parse
from .pulses import (
    PulseProgram,
    PulseStep,
    TransitionError,
    compile_program,
    program_duration,
    selective_unitary,
    z_rotation,
)
from .spectral import Spectrum, dft_magnitude, find_peaks
from .spincore import (
    DensityMatrix,
    Operator,
    PureState,
    apply_unitary,
    basis_state,
    evolve,
    fictitious_z,
    fidelity,
    hermitian_eigenvalues,
    standard_operator,
    trace_expectation,
)
from .tomography import (
    DetectorFamily,
    Interferogram,
    ScanSettings,
    detect,
    detector_program,
    echo_signal,
    interferogram,
    phase_cycled_detect,
    pipeline_signal,
)

__version__ = "0.1.0"
