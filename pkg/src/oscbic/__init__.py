"""Oscillating bound states in the continuum for a giant atom on a 1D lattice.

A library and CLI for the analytic and numerical theory of a single emitter
coupled at several equally spaced points to a finite tight-binding photonic
chain: exact spectra, in-band and out-of-band bound states, persistent
emitter-probability oscillations, confined-state initialization, and the
waveguide-array experimental mapping.
"""

from .errors import AnalysisError, ConfigurationError, NumericalError
from .lattice import (
    BoundStateRecord,
    LatticeConfig,
    Spectrum,
    UniformGiantAtomLayout,
    auto_chain_length,
    build_hamiltonian,
    classify_states,
    diagonalize,
    expand_layout,
    uniform_lattice_config,
)
from .spectral import (
    BicDesign,
    BocPrediction,
    ContinuousWaveguideComparison,
    M2BicReport,
    continuous_waveguide_comparison,
    design_oscillating_bic,
    emitter_probability_bic,
    emitter_probability_bic_asymptotic,
    g_abs_sq,
    non_markovianity,
    non_markovianity_asymptotic,
    predict_boc,
    residue_prediction,
    self_energy,
    self_energy_derivative,
    verify_m2_no_oscillation,
    zero_coupling_momenta,
)
from .dynamics import (
    OscillationSummary,
    SingleExcitationState,
    TimeSeries,
    compare_with_residue,
    default_transient,
    evolve,
    evolve_states,
    extract_oscillation,
    initial_atom_excited,
    observables,
    sinusoid_fit_residual,
)
from .bic_states import (
    BicPairStates,
    PStateEntry,
    bic_eigenstate_real_space,
    bic_pair,
    build_p_state,
    i_n_integral,
)
from .experiment import WaveguidePlan, waveguide_parameters, with_imperfections

__version__ = "0.1.0"

__all__ = [
    "AnalysisError",
    "ConfigurationError",
    "NumericalError",
    "BoundStateRecord",
    "LatticeConfig",
    "Spectrum",
    "UniformGiantAtomLayout",
    "auto_chain_length",
    "build_hamiltonian",
    "classify_states",
    "diagonalize",
    "expand_layout",
    "uniform_lattice_config",
    "BicDesign",
    "BocPrediction",
    "ContinuousWaveguideComparison",
    "M2BicReport",
    "continuous_waveguide_comparison",
    "design_oscillating_bic",
    "emitter_probability_bic",
    "emitter_probability_bic_asymptotic",
    "g_abs_sq",
    "non_markovianity",
    "non_markovianity_asymptotic",
    "predict_boc",
    "residue_prediction",
    "self_energy",
    "self_energy_derivative",
    "verify_m2_no_oscillation",
    "zero_coupling_momenta",
    "OscillationSummary",
    "SingleExcitationState",
    "TimeSeries",
    "compare_with_residue",
    "default_transient",
    "evolve",
    "evolve_states",
    "extract_oscillation",
    "initial_atom_excited",
    "observables",
    "sinusoid_fit_residual",
    "BicPairStates",
    "PStateEntry",
    "bic_eigenstate_real_space",
    "bic_pair",
    "build_p_state",
    "i_n_integral",
    "WaveguidePlan",
    "waveguide_parameters",
    "with_imperfections",
]
