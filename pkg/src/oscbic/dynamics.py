"""Exact single-excitation time evolution and observable extraction.

Propagation is done by spectral decomposition of the finite Hamiltonian:
psi(t) = sum_E exp(-i E t) <E|psi0> |E>, which is exact at every sampled time
and costs one diagonalization regardless of how many samples are requested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import AnalysisError, ConfigurationError, NumericalError
from .lattice import LatticeConfig, Spectrum
from .spectral import BicDesign, residue_prediction

_NORM_TOL = 1e-10
_UNITARITY_TOL = 1e-10


@dataclass(frozen=True)
class SingleExcitationState:
    """One excitation shared between the atom and the N chain sites."""

    psi_a: complex
    psi_sites: np.ndarray

    def __post_init__(self) -> None:
        sites = np.asarray(self.psi_sites, dtype=complex)
        object.__setattr__(self, "psi_sites", sites)
        if abs(self.norm() - 1.0) > _NORM_TOL:
            raise ConfigurationError(
                f"state must be normalized to 1 within {_NORM_TOL}, got norm {self.norm()!r}"
            )

    def norm(self) -> float:
        return float(np.sqrt(abs(self.psi_a) ** 2 + np.sum(np.abs(self.psi_sites) ** 2)))

    def as_vector(self) -> np.ndarray:
        """Amplitudes in the [atom, site 1..N] basis."""
        return np.concatenate(([complex(self.psi_a)], self.psi_sites))

    @classmethod
    def from_vector(cls, vec: np.ndarray) -> "SingleExcitationState":
        vec = np.asarray(vec, dtype=complex)
        return cls(psi_a=complex(vec[0]), psi_sites=vec[1:].copy())


@dataclass(frozen=True)
class TimeSeries:
    """Sampled observables of one evolution run."""

    times: np.ndarray
    prob_atom: np.ndarray
    prob_sites: np.ndarray | None = None
    site_indices: np.ndarray | None = None
    leakage: np.ndarray | None = None
    prob_total: np.ndarray | None = None

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        object.__setattr__(self, "times", times)
        if times.ndim != 1 or len(times) < 1:
            raise ConfigurationError("times must be a non-empty 1D array")
        if np.any(np.diff(times) <= 0):
            raise ConfigurationError("times must be strictly increasing")
        for name in ("prob_atom", "leakage", "prob_total"):
            arr = getattr(self, name)
            if arr is None:
                continue
            arr = np.asarray(arr, dtype=float)
            object.__setattr__(self, name, arr)
            if arr.shape != times.shape:
                raise ConfigurationError(f"{name} must match times in length")
            if np.any(arr < -1e-12) or np.any(arr > 1.0 + 1e-9):
                raise ConfigurationError(f"{name} must lie in [0, 1]")
        if self.prob_sites is not None:
            ps = np.asarray(self.prob_sites, dtype=float)
            object.__setattr__(self, "prob_sites", ps)
            if ps.shape[0] != len(times):
                raise ConfigurationError("prob_sites must have one row per time")
            if np.any(ps < -1e-12) or np.any(ps > 1.0 + 1e-9):
                raise ConfigurationError("prob_sites must lie in [0, 1]")
        if self.prob_total is not None and np.max(np.abs(self.prob_total - 1.0)) > 1e-8:
            raise ConfigurationError("total probability must be 1 within 1e-8 at every time")


def initial_atom_excited(config: LatticeConfig) -> SingleExcitationState:
    """The decay initial condition: excitation on the atom, chain in vacuum."""
    return SingleExcitationState(psi_a=1.0, psi_sites=np.zeros(config.N, dtype=complex))


def evolve_states(spectrum: Spectrum, psi0: SingleExcitationState, times) -> np.ndarray:
    """Full evolved amplitudes, one row per time, in the [atom, sites] basis."""
    times = np.asarray(times, dtype=float)
    vec = psi0.as_vector()
    if vec.shape[0] != spectrum.states.shape[0]:
        raise ConfigurationError(
            f"state dimension {vec.shape[0]} does not match spectrum dimension "
            f"{spectrum.states.shape[0]}"
        )
    coeff = spectrum.states.conj().T @ vec
    phases = np.exp(-1j * np.outer(times, spectrum.energies))
    return (phases * coeff[None, :]) @ spectrum.states.T


def _coupling_window(config: LatticeConfig) -> tuple[int, int]:
    sites = config.coupling_sites
    if not sites:
        raise ConfigurationError("leakage needs at least one coupling point")
    return min(sites), max(sites)


def leakage_from_states(states: np.ndarray, config: LatticeConfig) -> np.ndarray:
    """Total probability on chain sites strictly outside the coupling window."""
    first, last = _coupling_window(config)
    site_prob = np.abs(states[:, 1:]) ** 2
    outside = np.zeros(site_prob.shape[1], dtype=bool)
    outside[: first - 1] = True
    outside[last:] = True
    return site_prob[:, outside].sum(axis=1)


def evolve(
    spectrum: Spectrum,
    psi0: SingleExcitationState,
    times,
    config: LatticeConfig | None = None,
    site_indices=None,
    chunk: int = 256,
) -> TimeSeries:
    """Evolve psi0 and sample observables at the given (sorted) times.

    Args:
        spectrum: eigendecomposition of the Hamiltonian to evolve under.
        psi0: initial state.
        times: strictly increasing sample times.
        config: when given, leakage outside the coupling window is recorded.
        site_indices: 1-based chain sites whose probabilities are kept;
            pass None to skip per-site output.
        chunk: number of time samples evolved per block, to bound memory.

    Returns:
        TimeSeries with prob_atom, prob_total, and optionally leakage and
        prob_sites. Norm conservation is checked to 1e-10 at every sample.
    """
    times = np.asarray(times, dtype=float)
    keep = None if site_indices is None else np.asarray(site_indices, dtype=int)
    prob_atom = np.empty(len(times))
    prob_total = np.empty(len(times))
    leakage = np.empty(len(times)) if config is not None else None
    prob_sites = np.empty((len(times), len(keep))) if keep is not None else None

    for start in range(0, len(times), chunk):
        block = slice(start, min(start + chunk, len(times)))
        states = evolve_states(spectrum, psi0, times[block])
        prob = np.abs(states) ** 2
        prob_atom[block] = prob[:, 0]
        prob_total[block] = prob.sum(axis=1)
        if leakage is not None:
            leakage[block] = leakage_from_states(states, config)
        if prob_sites is not None:
            prob_sites[block] = prob[:, keep]

    drift = np.max(np.abs(prob_total - psi0.norm() ** 2))
    if drift > _UNITARITY_TOL:
        raise NumericalError(f"evolution lost unitarity: max norm drift {drift:.3e}")
    return TimeSeries(
        times=times,
        prob_atom=prob_atom,
        prob_sites=prob_sites,
        site_indices=keep,
        leakage=leakage,
        prob_total=prob_total,
    )


def observables(times, states: np.ndarray, config: LatticeConfig) -> TimeSeries:
    """Extract atom/site probabilities and leakage from stored full states."""
    times = np.asarray(times, dtype=float)
    prob = np.abs(states) ** 2
    return TimeSeries(
        times=times,
        prob_atom=prob[:, 0],
        prob_sites=prob[:, 1:],
        site_indices=np.arange(1, states.shape[1]),
        leakage=leakage_from_states(states, config),
        prob_total=prob.sum(axis=1),
    )


def default_transient(design: BicDesign) -> float:
    """Transient cutoff: atom relaxation plus two traversals of the coupling block."""
    return max(3.0 * design.gamma_inv, 2.0 * (design.M - 1) * design.n0 / (2.0 * design.J))


@dataclass(frozen=True)
class OscillationSummary:
    amplitude: float
    frequency: float | None
    mean: float


def _window(ts: TimeSeries, t_transient: float, expected_frequency: float | None):
    mask = ts.times >= t_transient
    if expected_frequency is not None and expected_frequency > 0:
        needed = t_transient + 3.0 / expected_frequency
        if ts.times[-1] < needed:
            raise AnalysisError(
                f"window [{t_transient}, {ts.times[-1]}] holds fewer than 3 periods "
                f"at frequency {expected_frequency}; extend t_max to at least {needed:.6g}"
            )
    if mask.sum() < 8:
        raise AnalysisError(
            f"only {int(mask.sum())} samples after t_transient={t_transient}; "
            "sample more densely or lower the cutoff"
        )
    return ts.times[mask], ts.prob_atom[mask]


def _sinusoid_design(times: np.ndarray, frequency: float) -> np.ndarray:
    arg = 2.0 * math.pi * frequency * times
    return np.column_stack([np.ones_like(times), np.cos(arg), np.sin(arg)])


def sinusoid_fit_residual(times: np.ndarray, values: np.ndarray, frequency: float) -> float:
    """Max |residual| of the best fit a + b cos(2 pi f t) + c sin(2 pi f t)."""
    design = _sinusoid_design(np.asarray(times, float), frequency)
    coef, *_ = np.linalg.lstsq(design, np.asarray(values, float), rcond=None)
    return float(np.max(np.abs(design @ coef - values)))


def _refine_frequency(times: np.ndarray, values: np.ndarray, f0: float, df: float) -> float:
    # least-squares single-tone refinement around the coarse FFT bin
    def cost(f: float) -> float:
        design = _sinusoid_design(times, f)
        coef, *_ = np.linalg.lstsq(design, values, rcond=None)
        return float(np.sum((design @ coef - values) ** 2))

    res = minimize_scalar(cost, bounds=(max(f0 - df, df * 1e-3), f0 + df), method="bounded",
                          options={"xatol": df * 1e-8})
    return float(res.x)


def extract_oscillation(
    ts: TimeSeries,
    t_transient: float,
    expected_frequency: float | None = None,
) -> OscillationSummary:
    """Amplitude (max - min), dominant frequency, and mean after the transient.

    The frequency is located with the discrete Fourier transform of the
    detrended window and refined by a local single-tone least-squares fit;
    a flat series reports amplitude 0 and no frequency.
    """
    times, values = _window(ts, t_transient, expected_frequency)
    amplitude = float(values.max() - values.min())
    mean = float(values.mean())
    if amplitude < 1e-13 * max(1.0, abs(mean)):
        return OscillationSummary(amplitude=amplitude, frequency=None, mean=mean)
    dt = np.diff(times)
    if not np.allclose(dt, dt[0], rtol=1e-9, atol=0.0):
        raise AnalysisError("frequency extraction requires uniformly spaced samples")
    spec = np.abs(np.fft.rfft(values - mean))
    freqs = np.fft.rfftfreq(len(values), dt[0])
    peak = 1 + int(np.argmax(spec[1:]))
    frequency = _refine_frequency(times, values, float(freqs[peak]), float(freqs[1]))
    return OscillationSummary(amplitude=amplitude, frequency=frequency, mean=mean)


def compare_with_residue(ts: TimeSeries, design: BicDesign, t_transient: float) -> float:
    """Max deviation of prob_atom from the two-pole residue prediction."""
    times, values = _window(ts, t_transient, design.osc_frequency)
    predicted = np.abs(residue_prediction(design, times)) ** 2
    return float(np.max(np.abs(values - predicted)))
