"""Real-space BIC eigenstates and the confined superposition with no atom weight.

The designed pair of in-band bound states is assembled site by site from the
lattice resolvent integral I_n(s) = int dk exp(i k n) / (i s - cos k). For the
design momenta the resulting amplitudes cancel identically outside the
outermost coupling points, so the states are exact eigenvectors of the finite
open chain whenever the coupling block fits inside it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, NumericalError
from .dynamics import SingleExcitationState
from .lattice import LatticeConfig
from .spectral import UPPER, BicDesign, _limit_sqrt, _pick_branch


def i_n_integral(n: int, s: complex, branch: str | None = None) -> complex:
    """Closed form of int_{-pi}^{pi} dk exp(i k n) / (i s - cos k).

    Evaluates (-+ 2 pi i / sqrt(s^2 + 1)) * (i s -+ i sqrt(s^2 + 1))^|n| with
    the upper (Re s > 0) or lower (Re s < 0) sign; on-band limits s = -i*Om
    with |Om| < 1 are taken with an explicit ``branch``. Both the prefactor
    and the root inside the power flip sign with the branch, which keeps the
    selected pole inside the unit circle on either side of the cut.
    """
    s = complex(s)
    branch = _pick_branch(s, branch)
    sgn = -1.0 if branch == UPPER else 1.0
    w = _limit_sqrt(s * s + 1.0, s, branch)
    if w == 0:
        raise ValueError(f"band-edge singularity at s={s}: sqrt(s^2 + 1) vanishes")
    return (sgn * 2j * math.pi / w) * (1j * s + sgn * 1j * w) ** abs(n)


@dataclass(frozen=True)
class BicPairStates:
    """The two designed bound states in the continuum, with a common real
    positive atom amplitude."""

    plus: SingleExcitationState
    minus: SingleExcitationState
    phi_a: float


@dataclass(frozen=True)
class PStateEntry:
    """One row of the initialization recipe: a site that must be excited."""

    site: int
    re: float
    im: float
    amplitude: float
    phase: float


def _layout_from_config(design: BicDesign, config: LatticeConfig) -> tuple[int, ...]:
    sites = sorted(config.coupling_sites)
    if len(sites) != design.M:
        raise ConfigurationError(
            f"config has {len(sites)} coupling points but the design expects {design.M}"
        )
    spacings = {b - a for a, b in zip(sites, sites[1:])}
    if spacings and spacings != {design.n0}:
        raise ConfigurationError(
            f"coupling sites {sites} are not uniformly spaced by n0={design.n0}"
        )
    strengths = {g for _, g in config.couplings}
    for g in strengths:
        if abs(g - design.rho0) > 1e-9 * design.J:
            raise ConfigurationError(
                f"coupling strength {g} does not match the design rho0={design.rho0}"
            )
    if config.J != design.J:
        raise ConfigurationError(f"config J={config.J} differs from design J={design.J}")
    if config.omega_a != 0.0:
        raise ConfigurationError("the BIC pair is designed for omega_a = 0")
    return tuple(sites)


def _site_amplitudes(design: BicDesign, config: LatticeConfig, omega: float) -> np.ndarray:
    coupling_sites = _layout_from_config(design, config)
    phi_a = math.sqrt(design.phi_bic_sq)
    s = -1j * omega / (2.0 * design.J)
    branch = UPPER
    sgn = -1.0
    w = _limit_sqrt(s * s + 1.0, s, branch)
    z = 1j * s + sgn * 1j * w
    pref = sgn * 2j * math.pi / w
    sites = np.arange(1, config.N + 1)
    total = np.zeros(config.N, dtype=complex)
    for nl in coupling_sites:
        total += z ** np.abs(sites - nl)
    scale = design.rho0 * phi_a / (2.0 * math.pi) * pref / (2.0 * design.J)
    return scale * total


def _m3_closed_form(design: BicDesign, n_rel: int, phi_a: float) -> complex:
    """Piecewise closed form for the + state at M=3, n_rel counted from the
    first coupling point."""
    n0 = design.n0
    if not 0 <= n_rel <= 2 * n0:
        return 0.0 + 0.0j
    phase = 2.0 * math.pi / (3.0 * n0)
    if n_rel <= n0:
        val = (-1.0) ** n_rel * cmath.exp(1j * phase * n_rel) - cmath.exp(-1j * phase * n_rel)
    else:
        arg = 2.0 * math.pi / 3.0 * (n_rel / n0 - 2.0)
        val = (-1.0) ** (n_rel + 1) * cmath.exp(1j * arg) + cmath.exp(-1j * arg)
    c = -(1j ** ((n_rel + 1) % 4)) * phi_a * design.rho0 / (
        2.0 * design.J * math.cos(2.0 * math.pi / (3.0 * design.n0))
    )
    return c * val


def bic_eigenstate_real_space(
    design: BicDesign, sign: int, config: LatticeConfig
) -> SingleExcitationState:
    """Assemble the BIC at sign * omega_bic on the finite lattice.

    The atom amplitude is fixed real positive; the state is normalized
    numerically on the finite chain. For M=3 the resolvent-sum construction
    is cross-checked against the piecewise closed form.
    """
    if sign not in (+1, -1):
        raise ConfigurationError(f"sign must be +1 or -1, got {sign}")
    omega = sign * design.omega_bic
    amps = _site_amplitudes(design, config, omega)
    phi_a = math.sqrt(design.phi_bic_sq)
    if design.M == 3 and sign == +1:
        offset = min(config.coupling_sites)
        worst = 0.0
        for n_rel in range(-2, 2 * design.n0 + 3):
            site = offset + n_rel
            if not 1 <= site <= config.N:
                continue
            worst = max(worst, abs(amps[site - 1] - _m3_closed_form(design, n_rel, phi_a)))
        if worst > 1e-6:
            raise NumericalError(
                f"resolvent-sum amplitudes disagree with the M=3 closed form by {worst:.3e}"
            )
    vec = np.concatenate(([phi_a + 0.0j], amps))
    vec /= np.linalg.norm(vec)
    if vec[0].real < 0:
        vec = -vec
    return SingleExcitationState.from_vector(vec)


def bic_pair(design: BicDesign, config: LatticeConfig) -> BicPairStates:
    """Both designed BICs on the finite lattice, phase-locked to a common
    real positive atom amplitude."""
    plus = bic_eigenstate_real_space(design, +1, config)
    minus = bic_eigenstate_real_space(design, -1, config)
    return BicPairStates(plus=plus, minus=minus, phi_a=float(plus.psi_a.real))


def build_p_state(
    design: BicDesign, config: LatticeConfig, amplitude_floor: float = 1e-10
) -> tuple[SingleExcitationState, list[PStateEntry]]:
    """The equal-weight difference of the BIC pair, plus its site recipe.

    The returned state has no atom amplitude and support confined between the
    outermost coupling points; the table lists every site whose amplitude
    exceeds ``amplitude_floor``, which is the pulse-shaping recipe needed to
    prepare the state.
    """
    pair = bic_pair(design, config)
    vec = (pair.plus.as_vector() - pair.minus.as_vector()) / math.sqrt(2.0)
    if abs(vec[0]) > 1e-10:
        raise NumericalError(f"atom amplitude of the confined state is {vec[0]!r}, expected 0")
    vec[0] = 0.0
    state = SingleExcitationState.from_vector(vec)
    table = [
        PStateEntry(
            site=site,
            re=float(amp.real),
            im=float(amp.imag),
            amplitude=float(abs(amp)),
            phase=float(cmath.phase(amp)),
        )
        for site, amp in enumerate(vec[1:], start=1)
        if abs(amp) > amplitude_floor
    ]
    return state, table
