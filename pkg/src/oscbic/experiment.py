"""Mapping a BIC design onto a photonic waveguide-array realization.

Propagation distance along the waveguides plays the role of time (z = c t),
so the dimensionless design translates into couplings per millimetre once the
available array length and the desired number of oscillation periods are
fixed. Next-nearest-neighbour imperfections enter through a single measured
ratio rho1 / rho0 = J' / J.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import ConfigurationError
from .lattice import LatticeConfig
from .spectral import BicDesign


@dataclass(frozen=True)
class WaveguidePlan:
    """Physical parameters of one waveguide-array realization of a design."""

    J_physical: float  # 1/mm
    rho0_physical: float  # 1/mm
    z_max_mm: float
    n_periods: int
    imperfection_ratio: float
    period_dimensionless: float  # oscillation period in units of 1/J

    def __post_init__(self) -> None:
        if not 0.0 <= self.imperfection_ratio < 1.0:
            raise ConfigurationError(
                f"imperfection ratio must lie in [0, 1), got {self.imperfection_ratio}"
            )

    @property
    def jz_horizon(self) -> float:
        """Dimensionless propagation horizon J * z_max = n_periods * T."""
        return self.J_physical * self.z_max_mm

    @property
    def coupling_ratio(self) -> float:
        """rho0 / J recovered from the physical couplings."""
        return self.rho0_physical / self.J_physical

    @property
    def omega_bic_over_j(self) -> float:
        """omega_bic / J recovered from the plan's period."""
        return math.pi / self.period_dimensionless


def waveguide_parameters(
    design: BicDesign,
    z_max_mm: float,
    n_periods: int = 5,
    imperfection_ratio: float = 0.0,
) -> WaveguidePlan:
    """Fit n_periods oscillation periods into an array of length z_max_mm."""
    if z_max_mm <= 0:
        raise ConfigurationError(f"array length must be positive, got {z_max_mm} mm")
    if n_periods < 1:
        raise ConfigurationError(f"need at least one period, got {n_periods}")
    period = design.period * design.J  # dimensionless, pi * J / omega_bic
    j_physical = n_periods * period / z_max_mm
    return WaveguidePlan(
        J_physical=j_physical,
        rho0_physical=(design.rho0 / design.J) * j_physical,
        z_max_mm=z_max_mm,
        n_periods=n_periods,
        imperfection_ratio=imperfection_ratio,
        period_dimensionless=period,
    )


def with_imperfections(config: LatticeConfig, ratio: float = 0.0286) -> LatticeConfig:
    """Inject next-nearest-neighbour terms rho1 = ratio * rho0, J' = ratio * J.

    Requires an expanded uniform layout; ratio 0 returns the ideal system.
    Coupling points on the chain boundary are rejected because the injected
    terms need both neighbours.
    """
    if not 0.0 <= ratio < 1.0:
        raise ConfigurationError(f"imperfection ratio must lie in [0, 1), got {ratio}")
    strengths = {g for _, g in config.couplings}
    if len(strengths) != 1:
        raise ConfigurationError(
            "imperfection injection needs a uniform coupling strength, "
            f"got {sorted(strengths)}"
        )
    (rho0,) = strengths
    return replace(config, rho1=ratio * rho0, Jprime=ratio * config.J)
