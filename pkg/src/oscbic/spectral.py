"""Closed-form spectral theory of the giant atom on a tight-binding chain.

Covers the momentum-space coupling intensity, the Laplace-domain self-energy
and its derivative on both sides of the band cut, the oscillating-BIC design
(energies, coupling strength, emitter probabilities, non-Markovianity), bound
states outside the band, the two-coupling-point no-go case, and the residue
part of the emitter decay amplitude.

Branch convention: the self-energy has a cut along the band s in [-2iJ, 2iJ].
"upper" denotes the limit from Re(s) > 0 and "lower" from Re(s) < 0; on-band
evaluations default to the upper side. For |Im s| > 2J the two limits are the
two real analytic continuations, the lower one carrying the bound-state root
above +2J.
"""

from __future__ import annotations

import math
import cmath
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import bisect

from .errors import ConfigurationError, NumericalError
from .lattice import UniformGiantAtomLayout

UPPER = "upper"
LOWER = "lower"

_QUAD_LIMIT = 800  # subinterval cap; ~2e5 integrand evaluations at most


def _pick_branch(s: complex, branch: str | None) -> str:
    if branch not in (None, UPPER, LOWER):
        raise ConfigurationError(f"branch must be '{UPPER}' or '{LOWER}', got {branch!r}")
    if s.real > 0:
        return UPPER
    if s.real < 0:
        return LOWER
    if branch is None:
        raise ValueError(
            "Re(s) = 0 lies on the band cut; pass branch='upper' or 'lower' "
            "to select the one-sided limit"
        )
    return branch


def _limit_sqrt(u: complex, s: complex, branch: str) -> complex:
    """sqrt(u) for u = s^2 + (band half-width)^2, as the limit Re(s) -> +-0.

    For Re(s) != 0 this is the principal square root. On the imaginary axis
    beyond the band, u is negative real and the limit from Re(s) = +-0
    selects -i*sign(Om)*sqrt(-u) on the upper side (s = -i*Om) and its
    conjugate on the lower side.
    """
    if s.real != 0.0:
        return cmath.sqrt(u)
    if u.real >= 0.0:
        return cmath.sqrt(complex(u.real, 0.0))
    sign = 1.0 if branch == UPPER else -1.0
    return 1j * sign * math.copysign(1.0, s.imag) * math.sqrt(-u.real)


def g_abs_sq(k, layout: UniformGiantAtomLayout):
    """Momentum-space coupling intensity |G(k)|^2 of a uniform giant atom.

    Equals (rho0^2 / 2 pi) * (M + 2 sum_{r=1}^{M-1} (M - r) cos(k n0 r)).
    Accepts scalar or array k.
    """
    k = np.asarray(k, dtype=float)
    M, n0 = layout.M, layout.n0
    tot = np.full_like(k, float(M))
    for r in range(1, M):
        tot += 2.0 * (M - r) * np.cos(k * n0 * r)
    out = layout.rho0**2 / (2.0 * np.pi) * tot
    return out if out.ndim else float(out)


def zero_coupling_momenta(layout: UniformGiantAtomLayout) -> np.ndarray:
    """All k in (-pi, pi] where the coupling to the continuum vanishes.

    These are k = 2 pi p / (M n0) for integer p not divisible by M, folded
    into the first Brillouin zone. Each returned momentum is verified against
    g_abs_sq to better than 1e-12.
    """
    M, n0 = layout.M, layout.n0
    if M < 2:
        raise ConfigurationError(
            "coupling of a single-point atom never vanishes: |G(k)|^2 is constant"
        )
    ks = []
    for p in range(-M * n0 // 2 - M, M * n0 // 2 + M + 1):
        if p % M == 0:
            continue
        k = 2.0 * math.pi * p / (M * n0)
        k = math.remainder(k, 2.0 * math.pi)
        if k <= -math.pi:
            k += 2.0 * math.pi
        ks.append(k)
    ks = np.unique(np.round(np.sort(ks), decimals=12))
    scale = layout.rho0**2 / (2.0 * np.pi) if layout.rho0 != 0 else 1.0
    bad = [k for k in ks if abs(g_abs_sq(k, layout)) / scale > 1e-12 * M**2]
    if bad:
        raise NumericalError(f"claimed zero-coupling momenta fail verification: {bad}")
    return ks


def _sigma_quadrature(s: complex, layout: UniformGiantAtomLayout, J: float) -> complex:
    if s.real == 0.0:
        raise ValueError(
            "quadrature is undefined on the band cut Re(s) = 0; "
            "use the closed form with an explicit branch"
        )

    def integrand(k: float) -> complex:
        return g_abs_sq(k, layout) / (1j * s - 2.0 * J * math.cos(k))

    # the integrand is even in k; flag the near-singular momentum for quad
    points = []
    c = -s.imag / (2.0 * J)
    if abs(c) < 1.0:
        points = [math.acos(c)]
    re, re_err = quad(lambda k: integrand(k).real, 0.0, math.pi,
                      points=points, limit=_QUAD_LIMIT, epsabs=5e-11, epsrel=1e-12)
    im, im_err = quad(lambda k: integrand(k).imag, 0.0, math.pi,
                      points=points, limit=_QUAD_LIMIT, epsabs=5e-11, epsrel=1e-12)
    if max(re_err, im_err) > 1e-7:
        raise NumericalError(
            f"self-energy quadrature did not converge at s={s}: "
            f"error estimate {max(re_err, im_err):.2e}"
        )
    return 2.0 * (re + 1j * im)


def _sigma_terms(s: complex, layout: UniformGiantAtomLayout, J: float, branch: str):
    """Shared pieces of the closed-form self-energy: sign, sqrt, alpha, lag sum."""
    sgn = -1.0 if branch == UPPER else 1.0
    w = _limit_sqrt(s * s + 4.0 * J * J, s, branch)
    if w == 0:
        raise ValueError(f"band-edge singularity at s={s}: sqrt(s^2 + 4 J^2) vanishes")
    alpha = (sgn * 1j * w + 1j * s) / (2.0 * J)
    M, n0 = layout.M, layout.n0
    tot = complex(M)
    dtot_dalpha = complex(0.0)
    for r in range(1, M):
        tot += 2.0 * (M - r) * alpha ** (n0 * r)
        dtot_dalpha += 2.0 * (M - r) * (n0 * r) * alpha ** (n0 * r - 1)
    return sgn, w, alpha, tot, dtot_dalpha


def self_energy(
    s: complex,
    layout: UniformGiantAtomLayout,
    J: float = 1.0,
    mode: str = "closed_form",
    branch: str | None = None,
) -> complex:
    """Self-energy Sigma(s) of the giant atom.

    ``closed_form`` evaluates the exact expression
    Sigma(s) = -+ i rho0^2 / sqrt(s^2 + 4J^2) * [M + 2 sum (M-r) alpha^(r n0)]
    with the sign and alpha branch tied to sign(Re s); on-band limits
    s = -i*Om +- 0^+ are selected with ``branch``. ``quadrature`` integrates
    the defining momentum integral and requires Re(s) != 0.
    """
    s = complex(s)
    if mode == "quadrature":
        return _sigma_quadrature(s, layout, J)
    if mode != "closed_form":
        raise ConfigurationError(f"mode must be 'closed_form' or 'quadrature', got {mode!r}")
    branch = _pick_branch(s, branch)
    sgn, w, _, tot, _ = _sigma_terms(s, layout, J, branch)
    return sgn * 1j * layout.rho0**2 / w * tot


def self_energy_derivative(
    s: complex,
    layout: UniformGiantAtomLayout,
    J: float = 1.0,
    branch: str | None = None,
) -> complex:
    """d Sigma / d s by analytic differentiation of the closed form."""
    s = complex(s)
    branch = _pick_branch(s, branch)
    sgn, w, alpha, tot, dtot_dalpha = _sigma_terms(s, layout, J, branch)
    dw = s / w
    dalpha = (sgn * 1j * dw + 1j) / (2.0 * J)
    c = sgn * 1j * layout.rho0**2 / w
    dc = -sgn * 1j * layout.rho0**2 * s / w**3
    return dc * tot + c * dtot_dalpha * dalpha


BRANCH_4L = "0 mod 4"
BRANCH_4L2 = "2 mod 4"


@dataclass(frozen=True)
class BicDesign:
    """Analytic design record for an oscillating pair of BICs at +-omega_bic."""

    M: int
    n0: int
    J: float
    omega_bic: float
    rho0: float
    phi_bic_sq: float
    tau: float
    gamma_inv: float
    nm_ratio: float
    osc_frequency: float
    branch: str

    @property
    def period(self) -> float:
        """Period of the emitter-probability oscillation, pi / omega_bic."""
        return math.pi / self.omega_bic

    @property
    def layout(self) -> UniformGiantAtomLayout:
        return UniformGiantAtomLayout(M=self.M, n0=self.n0, rho0=self.rho0)


def _validate_design_args(M: int, n0: int) -> str:
    if M == 2:
        raise ConfigurationError(
            "two coupling points admit at most a single BIC, never an "
            "oscillating pair; use verify_m2_no_oscillation instead"
        )
    if M < 3:
        raise ConfigurationError(f"oscillating BICs require M >= 3, got M={M}")
    if n0 % 2 == 1:
        raise ConfigurationError(
            f"odd spacing n0={n0} gives no BIC pair symmetric about the band centre"
        )
    if n0 % 4 == 0:
        return BRANCH_4L
    if M != 3:
        raise ConfigurationError(
            f"spacing n0 = 2 mod 4 is supported for M=3 only, got M={M}"
        )
    if n0 < 6:
        raise ConfigurationError(f"the 2-mod-4 design needs n0 >= 6, got n0={n0}")
    return BRANCH_4L2


def _emitter_probability_closed_form(M: int, n0: int) -> float:
    """Emitter probability of each designed BIC on the 4l spacing branch.

    The closed form is complex-valued notation for a real quantity; it is
    evaluated in complex arithmetic and the imaginary residue checked.
    """
    m, n = float(M), float(n0)
    num = (
        1j
        * cmath.exp(-4j * math.pi / m)
        * (1.0 + cmath.exp(2j * math.pi / m))
        * (-1.0 + (1j * cmath.exp(2j * math.pi / (m * n))) ** n0) ** 3
        / math.sin(math.pi / m) ** 2
        * math.cos(2.0 * math.pi / (m * n)) ** 2
    )
    den = 4.0 * (
        2.0 * n * math.sin(4.0 * math.pi / (m * n))
        + math.sin(2.0 * math.pi * (n - 2.0) / (m * n))
        + math.sin(2.0 * math.pi * (n + 2.0) / (m * n))
    )
    val = num / den
    if abs(val.imag) > 1e-8:
        raise NumericalError(
            f"emitter probability came out complex (imag {val.imag:.2e}) at M={M}, n0={n0}"
        )
    return val.real


def _emitter_probability_from_residue(M: int, n0: int, omega: float, rho0: float) -> float:
    layout = UniformGiantAtomLayout(M=M, n0=n0, rho0=rho0)
    val = 1.0 / (1.0 + 1j * self_energy_derivative(-1j * omega, layout, J=1.0, branch=UPPER))
    if abs(val.imag) > 1e-8:
        raise NumericalError(
            f"BIC residue came out complex (imag {val.imag:.2e}) at M={M}, n0={n0}"
        )
    return val.real


def emitter_probability_bic(M: int, n0: int) -> float:
    """|phi_a|^2 of each BIC in the designed pair (dimensionless)."""
    branch = _validate_design_args(M, n0)
    if branch == BRANCH_4L:
        return _emitter_probability_closed_form(M, n0)
    omega = 2.0 * math.sin(5.0 * math.pi / (3.0 * n0))
    rho0 = math.sqrt(2.0 / math.sqrt(3.0) * math.sin(10.0 * math.pi / (3.0 * n0)))
    return _emitter_probability_from_residue(M, n0, omega, rho0)


def emitter_probability_bic_asymptotic(
    M: int, n0: int | None = None, branch: str = BRANCH_4L
) -> float:
    """Large-n0 limit of the BIC emitter probability, with optional 1/n0^2 term.

    On the 4l branch this is 1 / (1 + (4 pi / M) csc(2 pi / M)) plus
    A / n0^2; the 2-mod-4 branch (M=3) saturates at 9 / (9 + 20 sqrt(3) pi).
    """
    if branch == BRANCH_4L2:
        if M != 3:
            raise ConfigurationError("the 2-mod-4 branch exists for M=3 only")
        return 9.0 / (9.0 + 20.0 * math.sqrt(3.0) * math.pi)
    if branch != BRANCH_4L:
        raise ConfigurationError(f"unknown spacing branch {branch!r}")
    if M < 3:
        raise ConfigurationError(f"oscillating BICs require M >= 3, got M={M}")
    lead = 1.0 / (1.0 + (4.0 * math.pi / M) / math.sin(2.0 * math.pi / M))
    if n0 is None:
        return lead
    sin_m = math.sin(2.0 * math.pi / M)
    a = (
        4.0 * math.pi**2 * sin_m * (3.0 * M * sin_m - 4.0 * math.pi)
        / (3.0 * M * (M * sin_m + 4.0 * math.pi) ** 2)
    )
    return lead + a / n0**2


def non_markovianity(M: int, n0: int) -> float:
    """Delay-to-relaxation ratio tau / Gamma^-1 = M^2 n0 sin(4pi/(M n0)) tan(pi/M)."""
    branch = _validate_design_args(M, n0)
    if branch != BRANCH_4L:
        raise ConfigurationError("non-Markovianity ratio is defined on the 4l branch")
    return M * M * n0 * math.sin(4.0 * math.pi / (M * n0)) * math.tan(math.pi / M)


def non_markovianity_asymptotic(M: int, n0: int | None = None) -> float:
    """Large-n0 expansion 4 M pi tan(pi/M) - (32 pi^3 tan(pi/M) / 3M) / n0^2."""
    lead = 4.0 * M * math.pi * math.tan(math.pi / M)
    if n0 is None:
        return lead
    return lead - 32.0 * math.pi**3 * math.tan(math.pi / M) / (3.0 * M) / n0**2


def design_oscillating_bic(M: int, n0: int, J: float = 1.0) -> BicDesign:
    """Design an oscillating BIC pair: energies +-omega_bic and coupling rho0.

    Valid for M >= 3 with even n0 and the atom tuned to the band centre
    (omega_a = 0). Even spacings split into two classes: n0 = 4l places the
    pair closest to the band centre (optimal), while n0 = 4l + 2 (supported
    for M = 3) yields the farther, lower-weight pair.
    """
    if not (math.isfinite(J) and J > 0):
        raise ConfigurationError(f"hopping J must be a positive real, got {J}")
    branch = _validate_design_args(M, n0)
    if branch == BRANCH_4L:
        omega = 2.0 * J * math.sin(2.0 * math.pi / (M * n0))
        rho0 = J * math.sqrt(
            (2.0 / M) * math.tan(math.pi / M) * math.sin(4.0 * math.pi / (M * n0))
        )
        phi = _emitter_probability_closed_form(M, n0)
    else:
        omega = 2.0 * J * math.sin(5.0 * math.pi / (3.0 * n0))
        rho0 = math.sqrt(2.0 * J * J / math.sqrt(3.0) * math.sin(10.0 * math.pi / (3.0 * n0)))
        phi = _emitter_probability_from_residue(M, n0, omega / J, rho0 / J)
    gamma = M * M * rho0 * rho0 / J
    tau = M * n0 / (2.0 * J)
    return BicDesign(
        M=M,
        n0=n0,
        J=J,
        omega_bic=omega,
        rho0=rho0,
        phi_bic_sq=phi,
        tau=tau,
        gamma_inv=1.0 / gamma,
        nm_ratio=tau * gamma,
        osc_frequency=omega / math.pi,
        branch=branch,
    )


@dataclass(frozen=True)
class BocPrediction:
    """Exact and asymptotic data for the bound-state pair outside the band."""

    energies: tuple[float, float]
    energies_asymptotic: tuple[float, float]
    emitter_probability: float
    emitter_probability_asymptotic: float


def predict_boc(M: int, n0: int, J: float = 1.0) -> BocPrediction:
    """Locate the bound states outside the band for the designed coupling.

    The positive-energy root solves Om = Re Sigma(-i Om) on the lower-branch
    continuation above +2J by bracketed bisection to 1e-12 * J; the negative
    root follows by band-centre symmetry. Emitter probabilities come from the
    residue formula at the root.
    """
    branch = _validate_design_args(M, n0)
    if branch != BRANCH_4L:
        raise ConfigurationError("bound-state prediction expects the 4l design branch")
    design = design_oscillating_bic(M, n0, J)
    layout = design.layout
    bound = 2.0 * math.pi**2 * math.tan(math.pi / M) ** 2 / (M**2 * n0**2)

    def gap(om: float) -> float:
        sig = self_energy(-1j * om, layout, J=J, branch=LOWER)
        if abs(sig.imag) > 1e-9 * J:
            raise NumericalError(f"self-energy not real outside the band at Om={om}")
        return om - sig.real

    lo = 2.0 * J * (1.0 + 1e-14)
    hi = 2.0 * J * (1.0 + 100.0 * bound)
    if not gap(lo) < 0.0 < gap(hi):
        raise NumericalError(
            f"no sign change for the outside-band root in [{lo}, {hi}] "
            f"(M={M}, n0={n0}); gap endpoints {gap(lo):.3e}, {gap(hi):.3e}"
        )
    root = bisect(gap, lo, hi, xtol=1e-12 * J)
    weight = 1.0 / (
        1.0 + 1j * self_energy_derivative(-1j * root, layout, J=J, branch=LOWER)
    )
    if abs(weight.imag) > 1e-8:
        raise NumericalError(f"outside-band residue came out complex: {weight}")
    asym = 2.0 * J * (1.0 + bound)
    asym_w = 4.0 * math.pi**2 * math.tan(math.pi / M) ** 2 / (M**2 * n0**2)
    return BocPrediction(
        energies=(root, -root),
        energies_asymptotic=(asym, -asym),
        emitter_probability=weight.real,
        emitter_probability_asymptotic=asym_w,
    )


@dataclass(frozen=True)
class M2BicReport:
    bic_count: int
    bic_energy: float | None


def verify_m2_no_oscillation(n0: int, omega_a: float, J: float = 1.0) -> M2BicReport:
    """Two coupling points: at most one BIC, at Om = omega_a, never a pair.

    A BIC exists iff omega_a coincides with 2J cos(pi (2l+1) / n0) for some
    integer l (to within 1e-9 * J); the emitter probability then sits at a
    single in-band energy and no oscillating superposition is possible.
    """
    if n0 < 1:
        raise ConfigurationError(f"spacing must be >= 1, got n0={n0}")
    for ell in range(n0):
        candidate = 2.0 * J * math.cos(math.pi * (2 * ell + 1) / n0)
        if abs(omega_a - candidate) <= 1e-9 * J:
            return M2BicReport(bic_count=1, bic_energy=omega_a)
    return M2BicReport(bic_count=0, bic_energy=None)


def residue_prediction(design: BicDesign, t):
    """BIC-pole part of the emitter amplitude, sum_j w_j exp(-i Om_j t).

    The residue weights w_j = 1 / (1 + i Sigma'(-i Om_j)) are real and equal
    for the symmetric pair, so |psi_a(t)|^2 oscillates at omega_bic / pi.
    Accepts scalar or array t and returns complex values of the same shape.
    """
    layout = design.layout
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape, dtype=complex)
    for omega in (design.omega_bic, -design.omega_bic):
        w = 1.0 / (
            1.0 + 1j * self_energy_derivative(-1j * omega, layout, J=design.J, branch=UPPER)
        )
        out += w * np.exp(-1j * omega * t)
    return out if out.ndim else complex(out)


@dataclass(frozen=True)
class ContinuousWaveguideComparison:
    omega_lattice: float
    omega_continuous: float
    ratio: float


def continuous_waveguide_comparison(M: int, n0: int, J: float = 1.0) -> ContinuousWaveguideComparison:
    """Compare the lattice BIC energy with its linear-dispersion counterpart.

    With gamma = rho0^2 / J, a continuous waveguide places the pair at
    (1/2) M gamma cot(pi/M); the lattice value exceeds it by exactly
    sec(2 pi / (M n0)).
    """
    design = design_oscillating_bic(M, n0, J)
    gamma = design.rho0**2 / J
    omega_continuous = 0.5 * M * gamma / math.tan(math.pi / M)
    ratio = 1.0 / math.cos(2.0 * math.pi / (M * n0))
    return ContinuousWaveguideComparison(
        omega_lattice=design.omega_bic,
        omega_continuous=omega_continuous,
        ratio=ratio,
    )
