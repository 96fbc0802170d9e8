"""
Boundary-condition route to the extended Hamiltonian.

A critical channel (0 < |j| < 1) admits the irregular solution J_{-|j|} with
an admixture mu_nu fixed by the extension parameter nu. From it follow the
extended phase shift, the unitary S-matrix element, the bound state for
nu < 0 and the radial wavefunction. The Friedrichs extension (nu = infinity)
gives mu = 0 and the ordinary Aharonov-Bohm results on the cone.

Units: nu carries length^(-2|j|), k and kappa are reciprocal lengths.
"""
import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from scipy import special

from error_handling import DegenerateChannelError, PhysicsDomainError, PoleError
from model import PhysicalConfig, make_channel
from specfun import bessel_j, gamma

logger = logging.getLogger(__name__)

# |j| below this is the logarithmic (j = 0) case, only Friedrichs is offered there
DEGENERATE_J = 1e-12
_POLE_RTOL = 4.0 * 2.220446049250313e-16


class MethodTag(Enum):
    """Where a bound state came from."""
    BG = "BG"
    KS = "KS"
    SHELL = "SHELL"


@dataclass(frozen=True)
class ExtensionParam:
    """
    One-parameter family of self-adjoint extensions.

    nu is None for the Friedrichs extension (nu = infinity). Any finite real nu
    is admitted; bound states additionally need nu < 0.
    """
    nu: Optional[float] = None

    def __post_init__(self):
        if self.nu is not None and not math.isfinite(self.nu):
            raise PhysicsDomainError(f"finite extension needs a finite nu, got {self.nu}")

    @classmethod
    def friedrichs(cls) -> "ExtensionParam":
        return cls(None)

    @classmethod
    def finite(cls, nu: float) -> "ExtensionParam":
        return cls(float(nu))

    @property
    def is_friedrichs(self) -> bool:
        return self.nu is None

    @property
    def scattering_length(self) -> float:
        """1/nu; zero for Friedrichs, infinite at nu = 0."""
        if self.nu is None:
            return 0.0
        if self.nu == 0.0:
            return math.inf
        return 1.0 / self.nu

    def __str__(self):
        return "friedrichs" if self.nu is None else f"nu={self.nu!r}"


@dataclass(frozen=True)
class ScatteringEntry:
    """Per-channel phase shifts and S-matrix element."""
    m: int
    j: float
    delta_reg: float
    delta_nu: float
    s_element: complex
    critical: bool = False


@dataclass(frozen=True)
class BoundState:
    """Bound state with decay constant kappa_b and energy -kappa_b^2/(2M)."""
    kappa_b: float
    energy: float
    method_tag: MethodTag
    mass: float = 1.0


@dataclass(frozen=True)
class PartialWaveResult:
    """Truncated partial-wave sum and the size of its outermost terms."""
    psi: complex
    tail_estimate: float
    m_max: int


def _channel_order(j: float) -> float:
    aj = abs(j)
    if aj < DEGENERATE_J:
        raise DegenerateChannelError(
            f"|j| = {aj} is the logarithmic case; only the Friedrichs extension is available"
        )
    if not aj < 1.0:
        raise PhysicsDomainError(f"violated 0 < |j| < 1: j={j}")
    return aj


def _check_positive(name: str, value: float):
    if not value > 0.0:
        raise PhysicsDomainError(f"violated {name} > 0: {name}={value}")


def mu_nu(ext: ExtensionParam, j: float, k: float) -> float:
    """
    Admixture of the irregular solution.

    mu = k^{2|j|} G- sin(|j| pi) / (4^{|j|} G+ nu + k^{2|j|} G- cos(|j| pi)),
    with G-+ = Gamma(1 -+ |j|); zero for the Friedrichs extension.

    Raises:
        PoleError: When the denominator vanishes (nu < 0 at one k)
    """
    _check_positive("k", k)
    if ext.is_friedrichs:
        return 0.0
    aj = _channel_order(j)
    power = k ** (2.0 * aj) * gamma(1.0 - aj)
    scaled_nu = 4.0 ** aj * gamma(1.0 + aj) * ext.nu
    oscillating = power * math.cos(aj * math.pi)
    denominator = scaled_nu + oscillating
    if abs(denominator) <= _POLE_RTOL * (abs(scaled_nu) + abs(oscillating)):
        raise PoleError(f"mu_nu pole at k={k} for {ext}, |j|={aj}")
    return power * math.sin(aj * math.pi) / denominator


def continued_denominator(nu: float, j: float, k: complex) -> complex:
    """
    Denominator of 1 - i mu_nu, cleared of fractions, at complex k.

    4^{|j|} G+ nu + k^{2|j|} G- e^{-i |j| pi}; on k = i kappa (principal
    branch) it is real and vanishes at the bound state.
    """
    aj = _channel_order(j)
    power = complex(k) ** (2.0 * aj)
    return 4.0 ** aj * gamma(1.0 + aj) * nu + power * gamma(1.0 - aj) * cmath.exp(-1j * aj * math.pi)


def phase_shift_regular(m: int, j: float) -> float:
    """delta_m = (pi/2)(|m| - |j|)."""
    return 0.5 * math.pi * (abs(m) - abs(j))


def phase_shift_extended(m: int, j: float, ext: ExtensionParam, k: float) -> float:
    """delta_m^nu = delta_m + arctan(mu_nu), principal branch."""
    delta = phase_shift_regular(m, j)
    if ext.is_friedrichs:
        return delta
    return delta + math.atan(mu_nu(ext, j, k))


def s_matrix(m: int, j: float, ext: ExtensionParam, k: float) -> complex:
    """S = e^{2 i delta_m} (1 + i mu)/(1 - i mu); unimodular for real mu."""
    delta = phase_shift_regular(m, j)
    rotation = cmath.exp(2j * delta)
    if ext.is_friedrichs:
        return rotation
    mu = mu_nu(ext, j, k)
    return rotation * (1.0 + 1j * mu) / (1.0 - 1j * mu)


def s_matrix_from_bound(m: int, j: float, kappa_b: float, k: float, unphased: bool = False) -> complex:
    """
    S-matrix element written in terms of the bound-state decay constant.

    With x = (kappa_b/k)^{2|j|} and w = e^{i pi |j|},
    S = e^{2 i delta_m} (w^2 - x w)/(1 - x w), which equals s_matrix for the nu
    that produces kappa_b and is unimodular for every real k.

    unphased=True evaluates e^{2 i delta_m} (w^2 - x)/(1 - x) instead; that
    form is not unimodular and has a pole at k = kappa_b.

    Raises:
        PoleError: For unphased=True at k = kappa_b
    """
    _check_positive("kappa_b", kappa_b)
    _check_positive("k", k)
    aj = _channel_order(j)
    rotation = cmath.exp(2j * phase_shift_regular(m, j))
    x = (kappa_b / k) ** (2.0 * aj)
    w = cmath.exp(1j * math.pi * aj)
    if unphased:
        if abs(1.0 - x) <= _POLE_RTOL:
            raise PoleError(f"unphased bound-state form is singular at k = kappa_b = {kappa_b}")
        return rotation * (w * w - x) / (1.0 - x)
    return rotation * (w * w - x * w) / (1.0 - x * w)


def bound_state_bg(ext: ExtensionParam, j: float, mass: float) -> BoundState:
    """
    Bound state of the extension nu < 0.

    E_b = -(2/M) [-nu Gamma(1+|j|)/Gamma(1-|j|)]^{1/|j|}, kappa_b = sqrt(2 M |E_b|).

    Raises:
        PhysicsDomainError: For Friedrichs, nu >= 0 or |j| outside (0, 1)
    """
    _check_positive("mass", mass)
    if ext.is_friedrichs or not ext.nu < 0.0:
        raise PhysicsDomainError(f"bound state needs nu < 0, got {ext}")
    aj = _channel_order(j)
    base = -ext.nu * gamma(1.0 + aj) / gamma(1.0 - aj)
    energy = -(2.0 / mass) * base ** (1.0 / aj)
    kappa = math.sqrt(2.0 * mass * abs(energy))
    return BoundState(kappa_b=kappa, energy=energy, method_tag=MethodTag.BG, mass=mass)


def _regular_bessel(order: float, x: float) -> float:
    if order < 1.0:
        return bessel_j(order, x)
    # orders >= 1 only occur in non-critical channels
    return float(special.jv(order, x))


def radial_wavefunction(m: int, j: float, ext: ExtensionParam, k: float, r: float) -> complex:
    """
    psi_m(r) = a_m [J_{|j|}(kr) - mu_nu J_{-|j|}(kr)], a_m = e^{-i |j| pi / 2}.

    The Friedrichs extension keeps the regular term only, for any j.
    """
    _check_positive("k", k)
    _check_positive("r", r)
    aj = abs(j)
    amplitude = cmath.exp(-0.5j * aj * math.pi)
    regular = _regular_bessel(aj, k * r)
    if ext.is_friedrichs:
        return amplitude * regular
    mu = mu_nu(ext, j, k)
    return amplitude * (regular - mu * bessel_j(-aj, k * r))


def partial_wave_sum(cfg: PhysicalConfig, ext: ExtensionParam, k: float, r: float,
                     varphi: float, m_max: int) -> PartialWaveResult:
    """
    Truncated sum over m in [-m_max, m_max] of psi_m(r) e^{i m varphi}.

    Critical channels use the extension; all others the regular solution. A
    degenerate critical channel (j = 0) falls back to the regular solution.
    The tail estimate is |term(m_max)| + |term(-m_max)|.
    """
    if m_max < 1:
        raise PhysicsDomainError(f"violated m_max >= 1: m_max={m_max}")
    friedrichs = ExtensionParam.friedrichs()
    total = 0j
    edge = 0.0
    for m in range(-m_max, m_max + 1):
        channel = make_channel(cfg, m)
        chosen = ext if channel.in_critical_subspace else friedrichs
        if not chosen.is_friedrichs and channel.abs_j < DEGENERATE_J:
            logger.warning(f"channel m={m} has j=0; using the regular solution")
            chosen = friedrichs
        term = radial_wavefunction(m, channel.j, chosen, k, r) * cmath.exp(1j * m * varphi)
        total += term
        if abs(m) == m_max:
            edge += abs(term)
    return PartialWaveResult(psi=total, tail_estimate=edge, m_max=m_max)


def scatter_channel(cfg: PhysicalConfig, m: int, ext: ExtensionParam, k: float) -> ScatteringEntry:
    """Scattering data of one channel; non-critical channels are Friedrichs."""
    channel = make_channel(cfg, m)
    chosen = ext if channel.in_critical_subspace else ExtensionParam.friedrichs()
    return ScatteringEntry(
        m=m,
        j=channel.j,
        delta_reg=phase_shift_regular(m, channel.j),
        delta_nu=phase_shift_extended(m, channel.j, chosen, k),
        s_element=s_matrix(m, channel.j, chosen, k),
        critical=channel.in_critical_subspace,
    )
