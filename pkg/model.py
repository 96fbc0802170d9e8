"""
Kinematics of the radial problem on the cone.

Physical configuration, effective angular momentum j, spin-flux coupling
lambda, flux decomposition phi = N + beta, the planes pi_-/pi_+ that delimit the
region where the radial operator is not self-adjoint, and the enumeration of
the affected angular-momentum channels.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

from error_handling import PhysicsDomainError

logger = logging.getLogger(__name__)

ANOMALOUS_MOMENT = 0.00115965218091
DEFAULT_G_FACTOR = 2.0 * (1.0 + ANOMALOUS_MOMENT)

# |j| within this distance of 1 counts as a boundary channel, not a critical one
BOUNDARY_TOL = 1e-12

# channel offsets q (m = -N + q) scanned for beta windows; wide enough for 2*alpha <= 2
_OFFSETS = range(-3, 4)


class Effect(Enum):
    """Which family of planes: Aharonov-Bohm or Aharonov-Casher."""
    AB = "ab"
    AC = "ac"


@dataclass(frozen=True)
class FluxParts:
    """phi = n_integer + beta with 0 <= beta < 1."""
    n_integer: int
    beta: float


@dataclass(frozen=True)
class PhysicalConfig:
    """
    Cone parameter, flux, spin projection, mass and g-factor.

    Natural units hbar = c = 1; mass is a reciprocal length.
    """
    alpha: float
    phi: float
    s: int
    mass: float = 1.0
    g_factor: float = DEFAULT_G_FACTOR

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise PhysicsDomainError(f"violated 0 < alpha <= 1: alpha={self.alpha}")
        if not math.isfinite(self.phi):
            raise PhysicsDomainError(f"phi must be finite, got {self.phi}")
        if self.s not in (-1, 1):
            raise PhysicsDomainError(f"violated s in {{-1, +1}}: s={self.s}")
        if not self.mass > 0.0:
            raise PhysicsDomainError(f"violated mass > 0: mass={self.mass}")
        if not self.g_factor > 0.0:
            raise PhysicsDomainError(f"violated g_factor > 0: g_factor={self.g_factor}")

    def flux_parts(self) -> FluxParts:
        return flux_decompose(self.phi)


@dataclass(frozen=True)
class Channel:
    """One partial wave: m with its effective j and coupling lambda."""
    m: int
    j: float
    lam: float
    in_critical_subspace: bool

    @property
    def abs_j(self) -> float:
        return abs(self.j)


@dataclass(frozen=True)
class ChannelWindow:
    """Open beta interval (clipped to [0, 1)) on which m lies strictly between the planes."""
    m: int
    offset: int
    beta_lo: float
    beta_hi: float


@dataclass(frozen=True)
class AlphaMinReport:
    """
    Infimum of alpha for which both m = -N and m = -N-1 are affected.

    value is an infimum because the defining inequalities are strict; feasible
    is False when no alpha in (0, 1] works (only possible at fixed beta).
    """
    value: float
    s: int
    beta: Optional[float]
    binding_offset: Optional[int]
    binding_plane: Optional[str]
    feasible: bool
    is_infimum: bool = True


def effective_j(cfg: PhysicalConfig, m: int) -> float:
    """Effective angular momentum j = (m + phi)/alpha - (1 - alpha) s / (2 alpha)."""
    return (m + cfg.phi) / cfg.alpha - (1.0 - cfg.alpha) * cfg.s / (2.0 * cfg.alpha)


def coupling_lambda(cfg: PhysicalConfig) -> float:
    """Spin-flux contact coupling lambda = g_e phi s / (2 alpha)."""
    return cfg.g_factor * cfg.phi * cfg.s / (2.0 * cfg.alpha)


def flux_decompose(phi: float) -> FluxParts:
    """
    Split the flux into integer and fractional parts, N = floor(phi).

    Args:
        phi: Flux in units of the flux quantum

    Returns:
        FluxParts with 0 <= beta < 1, also for negative phi
    """
    n_integer = math.floor(phi)
    beta = phi - n_integer
    if beta >= 1.0:
        # phi just below an integer can round beta up to 1
        n_integer += 1
        beta = 0.0
    return FluxParts(n_integer=int(n_integer), beta=beta)


def _spin_shift(alpha: float, s: int) -> float:
    return (1.0 - alpha) * s / 2.0


def planes_ab(alpha: float, beta: float, s: int, n_integer: int) -> Tuple[float, float]:
    """
    Aharonov-Bohm planes pi_-/pi_+ = -+alpha - (N + beta) + (1 - alpha) s / 2.

    Returns:
        (pi_minus, pi_plus) with pi_minus < pi_plus
    """
    centre = -(n_integer + beta) + _spin_shift(alpha, s)
    return centre - alpha, centre + alpha


def planes_ac(alpha: float, beta: float, s: int, n_integer: int) -> Tuple[float, float]:
    """Aharonov-Casher planes pi_-/pi_+ = -+alpha - s (N + beta) + (1 - alpha) s / 2."""
    centre = -s * (n_integer + beta) + _spin_shift(alpha, s)
    return centre - alpha, centre + alpha


def planes(effect: Effect, alpha: float, beta: float, s: int, n_integer: int) -> Tuple[float, float]:
    if effect is Effect.AC:
        return planes_ac(alpha, beta, s, n_integer)
    return planes_ab(alpha, beta, s, n_integer)


def make_channel(cfg: PhysicalConfig, m: int) -> Channel:
    """Build the Channel for m; boundary channels (|j| = 1) are not critical."""
    j = effective_j(cfg, m)
    critical = abs(j) < 1.0 and not is_boundary(j)
    return Channel(m=m, j=j, lam=coupling_lambda(cfg), in_critical_subspace=critical)


def is_boundary(j: float) -> bool:
    return abs(abs(j) - 1.0) <= BOUNDARY_TOL


def _candidate_ms(cfg: PhysicalConfig) -> range:
    parts = cfg.flux_parts()
    lo, hi = planes_ab(cfg.alpha, parts.beta, cfg.s, parts.n_integer)
    return range(math.floor(lo) - 1, math.ceil(hi) + 2)


def critical_channels(cfg: PhysicalConfig) -> List[Channel]:
    """
    All channels with |j| < 1 (strict).

    The open interval (pi_-, pi_+) has width 2 alpha <= 2, so the result holds
    0, 1 or 2 consecutive m values.
    """
    channels = [make_channel(cfg, m) for m in _candidate_ms(cfg)]
    critical = [c for c in channels if c.in_critical_subspace]
    logger.debug(f"critical channels for {cfg}: {[c.m for c in critical]}")
    return critical


def boundary_channels(cfg: PhysicalConfig) -> List[Channel]:
    """Channels with |j| = 1 within BOUNDARY_TOL (the self-adjoint edge)."""
    return [make_channel(cfg, m) for m in _candidate_ms(cfg) if is_boundary(effective_j(cfg, m))]


def _sigma(effect: Effect, s: int) -> int:
    # m = -sigma N + q, with sigma = s for the AC planes
    return s if effect is Effect.AC else 1


def channel_beta_windows(alpha: float, s: int, n_integer: int,
                         effect: Effect = Effect.AB) -> List[ChannelWindow]:
    """
    For each channel, the beta interval on which it is critical.

    With m = -sigma N + q (sigma = 1 for AB, s for AC), m lies strictly between
    the planes iff sigma beta lies in (c - alpha - q, c + alpha - q), where
    c = (1 - alpha) s / 2. Only non-empty windows are returned, ordered by m.
    """
    sigma = _sigma(effect, s)
    c = _spin_shift(alpha, s)
    windows = []
    for q in _OFFSETS:
        lo, hi = c - alpha - q, c + alpha - q
        if sigma < 0:
            lo, hi = -hi, -lo
        lo, hi = max(lo, 0.0), min(hi, 1.0)
        if lo < hi:
            windows.append(ChannelWindow(m=-sigma * n_integer + q, offset=q, beta_lo=lo, beta_hi=hi))
    return sorted(windows, key=lambda w: w.m)


def affected_channels(alpha: float, s: int, n_integer: int, effect: Effect = Effect.AB) -> List[int]:
    """m values that are critical for some beta in [0, 1)."""
    return [w.m for w in channel_beta_windows(alpha, s, n_integer, effect)]


def _lower_bound(intercept: float, slope: float) -> float:
    """alpha threshold of the constraint intercept + slope * alpha > 0 (slopes are positive)."""
    return -intercept / slope


def alpha_min_for_two_channels(s: int, beta: Optional[float] = None) -> AlphaMinReport:
    """
    Smallest alpha at which both m = -N and m = -N-1 lie between the AB planes.

    Every condition pi_- < m < pi_+ is linear in alpha once c = (1 - alpha) s / 2
    is substituted, and every one of them is an increasing function of alpha,
    so the answer is the largest of the boundary roots.

    Args:
        s: Spin projection
        beta: None for the region statement (both channels affected for some
            beta in [0, 1)); a value in [0, 1) for both channels critical at
            that beta simultaneously

    Returns:
        AlphaMinReport; value is independent of N
    """
    if s not in (-1, 1):
        raise PhysicsDomainError(f"violated s in {{-1, +1}}: s={s}")
    if beta is not None and not 0.0 <= beta < 1.0:
        raise PhysicsDomainError(f"violated 0 <= beta < 1: beta={beta}")

    half = s / 2.0
    # each entry: (offset, plane, intercept, slope) for intercept + slope * alpha > 0
    if beta is None:
        # window (c - alpha - q, c + alpha - q) must meet [0, 1)
        constraints = [
            (0, "pi_plus", half, 1.0 - half),              # c + alpha > 0
            (0, "pi_minus", 1.0 - half, 1.0 + half),       # c - alpha < 1
            (-1, "pi_plus", 1.0 + half, 1.0 - half),       # c + alpha + 1 > 0
            (-1, "pi_minus", -half, 1.0 + half),           # c - alpha + 1 < 1
        ]
    else:
        # beta inside both windows
        constraints = [
            (0, "pi_plus", half - beta, 1.0 - half),             # c + alpha > beta
            (0, "pi_minus", beta - half, 1.0 + half),            # c - alpha < beta
            (-1, "pi_plus", half + 1.0 - beta, 1.0 - half),      # c + alpha + 1 > beta
            (-1, "pi_minus", beta - half - 1.0, 1.0 + half),     # c - alpha + 1 < beta
        ]

    value, binding = 0.0, (None, None)
    for offset, plane, intercept, slope in constraints:
        root = _lower_bound(intercept, slope)
        if root > value:
            value, binding = root, (offset, plane)

    feasible = value < 1.0
    report = AlphaMinReport(
        value=value,
        s=s,
        beta=beta,
        binding_offset=binding[0],
        binding_plane=binding[1],
        feasible=feasible,
    )
    logger.debug(f"alpha_min(s={s}, beta={beta}) = {value} (binding {binding})")
    return report
