"""
Delta-shell route to the extended Hamiltonian.

The contact term delta(r)/r is regularized as delta(r - r0)/r0 on a core of
radius r0. Matching the zero-energy logarithmic derivative inside the shell
to the small-argument form of K_{|j|} outside gives the bound-state energy
and, through it, the extension parameter nu as a function of (lambda, r0).
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum

from bg import BoundState, ExtensionParam, MethodTag
from error_handling import DegenerateChannelError, PhysicsDomainError, PoleError
from specfun import gamma

logger = logging.getLogger(__name__)

# kappa*r0 from which the two-term small-z form of K is no longer trusted
ADVISORY_KR0 = 0.5
_DEGENERATE_J = 1e-12


class MatchingVariant(Enum):
    """
    Interior matching value at the shell.

    COUPLING uses lambda itself; SHELL adds the interior log-derivative |j| of the
    regular zero-energy solution r^{|j|}, which is what the exact shell obeys.
    """
    COUPLING = "coupling"
    SHELL = "shell"


@dataclass(frozen=True)
class ShellConfig:
    """Core radius r0 (should be below the Compton wavelength) and coupling lambda."""
    r0: float
    lam: float

    def __post_init__(self):
        if not (math.isfinite(self.r0) and self.r0 > 0.0):
            raise PhysicsDomainError(f"violated r0 > 0: r0={self.r0}")
        if not math.isfinite(self.lam):
            raise PhysicsDomainError(f"lambda must be finite, got {self.lam}")


@dataclass(frozen=True)
class LogDerivative:
    """r0 psi'/psi at the shell, the intermediate X, and whether kappa*r0 is too large."""
    value: float
    x: float
    advisory: bool


def _order(j: float) -> float:
    aj = abs(j)
    if aj < _DEGENERATE_J:
        raise DegenerateChannelError(f"|j| = {aj}: the shell matching needs 0 < |j| < 1")
    if not aj < 1.0:
        raise PhysicsDomainError(f"violated 0 < |j| < 1: j={j}")
    return aj


def _gamma_ratio(aj: float) -> float:
    """Gamma(1+|j|)/Gamma(1-|j|)."""
    return gamma(1.0 + aj) / gamma(1.0 - aj)


def exterior_log_derivative(j: float, kappa: float, r0: float) -> LogDerivative:
    """
    Logarithmic derivative r0 psi'/psi of K_{|j|}(kappa r) at r = r0.

    From the two-term small-argument form of K:
    value = -|j| (1 + X)/(1 - X), X = [Gamma(1-|j|)/Gamma(1+|j|)] (kappa r0 / 2)^{2|j|}.

    Raises:
        PoleError: At X = 1
    """
    aj = _order(j)
    if not kappa > 0.0 or not r0 > 0.0:
        raise PhysicsDomainError(f"violated kappa > 0 and r0 > 0: kappa={kappa}, r0={r0}")
    kr0 = kappa * r0
    x = (0.5 * kr0) ** (2.0 * aj) / _gamma_ratio(aj)
    if abs(1.0 - x) <= 4.0 * 2.220446049250313e-16:
        raise PoleError(f"exterior log-derivative singular at X=1 (kappa*r0={kr0}, |j|={aj})")
    advisory = kr0 >= ADVISORY_KR0
    if advisory:
        logger.warning(f"kappa*r0 = {kr0:.3g} >= {ADVISORY_KR0}: small-argument form of K is inaccurate")
    return LogDerivative(value=-aj * (1.0 + x) / (1.0 - x), x=x, advisory=advisory)


def kappa_from_log_derivative(value: float, j: float, r0: float) -> float:
    """
    Invert exterior_log_derivative: kappa with r0 psi'/psi = value.

    X = (value + |j|)/(value - |j|), kappa = (2/r0) [X Gamma(1+|j|)/Gamma(1-|j|)]^{1/(2|j|)}.

    Raises:
        PhysicsDomainError: If X <= 0 (no decaying solution matches)
    """
    aj = _order(j)
    if value == aj:
        raise PhysicsDomainError(f"violated value != |j|: value={value}")
    x = (value + aj) / (value - aj)
    if not x > 0.0:
        raise PhysicsDomainError(
            f"no bound state: violated (value+|j|)/(value-|j|) > 0 with value={value}, |j|={aj}"
        )
    return (2.0 / r0) * (x * _gamma_ratio(aj)) ** (1.0 / (2.0 * aj))


def interior_log_derivative(shell: ShellConfig, j: float,
                            matching: MatchingVariant = MatchingVariant.COUPLING) -> float:
    """
    Matching value produced by the shell: lambda (COUPLING) or lambda + |j| (SHELL).

    The SHELL variant follows from integrating the zero-energy equation across
    the shell with the interior solution r^{|j|}, whose r0 psi'/psi is |j|.
    """
    if matching is MatchingVariant.SHELL:
        return shell.lam + _order(j)
    return shell.lam


def _bracket_ratio(shell: ShellConfig, aj: float, matching: MatchingVariant) -> float:
    value = interior_log_derivative(shell, aj, matching)
    if value == aj:
        raise PhysicsDomainError(
            f"no bound state for this coupling: violated matching value != |j| "
            f"(lambda={shell.lam}, |j|={aj}, matching={matching.value})"
        )
    ratio = (value + aj) / (value - aj)
    if not ratio > 0.0:
        raise PhysicsDomainError(
            f"no bound state for this coupling: violated (L+|j|)/(L-|j|) > 0 "
            f"with L={value} (lambda={shell.lam}, |j|={aj}, matching={matching.value})"
        )
    return ratio


def bound_state_ks(shell: ShellConfig, j: float, mass: float,
                   matching: MatchingVariant = MatchingVariant.COUPLING) -> BoundState:
    """
    Bound state of the regularized shell problem.

    E_b = -(2/(M r0^2)) [((L+|j|)/(L-|j|)) Gamma(1+|j|)/Gamma(1-|j|)]^{1/|j|}
    with L the interior matching value (lambda by default).

    Args:
        shell: Core radius and coupling
        j: Effective angular momentum, 0 < |j| < 1
        mass: Particle mass M > 0
        matching: Interior matching variant

    Returns:
        BoundState tagged KS

    Raises:
        PhysicsDomainError: When (L+|j|)/(L-|j|) <= 0
    """
    if not mass > 0.0:
        raise PhysicsDomainError(f"violated mass > 0: mass={mass}")
    aj = _order(j)
    ratio = _bracket_ratio(shell, aj, matching)
    energy = -(2.0 / (mass * shell.r0 ** 2)) * (ratio * _gamma_ratio(aj)) ** (1.0 / aj)
    kappa = math.sqrt(2.0 * mass * abs(energy))
    logger.debug(f"KS bound state: kappa={kappa}, kappa*r0={kappa * shell.r0}")
    return BoundState(kappa_b=kappa, energy=energy, method_tag=MethodTag.KS, mass=mass)


def nu_from_physical(shell: ShellConfig, j: float,
                     matching: MatchingVariant = MatchingVariant.COUPLING) -> ExtensionParam:
    """
    Extension parameter implied by the shell: nu = -r0^{-2|j|} (L+|j|)/(L-|j|).

    Returns:
        Finite ExtensionParam in units of length^(-2|j|)

    Raises:
        PhysicsDomainError: At L = |j|
    """
    aj = _order(j)
    value = interior_log_derivative(shell, aj, matching)
    if value == aj:
        raise PhysicsDomainError(f"violated lambda != |j|: lambda={shell.lam}, |j|={aj}")
    nu = -(value + aj) / (value - aj) / shell.r0 ** (2.0 * aj)
    return ExtensionParam.finite(nu)
