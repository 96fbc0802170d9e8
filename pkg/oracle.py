"""
Independent numerical checks of the closed forms.

- S-matrix pole search on the imaginary k axis (Brent root search);
- exact delta-shell bound states from the Bessel matching condition;
- square integrability of the deficiency functions by quadrature;
- boundary values psi_0, psi_1 of sampled wavefunctions by Richardson
  extrapolation.

The closed forms are only used to seed brackets; every bracket is checked
for a sign change before iterating.
"""
import cmath
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

from scipy import integrate, optimize

from bg import BoundState, MethodTag, bound_state_bg, continued_denominator, ExtensionParam
from error_handling import (
    BracketError,
    IllConditionedError,
    NoBoundStateError,
    NonConvergenceError,
    PhysicsDomainError,
)
from ks import MatchingVariant, ShellConfig, bound_state_ks
from specfun import bessel_ik_product, bessel_k_any

logger = logging.getLogger(__name__)

_EPS = 2.220446049250313e-16
# brentq refuses rtol below 4 eps
_MIN_RTOL = 4.0 * _EPS
# Richardson eliminations used at most
_MAX_LEVELS = 8


@dataclass(frozen=True)
class RootFindSpec:
    """Bracket (optional, grown from a seed when absent), tolerance and iteration cap."""
    bracket_lo: Optional[float] = None
    bracket_hi: Optional[float] = None
    rel_tol: float = 1e-12
    max_iter: int = 200
    growth_factor: float = 2.0
    max_expansions: int = 200

    def __post_init__(self):
        if (self.bracket_lo is None) != (self.bracket_hi is None):
            raise PhysicsDomainError("give both bracket ends or neither")
        if self.bracket_lo is not None and not self.bracket_lo < self.bracket_hi:
            raise PhysicsDomainError(
                f"violated bracket_lo < bracket_hi: {self.bracket_lo} >= {self.bracket_hi}"
            )
        if not self.rel_tol > 0.0:
            raise PhysicsDomainError(f"violated rel_tol > 0: rel_tol={self.rel_tol}")
        if self.max_iter < 1:
            raise PhysicsDomainError(f"violated max_iter >= 1: max_iter={self.max_iter}")
        if not self.growth_factor > 1.0:
            raise PhysicsDomainError(f"violated growth_factor > 1: growth_factor={self.growth_factor}")


@dataclass(frozen=True)
class QuadratureReport:
    """Result of the deficiency quadrature."""
    value: float
    abs_error_estimate: float
    converged: bool
    cutoff_radius: float
    inner_radius: float = 0.0
    decade_ratio: float = 0.0


@dataclass(frozen=True)
class BoundaryValues:
    """psi_0 = lim r^{|j|} psi and psi_1 = lim r^{-|j|}(psi - psi_0 r^{-|j|})."""
    psi0: complex
    psi1: complex
    psi0_error: float = 0.0
    psi1_error: float = 0.0


@dataclass(frozen=True)
class ShellComparison:
    """Exact shell decay constant against a closed-form KS one."""
    kappa_shell: float
    kappa_ks: float
    relative_gap: float
    matching: MatchingVariant


# ---------------------------------------------------------------------------
# root finding
# ---------------------------------------------------------------------------

def _grow_bracket(func: Callable[[float], float], seed: float,
                  spec: RootFindSpec) -> Tuple[float, float]:
    """Grow [seed/g, seed*g] geometrically until func changes sign (positive axis)."""
    growth = spec.growth_factor
    lo, hi = seed / growth, seed * growth
    f_lo, f_hi = func(lo), func(hi)
    for _ in range(spec.max_expansions):
        if f_lo * f_hi <= 0.0:
            return lo, hi
        lo, hi = lo / growth, hi * growth
        f_lo, f_hi = func(lo), func(hi)
    raise BracketError(f"no sign change found around seed {seed}")


def _solve(func: Callable[[float], float], seed: float, spec: RootFindSpec) -> float:
    if spec.bracket_lo is not None:
        lo, hi = spec.bracket_lo, spec.bracket_hi
    else:
        lo, hi = _grow_bracket(func, seed, spec)
    f_lo, f_hi = func(lo), func(hi)
    if f_lo * f_hi > 0.0:
        raise BracketError(f"no sign change on [{lo}, {hi}]: f={f_lo}, {f_hi}")
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi

    # absolute tolerance far below the relative one so small roots stay accurate
    xtol = max(1e-3 * spec.rel_tol * min(abs(lo), abs(hi)), 1e-300)
    root, result = optimize.brentq(
        func, lo, hi,
        xtol=xtol,
        rtol=max(spec.rel_tol, _MIN_RTOL),
        maxiter=spec.max_iter,
        full_output=True,
        disp=False,
    )
    if not result.converged:
        raise NonConvergenceError(
            f"root search did not converge in {spec.max_iter} iterations ({result.flag})"
        )
    logger.debug(f"root {root} after {result.iterations} iterations on [{lo}, {hi}]")
    return root


def find_smatrix_pole(j: float, nu: float, spec: Optional[RootFindSpec] = None) -> float:
    """
    Decay constant kappa of the S-matrix pole at k = i kappa.

    The denominator of 1 - i mu_nu is continued to k = i kappa (principal
    branch), where it is real; its zero is located by Brent's method. The
    closed-form bound state only seeds the bracket.

    Raises:
        BracketError: If no sign change is found
        NonConvergenceError: Past max_iter
    """
    spec = spec or RootFindSpec()
    if not nu < 0.0:
        raise PhysicsDomainError(f"violated nu < 0: nu={nu}")

    def real_part(kappa: float) -> float:
        return continued_denominator(nu, j, 1j * kappa).real

    seed = bound_state_bg(ExtensionParam.finite(nu), j, 1.0).kappa_b
    kappa = _solve(real_part, seed, spec)
    residual = continued_denominator(nu, j, 1j * kappa)
    logger.debug(f"pole |j|={abs(j)}, nu={nu}: kappa={kappa}, residual={residual}")
    return kappa


def shell_condition(z: float, j: float, lam: float) -> float:
    """I_{|j|}(z) K_{|j|}(z) + 1/lambda; zero at the shell bound state z = kappa r0."""
    aj = abs(j)
    return bessel_ik_product(aj, z) + 1.0 / lam


def delta_shell_bound_state(shell: ShellConfig, j: float, mass: float,
                            spec: Optional[RootFindSpec] = None) -> BoundState:
    """
    Exact bound state of the shell (lambda/r0) delta(r - r0).

    Interior I_{|j|}(kappa r), exterior K_{|j|}(kappa r); continuity and the
    derivative jump (lambda/r0) psi(r0), with the Wronskian
    z (I K' - I' K) = -1, reduce to I(z) K(z) = -1/lambda at z = kappa r0.

    Raises:
        NoBoundStateError: When lambda >= -2|j| (I K decreases from 1/(2|j|))
    """
    spec = spec or RootFindSpec()
    aj = abs(j)
    if not 0.0 < aj < 1.0:
        raise PhysicsDomainError(f"violated 0 < |j| < 1: j={j}")
    if not mass > 0.0:
        raise PhysicsDomainError(f"violated mass > 0: mass={mass}")
    if not shell.lam < -2.0 * aj:
        raise NoBoundStateError(
            f"no shell bound state: violated lambda < -2|j| with lambda={shell.lam}, |j|={aj}"
        )

    # large-z form I K ~ 1/(2z) seeds the bracket
    seed = -0.5 * shell.lam
    z = _solve(lambda value: shell_condition(value, aj, shell.lam), seed, spec)
    kappa = z / shell.r0
    return BoundState(kappa_b=kappa, energy=-kappa * kappa / (2.0 * mass),
                      method_tag=MethodTag.SHELL, mass=mass)


def shell_ks_gap(shell: ShellConfig, j: float, mass: float,
                 matching: MatchingVariant = MatchingVariant.COUPLING,
                 spec: Optional[RootFindSpec] = None) -> ShellComparison:
    """Relative gap |kappa_shell - kappa_KS| / kappa_KS for one matching variant."""
    exact = delta_shell_bound_state(shell, j, mass, spec)
    closed = bound_state_ks(shell, j, mass, matching)
    gap = abs(exact.kappa_b - closed.kappa_b) / closed.kappa_b
    return ShellComparison(kappa_shell=exact.kappa_b, kappa_ks=closed.kappa_b,
                           relative_gap=gap, matching=matching)


# ---------------------------------------------------------------------------
# deficiency subspaces
# ---------------------------------------------------------------------------

def _outer_radius(k0: float, envelope: float) -> float:
    """Smallest doubling of 1/k0 where sqrt(pi/(2|z|)) e^{-Re z} drops below envelope."""
    radius = 1.0 / k0
    for _ in range(200):
        z = k0 * radius
        if math.sqrt(math.pi / (2.0 * z)) * math.exp(-z / math.sqrt(2.0)) < envelope:
            return radius
        radius *= 2.0
    return radius


def deficiency_norm(j: float, k0: float, sign: int = 1, tol: float = 1e-10,
                    decades: int = 10, envelope: float = 1e-16, limit: int = 200) -> QuadratureReport:
    """
    Squared norm of the deficiency function K_{|j|}(sqrt(-+i) k0 r) on (0, R).

    The outer piece [1/k0, R] is integrated in one go; below 1/k0 the integral
    is taken decade by decade. The ratio of the last two decade contributions
    decides: a ratio >= 1 means the integral diverges at the origin, otherwise
    the remaining decades are summed as a geometric tail.

    Args:
        j: Effective angular momentum (|j| non-integer)
        k0: Scale introduced for dimensional reasons, k0 > 0
        sign: +1 for sqrt(-i), -1 for sqrt(+i)
        tol: Requested absolute tolerance
        decades: Number of decades below 1/k0
        envelope: Outer cutoff level of |K|
        limit: Subinterval limit per quad call

    Returns:
        QuadratureReport; converged with a finite value iff |j| < 1
    """
    if not k0 > 0.0:
        raise PhysicsDomainError(f"violated k0 > 0: k0={k0}")
    if sign not in (1, -1):
        raise PhysicsDomainError(f"violated sign in {{+1, -1}}: sign={sign}")
    order = abs(j)
    phase = cmath.exp(-0.25j * math.pi * sign)

    def integrand(r: float) -> float:
        value = bessel_k_any(order, phase * (k0 * r))
        return (value.real ** 2 + value.imag ** 2) * r

    inner_scale = 1.0 / k0
    outer = _outer_radius(k0, envelope)
    rtol = min(tol, 1e-12)
    total, error = integrate.quad(integrand, inner_scale, outer, epsabs=0.0, epsrel=rtol, limit=limit)

    contributions: List[float] = []
    upper = inner_scale
    for _ in range(decades):
        lower = upper / 10.0
        piece, piece_err = integrate.quad(integrand, lower, upper, epsabs=0.0, epsrel=rtol, limit=limit)
        contributions.append(piece)
        total += piece
        error += piece_err
        upper = lower

    ratio = contributions[-1] / contributions[-2]
    previous_ratio = contributions[-2] / contributions[-3] if decades >= 3 else ratio
    if ratio >= 1.0:
        logger.debug(f"deficiency norm |j|={order} diverges: decade ratio {ratio:.4g}")
        return QuadratureReport(value=total, abs_error_estimate=math.inf, converged=False,
                                cutoff_radius=outer, inner_radius=upper, decade_ratio=ratio)

    tail = contributions[-1] * ratio / (1.0 - ratio)
    if previous_ratio < 1.0:
        tail_alt = contributions[-1] * previous_ratio / (1.0 - previous_ratio)
        error += abs(tail - tail_alt)
    else:
        error += abs(tail)
    total += tail
    converged = error <= tol
    logger.debug(f"deficiency norm |j|={order}, sign={sign}: {total} +- {error}")
    return QuadratureReport(value=total, abs_error_estimate=error, converged=converged,
                            cutoff_radius=outer, inner_radius=upper, decade_ratio=ratio)


def deficiency_indices(j: float, k0: float, tol: float = 1e-6) -> Tuple[int, int]:
    """(n_plus, n_minus): 1 for each sign whose deficiency function is square integrable."""
    n_plus = 1 if deficiency_norm(j, k0, sign=1, tol=tol).converged else 0
    n_minus = 1 if deficiency_norm(j, k0, sign=-1, tol=tol).converged else 0
    return n_plus, n_minus


# ---------------------------------------------------------------------------
# boundary values
# ---------------------------------------------------------------------------

def _exponents(base: Sequence[float], shifted: Sequence[float], count: int) -> List[float]:
    """Sorted distinct exponents from base + 2n and shifted + 2n, n >= 0."""
    values = set()
    for n in range(count):
        for start in list(base) + list(shifted):
            values.add(round(start + 2 * n, 12))
    return sorted(values)[:count]


def _richardson(values: List[complex], exponents: List[float]) -> Tuple[complex, float]:
    """
    Eliminate r^p terms, p in exponents order, from f sampled at r, 2r, 4r, ...

    Returns the extrapolated value at the smallest r and the noise
    amplification of the table.
    """
    table = list(values)
    amplification = 1.0
    for p in exponents[: min(len(values) - 1, _MAX_LEVELS)]:
        factor = 2.0 ** p
        table = [(factor * table[i] - table[i + 1]) / (factor - 1.0) for i in range(len(table) - 1)]
        amplification *= (abs(factor) + 1.0) / abs(factor - 1.0)
    return table[0], amplification


def boundary_values_extract(samples: Sequence[Tuple[float, complex]], j: float) -> BoundaryValues:
    """
    Boundary values psi_0, psi_1 of a channel wavefunction from samples near r = 0.

    Args:
        samples: (r, psi(r)) pairs on a ratio-2 geometric grid spanning at least
            two decades, with r_max k << 1
        j: Effective angular momentum, 0 < |j| < 1

    Returns:
        BoundaryValues; for psi = a J_{|j|}(kr) + b J_{-|j|}(kr) these are
        b (k/2)^{-|j|}/Gamma(1-|j|) and a (k/2)^{|j|}/Gamma(1+|j|)

    Raises:
        IllConditionedError: When |j| > 0.95 and psi_1 is below the noise floor
    """
    aj = abs(j)
    if not 0.0 < aj < 1.0:
        raise PhysicsDomainError(f"violated 0 < |j| < 1: j={j}")
    points = sorted((float(r), complex(psi)) for r, psi in samples)
    if len(points) < 3:
        raise PhysicsDomainError(f"need at least 3 samples, got {len(points)}")
    radii = [r for r, _ in points]
    if radii[0] <= 0.0:
        raise PhysicsDomainError(f"violated r > 0: r={radii[0]}")
    for a, b in zip(radii, radii[1:]):
        if abs(b / a - 2.0) > 1e-9:
            raise PhysicsDomainError(f"samples must form a ratio-2 geometric grid, got {a}, {b}")
    if radii[-1] / radii[0] < 100.0:
        raise PhysicsDomainError(
            f"samples must span two decades: r_max/r_min = {radii[-1] / radii[0]:.3g}"
        )

    levels = len(points) - 1
    scaled = [r ** aj * psi for r, psi in points]
    psi0_exponents = _exponents([2.0 * aj], [2.0], levels)
    psi0, amp0 = _richardson(scaled, psi0_exponents)

    remainders = [(psi - psi0 * r ** (-aj)) * r ** (-aj) for r, psi in points]
    # -2|j| absorbs the residual error of psi0
    psi1_exponents = [-2.0 * aj] + _exponents([2.0 - 2.0 * aj], [2.0], levels - 1)
    psi1, amp1 = _richardson(remainders, psi1_exponents)

    scale0 = max(abs(v) for v in scaled)
    noise0 = 16.0 * _EPS * scale0 * amp0
    scale1 = max(abs(psi) * r ** (-aj) for r, psi in points)
    noise1 = 16.0 * _EPS * scale1 * amp1
    if aj > 0.95 and abs(psi1) <= noise1:
        raise IllConditionedError(
            f"psi_1 = {abs(psi1):.3g} is below the noise floor {noise1:.3g} at |j|={aj}"
        )
    return BoundaryValues(psi0=psi0, psi1=psi1, psi0_error=noise0, psi1_error=noise1)


def implied_nu(values: BoundaryValues) -> complex:
    """
    psi_1/psi_0, the nu the samples satisfy under psi_1 = nu psi_0.

    Infinite (Friedrichs) when psi_0 vanishes.
    """
    if values.psi0 == 0:
        return complex(math.inf, 0.0)
    return values.psi1 / values.psi0
