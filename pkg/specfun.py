"""
Special-function kernel: gamma and fractional-order Bessel J, I, K.

The kernel covers exactly what the radial problem on the cone needs:

- ``gamma`` for positive real arguments (Lanczos approximation, reflection
  below 1/2);
- ``bessel_j`` for real orders in (-1, 1) and real arguments;
- ``bessel_i`` for orders in (0, 1) and real positive arguments;
- ``bessel_k`` for orders in (0, 1), real positive arguments and complex
  arguments on the rays arg z = +-pi/4 (the deficiency functions).

Branches: power series for small arguments, Hankel asymptotic series for large
ones. For K the window between ``k_series_cutoff`` and ``asymptotic_cutoff`` is
covered by Steed's continued fraction, which also yields K_{nu+1} and hence the
derivative by recurrence.
"""
import cmath
import logging
import math
import numbers
from dataclasses import dataclass
from typing import List, Tuple, Union

from error_handling import NonConvergenceError, SpecialFunctionDomainError

logger = logging.getLogger(__name__)

Number = Union[float, complex]

_EPS = 2.220446049250313e-16
_SQRT_2PI = math.sqrt(2.0 * math.pi)
# tolerance on arg(z) = +-pi/4 for complex K arguments built in floating point
_ARG_TOL = 1e-9


@dataclass(frozen=True)
class EvalPolicy:
    """Branch thresholds and truncation controls for the Bessel evaluators."""
    series_cutoff: float = 12.0
    asymptotic_cutoff: float = 25.0
    max_terms: int = 500
    abs_tol: float = 1e-17  # stop once |next term| <= abs_tol * |partial sum|
    k_series_cutoff: float = 2.0

    def __post_init__(self):
        if not self.series_cutoff > 0 or not self.asymptotic_cutoff > 0:
            raise SpecialFunctionDomainError("EvalPolicy cutoffs must be positive")
        if self.series_cutoff > self.asymptotic_cutoff:
            raise SpecialFunctionDomainError(
                f"series_cutoff ({self.series_cutoff}) must not exceed "
                f"asymptotic_cutoff ({self.asymptotic_cutoff})"
            )
        if not 0 < self.k_series_cutoff <= self.asymptotic_cutoff:
            raise SpecialFunctionDomainError(
                f"k_series_cutoff must lie in (0, asymptotic_cutoff], got {self.k_series_cutoff}"
            )
        if self.max_terms < 1:
            raise SpecialFunctionDomainError(f"max_terms must be >= 1, got {self.max_terms}")
        if not self.abs_tol > 0:
            raise SpecialFunctionDomainError(f"abs_tol must be > 0, got {self.abs_tol}")


DEFAULT_POLICY = EvalPolicy()


def _real(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise SpecialFunctionDomainError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise SpecialFunctionDomainError(f"{name} must be finite, got {value}")
    return value


# Lanczos approximation, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _lanczos_gamma(x: float) -> float:
    x -= 1.0
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    # t**(x+0.5) split in two halves so large x does not overflow early
    half_power = t ** ((x + 0.5) / 2.0)
    return _SQRT_2PI * half_power * (half_power * math.exp(-t)) * acc


def gamma(x: float) -> float:
    """
    Gamma function for positive real arguments.

    Args:
        x: Argument, x > 0

    Returns:
        Gamma(x) with relative error near 1e-15 on (0, 20]

    Raises:
        SpecialFunctionDomainError: If x <= 0
    """
    x = _real(x, "x")
    if x <= 0.0:
        raise SpecialFunctionDomainError(f"gamma requires x > 0, got {x}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * _lanczos_gamma(1.0 - x))
    return _lanczos_gamma(x)


# ---------------------------------------------------------------------------
# series and asymptotic building blocks (orders unrestricted, internal use)
# ---------------------------------------------------------------------------

def _power_series(order: float, z: Number, sign: float, policy: EvalPolicy) -> Number:
    """Sum_k (sign z^2/4)^k (z/2)^order / (k! Gamma(k+order+1))."""
    half = z / 2.0
    term = half ** order / gamma(order + 1.0)
    terms = [term]
    total = term
    quarter = sign * half * half
    for k in range(1, policy.max_terms):
        term = term * quarter / (k * (k + order))
        terms.append(term)
        total += term
        if abs(term) <= policy.abs_tol * abs(total) or term == 0:
            if isinstance(z, complex):
                return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
            return math.fsum(terms)
    raise NonConvergenceError(
        f"power series for order {order} at z={z} did not converge in {policy.max_terms} terms"
    )


def _hankel_terms(order: float, z: Number, policy: EvalPolicy) -> Tuple[List[Number], float]:
    """
    Terms a_k(order)/z^k of the Hankel asymptotic expansion.

    Stops at the smallest term (the expansion is divergent) or once a term drops
    below the tolerance. Returns the retained terms and the magnitude of the first
    omitted one, which is the truncation error estimate.
    """
    mu = 4.0 * order * order
    terms: List[Number] = [1.0]
    for k in range(1, policy.max_terms):
        term = terms[-1] * (mu - (2 * k - 1) ** 2) / (8.0 * k * z)
        if term == 0:
            return terms, 0.0
        if abs(term) >= abs(terms[-1]):
            return terms, abs(term)
        if abs(term) <= policy.abs_tol:
            terms.append(term)
            return terms, 0.0
        terms.append(term)
    return terms, abs(terms[-1])


def _series_error_estimate(x: float) -> float:
    # alternating series: rounding error scales with sum |terms| ~ I_0(x)
    return 4.0 * _EPS * math.exp(x) / math.sqrt(2.0 * math.pi * x)


# ---------------------------------------------------------------------------
# Bessel J
# ---------------------------------------------------------------------------

def j_series(nu: float, x: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """J_nu(x) from its power series (any x > 0; accurate for moderate x)."""
    return _power_series(nu, x, -1.0, policy)


def j_asymptotic(nu: float, x: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """J_nu(x) from the Hankel expansion (accurate for large x)."""
    value, _ = _j_asymptotic_with_error(nu, x, policy)
    return value


def _j_asymptotic_with_error(nu: float, x: float, policy: EvalPolicy) -> Tuple[float, float]:
    terms, omitted = _hankel_terms(nu, x, policy)
    p = math.fsum(t * (-1) ** (k // 2) for k, t in enumerate(terms) if k % 2 == 0)
    q = math.fsum(t * (-1) ** ((k - 1) // 2) for k, t in enumerate(terms) if k % 2 == 1)
    chi = x - (0.5 * nu + 0.25) * math.pi
    envelope = math.sqrt(2.0 / (math.pi * x))
    return envelope * (p * math.cos(chi) - q * math.sin(chi)), envelope * omitted


def bessel_j(nu: float, x: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """
    Bessel function of the first kind J_nu(x) of fractional real order.

    Args:
        nu: Order, -1 < nu < 1
        x: Argument, x >= 0 (x > 0 when nu < 0)
        policy: Branch thresholds

    Returns:
        J_nu(x)

    Raises:
        SpecialFunctionDomainError: For orders outside (-1, 1), negative x, or
            x = 0 with a negative order (singular point)
    """
    nu = _real(nu, "nu")
    x = _real(x, "x")
    if not -1.0 < nu < 1.0:
        raise SpecialFunctionDomainError(f"bessel_j requires -1 < nu < 1, got nu={nu}")
    if x < 0.0:
        raise SpecialFunctionDomainError(f"bessel_j requires x >= 0, got x={x}")
    if x == 0.0:
        if nu > 0.0:
            return 0.0
        if nu == 0.0:
            return 1.0
        raise SpecialFunctionDomainError(f"J_{nu}(x) is singular at x=0 for negative order")

    if x <= policy.series_cutoff:
        return j_series(nu, x, policy)
    asym, asym_err = _j_asymptotic_with_error(nu, x, policy)
    if x >= policy.asymptotic_cutoff or asym_err <= _series_error_estimate(x):
        return asym
    logger.debug(f"bessel_j({nu}, {x}): series branch chosen in overlap window")
    return j_series(nu, x, policy)


# ---------------------------------------------------------------------------
# Bessel I
# ---------------------------------------------------------------------------

def _i_value(order: float, x: float, policy: EvalPolicy) -> float:
    if x < policy.asymptotic_cutoff:
        return _power_series(order, x, 1.0, policy)
    terms, _ = _hankel_terms(order, x, policy)
    total = math.fsum(t * (-1) ** k for k, t in enumerate(terms))
    return math.exp(x) / math.sqrt(2.0 * math.pi * x) * total


def _check_unit_order(nu: float, func: str) -> float:
    nu = _real(nu, "nu")
    if not 0.0 < nu < 1.0:
        raise SpecialFunctionDomainError(f"{func} requires 0 < nu < 1, got nu={nu}")
    return nu


def bessel_i(nu: float, x: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """
    Modified Bessel function of the first kind I_nu(x).

    Args:
        nu: Order, 0 < nu < 1
        x: Argument, x > 0
        policy: Branch thresholds

    Returns:
        I_nu(x)
    """
    nu = _check_unit_order(nu, "bessel_i")
    x = _real(x, "x")
    if x <= 0.0:
        raise SpecialFunctionDomainError(f"bessel_i requires x > 0, got x={x}")
    return _i_value(nu, x, policy)


def bessel_i_prime(nu: float, x: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Derivative I_nu'(x) = I_{nu+1}(x) + (nu/x) I_nu(x)."""
    nu = _check_unit_order(nu, "bessel_i_prime")
    x = _real(x, "x")
    if x <= 0.0:
        raise SpecialFunctionDomainError(f"bessel_i_prime requires x > 0, got x={x}")
    return _i_value(nu + 1.0, x, policy) + nu / x * _i_value(nu, x, policy)


# ---------------------------------------------------------------------------
# Bessel K
# ---------------------------------------------------------------------------

def bessel_ik_product(nu: float, x: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """
    I_nu(x) K_nu(x) for 0 < nu < 1 and x > 0.

    Past asymptotic_cutoff the exponentials cancel analytically: with the
    Hankel sums S- = sum (-1)^k a_k/x^k and S+ = sum a_k/x^k the product is
    S- S+ / (2x), so arbitrarily large x stays finite.
    """
    nu = _check_unit_order(nu, "bessel_ik_product")
    x = _real(x, "x")
    if x <= 0.0:
        raise SpecialFunctionDomainError(f"bessel_ik_product requires x > 0, got x={x}")
    if x < policy.asymptotic_cutoff:
        return _i_value(nu, x, policy) * _k_pair(nu, x, policy)[0]
    terms, _ = _hankel_terms(nu, x, policy)
    alternating = math.fsum(t * (-1) ** k for k, t in enumerate(terms))
    return alternating * math.fsum(terms) / (2.0 * x)


def _check_k_argument(z) -> Number:
    if isinstance(z, numbers.Complex) and not isinstance(z, numbers.Real):
        z = complex(z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise SpecialFunctionDomainError(f"bessel_k argument must be finite, got {z}")
        if z.imag == 0.0:
            z = z.real
        else:
            arg = cmath.phase(z)
            if abs(abs(arg) - math.pi / 4.0) > _ARG_TOL:
                raise SpecialFunctionDomainError(
                    f"complex bessel_k arguments must satisfy arg z = +-pi/4, got arg={arg}"
                )
            return z
    z = _real(z, "z")
    if z <= 0.0:
        raise SpecialFunctionDomainError(f"bessel_k requires z > 0 on the real axis, got z={z}")
    return z


def _k_series_pair(nu: float, z: Number, policy: EvalPolicy) -> Tuple[Number, Number]:
    factor = math.pi / (2.0 * math.sin(nu * math.pi))
    k_nu = factor * (_power_series(-nu, z, 1.0, policy) - _power_series(nu, z, 1.0, policy))
    # K_{nu-1} = K_{1-nu}; K_{nu+1} = K_{nu-1} + (2 nu / z) K_nu
    other = 1.0 - nu
    factor_other = math.pi / (2.0 * math.sin(other * math.pi))
    k_other = factor_other * (
        _power_series(-other, z, 1.0, policy) - _power_series(other, z, 1.0, policy)
    )
    return k_nu, k_other + 2.0 * nu / z * k_nu


def _k_steed_pair(nu: float, z: Number, policy: EvalPolicy) -> Tuple[Number, Number]:
    """Steed's continued fraction (CF2) for K_mu, K_{mu+1} with |mu| <= 1/2."""
    is_complex = isinstance(z, complex)
    sqrt = cmath.sqrt if is_complex else math.sqrt
    exp = cmath.exp if is_complex else math.exp

    shift = int(nu + 0.5)
    xmu = nu - shift
    b = 2.0 * (1.0 + z)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25 - xmu * xmu
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, 20 * policy.max_terms):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels) < _EPS * abs(s):
            break
    else:
        raise NonConvergenceError(f"continued fraction for K_{nu}({z}) did not converge")
    h = a1 * h
    k_mu = sqrt(math.pi / (2.0 * z)) * exp(-z) / s
    k_mu1 = k_mu * (xmu + z + 0.5 - h) / z
    if shift == 0:
        return k_mu, k_mu1
    # nu = xmu + 1: K_nu = K_{xmu+1}, K_{nu+1} by upward recurrence
    return k_mu1, 2.0 * (xmu + 1.0) / z * k_mu1 + k_mu


def _k_asymptotic(order: float, z: Number, policy: EvalPolicy) -> Number:
    is_complex = isinstance(z, complex)
    sqrt = cmath.sqrt if is_complex else math.sqrt
    exp = cmath.exp if is_complex else math.exp
    terms, _ = _hankel_terms(order, z, policy)
    if is_complex:
        total = complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
    else:
        total = math.fsum(terms)
    return sqrt(math.pi / (2.0 * z)) * exp(-z) * total


def _k_pair(nu: float, z: Number, policy: EvalPolicy) -> Tuple[Number, Number]:
    size = abs(z)
    if size <= policy.k_series_cutoff:
        return _k_series_pair(nu, z, policy)
    if size < policy.asymptotic_cutoff:
        return _k_steed_pair(nu, z, policy)
    return _k_asymptotic(nu, z, policy), _k_asymptotic(nu + 1.0, z, policy)


def bessel_k(nu: float, z: Number, policy: EvalPolicy = DEFAULT_POLICY) -> Number:
    """
    Modified Bessel function of the second kind K_nu(z).

    Args:
        nu: Order, 0 < nu < 1
        z: Real z > 0, or complex z with arg z = +-pi/4 (e.g. sqrt(-i) * x)
        policy: Branch thresholds

    Returns:
        K_nu(z); a float for real arguments, a complex for complex ones
    """
    nu = _check_unit_order(nu, "bessel_k")
    z = _check_k_argument(z)
    return _k_pair(nu, z, policy)[0]


def bessel_k_prime(nu: float, z: Number, policy: EvalPolicy = DEFAULT_POLICY) -> Number:
    """Derivative K_nu'(z) = (nu/z) K_nu(z) - K_{nu+1}(z)."""
    nu = _check_unit_order(nu, "bessel_k_prime")
    z = _check_k_argument(z)
    k_nu, k_next = _k_pair(nu, z, policy)
    return nu / z * k_nu - k_next


def bessel_k_any(order: float, z: Number, policy: EvalPolicy = DEFAULT_POLICY) -> Number:
    """
    K_order(z) for any positive non-integer order, by upward recurrence.

    Used to evaluate channels with |j| >= 1 in the deficiency quadrature.
    """
    order = abs(_real(order, "order"))
    z = _check_k_argument(z)
    whole = math.floor(order)
    mu = order - whole
    if mu == 0.0:
        raise SpecialFunctionDomainError(f"bessel_k_any requires a non-integer order, got {order}")
    previous, current = _k_pair(mu, z, policy)
    if whole == 0:
        return previous
    for i in range(1, whole):
        previous, current = current, previous + 2.0 * (mu + i) / z * current
    return current


def half_integer_reference(kind: str, z: Number) -> Number:
    """Closed forms of J, I, K at order 1/2, used by the verification suite."""
    sqrt = cmath.sqrt if isinstance(z, complex) else math.sqrt
    exp = cmath.exp if isinstance(z, complex) else math.exp
    if kind == "j":
        return math.sqrt(2.0 / (math.pi * z)) * math.sin(z)
    if kind == "i":
        return math.sqrt(2.0 / (math.pi * z)) * math.sinh(z)
    if kind == "k":
        return sqrt(math.pi / (2.0 * z)) * exp(-z)
    raise ValueError(f"unknown kind {kind!r}")
