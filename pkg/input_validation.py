"""Input validation and parsing of physical parameters, grids and paths."""
import math
import logging
import numbers
from typing import Any, Dict, List, Optional

logger = logging.getLogger(__name__)

# relative slack when deciding whether hi - lo is an exact multiple of step
_RANGE_SLACK = 1e-9


class ValidationError(Exception):
    """Raised when input validation fails."""
    pass


def _as_real(name: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ValidationError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value}")
    return value


def validate_alpha(alpha: Any) -> float:
    """
    Validate the cone parameter.

    Args:
        alpha: Cone parameter

    Returns:
        alpha as float

    Raises:
        ValidationError: Unless 0 < alpha <= 1
    """
    alpha = _as_real("alpha", alpha)
    if not 0.0 < alpha <= 1.0:
        raise ValidationError(f"violated 0 < alpha <= 1: alpha={alpha}")
    return alpha


def validate_spin(s: Any) -> int:
    """
    Validate a spin projection.

    Raises:
        ValidationError: Unless s is -1 or +1
    """
    if isinstance(s, bool) or not isinstance(s, numbers.Real) or s not in (-1, 1):
        raise ValidationError(f"violated s in {{-1, +1}}: s={s!r}")
    return int(s)


def validate_positive(name: str, value: Any) -> float:
    """
    Validate a strictly positive real parameter (mass, k, r0, k0, ...).

    Args:
        name: Parameter name used in the message
        value: Value to validate

    Returns:
        value as float

    Raises:
        ValidationError: Unless value > 0
    """
    value = _as_real(name, value)
    if not value > 0.0:
        raise ValidationError(f"violated {name} > 0: {name}={value}")
    return value


def validate_real(name: str, value: Any) -> float:
    """Validate a finite real parameter with no sign restriction."""
    return _as_real(name, value)


def validate_integer(name: str, value: Any, minimum: Optional[int] = None) -> int:
    """Validate an integer parameter, optionally bounded from below."""
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        if isinstance(value, numbers.Real) and float(value).is_integer():
            value = int(value)
        else:
            raise ValidationError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise ValidationError(f"violated {name} >= {minimum}: {name}={value}")
    return value


def validate_grid(name: str, values: List[float], lo: float, hi: float,
                  include_lo: bool = True, include_hi: bool = True) -> List[float]:
    """
    Validate that every grid value lies within [lo, hi] (bounds as requested).

    Raises:
        ValidationError: If the grid is empty or a value is outside the interval
    """
    if not values:
        raise ValidationError(f"{name} grid must not be empty")
    left = "[" if include_lo else "("
    right = "]" if include_hi else ")"
    for value in values:
        above = value >= lo if include_lo else value > lo
        below = value <= hi if include_hi else value < hi
        if not (above and below):
            raise ValidationError(
                f"violated {name} in {left}{lo}, {hi}{right}: {name}={value}"
            )
    return values


def parse_range(text: str, name: str = "range") -> List[float]:
    """
    Parse a grid flag.

    Accepted forms: a single number, a comma list ``a,b,c``, or ``lo:hi:step``.
    The range includes lo and excludes hi unless hi - lo is an exact multiple of
    step. ``lo:hi`` uses step 1.

    Args:
        text: Flag value
        name: Flag name for error messages

    Returns:
        List of floats in ascending generation order

    Raises:
        ValidationError: If the text cannot be parsed
    """
    if not isinstance(text, str) or not text.strip():
        raise ValidationError(f"{name} cannot be empty")
    text = text.strip()

    try:
        if ":" not in text:
            return [float(part) for part in text.split(",")]
        parts = [float(part) for part in text.split(":")]
    except ValueError as e:
        raise ValidationError(f"Invalid {name} '{text}': {e}")

    if len(parts) == 2:
        parts.append(1.0)
    if len(parts) != 3:
        raise ValidationError(f"Invalid {name} '{text}': expected lo:hi:step")
    lo, hi, step = parts
    if not all(math.isfinite(p) for p in parts):
        raise ValidationError(f"Invalid {name} '{text}': bounds must be finite")
    if not step > 0:
        raise ValidationError(f"violated step > 0 in {name}: step={step}")
    if hi < lo:
        raise ValidationError(f"violated lo <= hi in {name}: lo={lo}, hi={hi}")

    span = (hi - lo) / step
    nearest = round(span)
    if abs(span - nearest) <= _RANGE_SLACK * max(1.0, abs(span)):
        count = int(nearest) + 1
    else:
        count = int(math.floor(span)) + 1
    values = [lo + i * step for i in range(count)]
    if count > 1 and abs(span - nearest) <= _RANGE_SLACK * max(1.0, abs(span)):
        values[-1] = hi

    logger.debug(f"{name} parsed: {len(values)} values from '{text}'")
    return values


def parse_int_range(text: str, name: str = "m_range") -> List[int]:
    """Parse an integer grid (``lo:hi`` inclusive, ``lo:hi:step``, or a comma list)."""
    values = parse_range(text, name)
    result = []
    for value in values:
        if not float(value).is_integer():
            raise ValidationError(f"{name} must contain integers, got {value}")
        result.append(int(value))
    return result


def validate_file_path(path: str) -> bool:
    """
    Validate an output file path.

    Raises:
        ValidationError: If path is invalid
    """
    if not path:
        raise ValidationError("File path cannot be empty")

    if not isinstance(path, str):
        raise ValidationError(f"File path must be string, got {type(path)}")

    if '\x00' in path:
        raise ValidationError("Null bytes not allowed in path")

    logger.debug(f"File path validated: {path}")
    return True


def validate_config_dict(config: dict, required_keys: List[str]) -> bool:
    """
    Validate a parameter dictionary.

    Args:
        config: Parameter dictionary to validate
        required_keys: List of required keys

    Returns:
        True if valid

    Raises:
        ValidationError: If keys are missing
    """
    if not isinstance(config, dict):
        raise ValidationError(f"Config must be dictionary, got {type(config)}")

    missing_keys = [key for key in required_keys if config.get(key) is None]
    if missing_keys:
        raise ValidationError(f"Missing required parameters: {missing_keys}")

    logger.debug(f"Configuration validated ({len(config)} keys)")
    return True


class InputValidator:
    """
    Fail-fast validator for a whole parameter set.

    Every violation found is collected and reported in a single
    ValidationError, so the command line shows one coherent report before any
    computation starts.
    """

    POSITIVE_KEYS = ("mass", "g_factor", "k", "r0", "k0", "r")

    def validate_all(self, **kwargs) -> Dict[str, Any]:
        """
        Validate multiple inputs at once.

        Args:
            **kwargs: Key-value pairs to validate; None values are skipped

        Returns:
            Dictionary of validated values

        Raises:
            ValidationError: Listing every violated precondition
        """
        validated: Dict[str, Any] = {}
        problems: List[str] = []

        for key, value in kwargs.items():
            if value is None:
                continue
            try:
                if key == "alpha":
                    value = validate_alpha(value)
                elif key == "s":
                    value = validate_spin(value)
                elif key in self.POSITIVE_KEYS:
                    value = validate_positive(key, value)
                elif key == "m_max":
                    value = validate_integer(key, value, minimum=1)
                elif key in ("n", "m"):
                    value = validate_integer(key, value)
                elif key in ("phi", "nu", "lam", "j", "varphi"):
                    value = validate_real(key, value)
                elif key == "path":
                    validate_file_path(value)
            except ValidationError as e:
                problems.append(str(e))
                continue
            validated[key] = value

        if problems:
            raise ValidationError("; ".join(problems))
        return validated
