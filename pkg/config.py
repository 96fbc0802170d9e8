"""Configuration management for conical-ab."""
import os
import logging
from typing import Dict, Any, Optional, Tuple
from dataclasses import dataclass, field, asdict, fields
from pathlib import Path

from specfun import EvalPolicy

logger = logging.getLogger(__name__)

ENV_PREFIX = "CONICAL_AB_"


@dataclass
class NumericsConfig:
    """Branch thresholds of the special-function kernel."""
    series_cutoff: float = 12.0
    asymptotic_cutoff: float = 25.0
    k_series_cutoff: float = 2.0
    max_terms: int = 500
    abs_tol: float = 1e-17

    def to_policy(self) -> EvalPolicy:
        return EvalPolicy(
            series_cutoff=self.series_cutoff,
            asymptotic_cutoff=self.asymptotic_cutoff,
            max_terms=self.max_terms,
            abs_tol=self.abs_tol,
            k_series_cutoff=self.k_series_cutoff,
        )


@dataclass
class RootFindConfig:
    """Bracketing root search used by the oracles."""
    rel_tol: float = 1e-12
    max_iter: int = 200
    growth_factor: float = 2.0  # geometric bracket expansion
    max_expansions: int = 200


@dataclass
class QuadratureConfig:
    """Deficiency-subspace quadrature."""
    tol: float = 1e-10
    decades: int = 10
    envelope: float = 1e-16  # outer cutoff where |K| drops below this
    index_tol: float = 1e-6  # looser tolerance used by deficiency_indices
    limit: int = 200  # subintervals per quad call


@dataclass
class PhysicsConfig:
    """Defaults for physical parameters not given on the command line."""
    mass: float = 1.0
    g_factor: float = 2.0 * (1.0 + 0.00115965218091)


@dataclass
class ExecutionConfig:
    """Grid fan-out."""
    threads: int = 1
    scheduler: str = "threads"


@dataclass
class OutputConfig:
    """Output files."""
    format: str = "csv"
    significant_digits: int = 17
    units_banner: str = "# units: hbar=c=1"


@dataclass
class LoggingConfig:
    """Logging configuration."""
    level: str = "WARNING"
    format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


_SECTIONS = {
    "numerics": NumericsConfig,
    "root_find": RootFindConfig,
    "quadrature": QuadratureConfig,
    "physics": PhysicsConfig,
    "execution": ExecutionConfig,
    "output": OutputConfig,
    "logging": LoggingConfig,
}


def _coerce(cls, name: str, raw: Any) -> Any:
    """Convert a raw (string) value to the type of the dataclass field."""
    default = next(f.default for f in fields(cls) if f.name == name)
    if isinstance(raw, str):
        if isinstance(default, bool):
            return raw.strip().lower() in ("1", "true", "yes", "on")
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
        return raw.strip()
    return raw


@dataclass
class ConicalABConfig:
    """Main configuration for conical-ab."""
    numerics: NumericsConfig = field(default_factory=NumericsConfig)
    root_find: RootFindConfig = field(default_factory=RootFindConfig)
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    physics: PhysicsConfig = field(default_factory=PhysicsConfig)
    execution: ExecutionConfig = field(default_factory=ExecutionConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)

    @classmethod
    def from_env(cls) -> 'ConicalABConfig':
        """
        Load configuration from environment variables.

        Variables are prefixed with CONICAL_AB_ followed by section and field,
        e.g. CONICAL_AB_NUMERICS_SERIES_CUTOFF=10. CONICAL_AB_THREADS is a
        shorthand for the worker-thread count.

        Returns:
            ConicalABConfig instance
        """
        config = cls()
        for section, section_cls in _SECTIONS.items():
            target = getattr(config, section)
            for f in fields(section_cls):
                env_name = f"{ENV_PREFIX}{section.upper()}_{f.name.upper()}"
                if os.getenv(env_name):
                    setattr(target, f.name, _coerce(section_cls, f.name, os.getenv(env_name)))
        if os.getenv(f"{ENV_PREFIX}THREADS"):
            config.execution.threads = int(os.getenv(f"{ENV_PREFIX}THREADS"))
        if os.getenv(f"{ENV_PREFIX}LOG_LEVEL"):
            config.logging.level = os.getenv(f"{ENV_PREFIX}LOG_LEVEL")
        return config

    def apply_overrides(self, flat: Dict[str, Any]) -> Dict[str, Any]:
        """
        Apply dotted ``section.field`` entries from a flat mapping.

        Returns:
            The remaining (non-dotted) entries, i.e. command parameters
        """
        remaining = {}
        for key, raw in flat.items():
            if "." not in key:
                remaining[key] = raw
                continue
            section, name = key.split(".", 1)
            section_cls = _SECTIONS.get(section)
            if section_cls is None or name not in {f.name for f in fields(section_cls)}:
                raise ValueError(f"Unknown configuration key: {key}")
            setattr(getattr(self, section), name, _coerce(section_cls, name, raw))
        return remaining

    def to_dict(self) -> Dict[str, Any]:
        """
        Convert configuration to dictionary.

        Returns:
            Configuration as dictionary
        """
        return {section: asdict(getattr(self, section)) for section in _SECTIONS}

    def validate(self) -> bool:
        """
        Validate configuration values.

        Returns:
            True if valid

        Raises:
            ValueError: If configuration is invalid
        """
        # builds the policy, which checks its own invariants
        self.numerics.to_policy()

        if not 0 < self.root_find.rel_tol < 1:
            raise ValueError(f"Root-find rel_tol must lie in (0, 1): {self.root_find.rel_tol}")
        if self.root_find.max_iter < 1:
            raise ValueError(f"Root-find max_iter must be >= 1: {self.root_find.max_iter}")
        if self.root_find.growth_factor <= 1:
            raise ValueError(f"Bracket growth factor must be > 1: {self.root_find.growth_factor}")

        if self.quadrature.tol <= 0 or self.quadrature.index_tol <= 0:
            raise ValueError("Quadrature tolerances must be > 0")
        if self.quadrature.decades < 2:
            raise ValueError(f"Quadrature decades must be >= 2: {self.quadrature.decades}")

        if self.physics.mass <= 0:
            raise ValueError(f"Mass must be > 0: {self.physics.mass}")
        if self.physics.g_factor <= 0:
            raise ValueError(f"g-factor must be > 0: {self.physics.g_factor}")

        if self.execution.threads < 1:
            raise ValueError(f"Threads must be >= 1: {self.execution.threads}")
        if self.execution.scheduler not in ("threads", "sync"):
            raise ValueError(f"Unknown scheduler: {self.execution.scheduler}")

        if self.output.format not in ("csv", "json"):
            raise ValueError(f"Output format must be csv or json: {self.output.format}")
        if not 1 <= self.output.significant_digits <= 17:
            raise ValueError(f"Significant digits must lie in [1, 17]: {self.output.significant_digits}")

        logger.debug("Configuration validated successfully")
        return True


def read_run_file(path: str) -> Dict[str, str]:
    """
    Parse a line-oriented ``key = value`` run file.

    Blank lines and lines starting with ``#`` are ignored; inline ``#``
    comments are stripped.

    Args:
        path: File to read

    Returns:
        Mapping of keys to raw string values, in file order

    Raises:
        FileNotFoundError: If the file doesn't exist
        ValueError: On a line without ``=``
    """
    file_path = Path(path)
    if not file_path.exists():
        raise FileNotFoundError(f"Configuration file not found: {path}")

    entries: Dict[str, str] = {}
    with open(file_path, "r") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got '{line}'")
            key, value = (part.strip() for part in line.split("=", 1))
            if not key:
                raise ValueError(f"{path}:{lineno}: empty key")
            entries[key.replace("-", "_")] = value
    logger.debug(f"Read {len(entries)} entries from {path}")
    return entries


def split_run_file(path: Optional[str]) -> Tuple['ConicalABConfig', Dict[str, str]]:
    """Environment-based config updated from a run file, plus the command parameters it holds."""
    config = ConicalABConfig.from_env()
    params: Dict[str, str] = {}
    if path:
        params = config.apply_overrides(read_run_file(path))
    return config, params
