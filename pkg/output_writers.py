"""
CSV and JSON emitters for command results.

Both formats are deterministic: fixed key/column order, 17 significant
digits for floats, '\n' line endings. CSV files start with the units banner
as a comment line; JSON objects carry it as their first key.
"""
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Dict, IO, Iterable, List, Optional, Sequence

logger = logging.getLogger(__name__)

UNITS_BANNER = "# units: hbar=c=1"


def format_number(value: Any, digits: int = 17) -> str:
    """Render one CSV cell."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, f".{digits}g")
    if value is None:
        return ""
    return str(value)


def _json_value(value: Any) -> Any:
    """Map non-finite floats to strings; JSON has no literal for them."""
    if isinstance(value, float) and not math.isfinite(value):
        return format_number(value)
    if isinstance(value, dict):
        return {key: _json_value(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(item) for item in value]
    return value


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]],
               banner: str = UNITS_BANNER, digits: int = 17) -> str:
    """
    Render rows as CSV text.

    Args:
        header: Column names
        rows: Rows in output order, each the length of header
        banner: Comment line written first (empty string to omit)
        digits: Significant digits for floats

    Returns:
        CSV text ending with a newline
    """
    lines: List[str] = []
    if banner:
        lines.append(banner)
    lines.append(",".join(header))
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"Row has {len(row)} cells, header has {len(header)}")
        lines.append(",".join(format_number(cell, digits) for cell in row))
    return "\n".join(lines) + "\n"


def render_json(payload: Dict[str, Any], banner: str = UNITS_BANNER) -> str:
    """Render a JSON object with the units banner as its first key."""
    document: Dict[str, Any] = {}
    if banner:
        document["units"] = banner.lstrip("#").strip().split(":", 1)[-1].strip()
    document.update(payload)
    return json.dumps(_json_value(document), indent=2, allow_nan=False) + "\n"


class OutputWriter:
    """
    Destination for rendered results: a file path or standard output.

    Usage:
        with OutputWriter(path) as out:
            out.write(text)
    """

    def __init__(self, path: Optional[str] = None, stream: Optional[IO[str]] = None):
        self.path = Path(path) if path else None
        self._stream = stream
        self._handle: Optional[IO[str]] = None

    def __enter__(self) -> "OutputWriter":
        if self.path is not None:
            # newline="" keeps '\n' on every platform
            self._handle = open(self.path, "w", newline="", encoding="utf-8")
        return self

    def write(self, text: str):
        target = self._handle or self._stream or sys.stdout
        target.write(text)

    def __exit__(self, exc_type, exc_val, exc_tb):
        if self._handle is not None:
            self._handle.close()
            logger.info(f"Wrote {self.path}")
        self._handle = None


def emit(text: str, path: Optional[str] = None, stream: Optional[IO[str]] = None):
    """Write rendered text to path, or to stream / stdout when path is None."""
    with OutputWriter(path, stream) as out:
        out.write(text)
