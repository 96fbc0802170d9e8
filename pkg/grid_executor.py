"""Ordered fan-out of grid evaluations on a dask scheduler."""
import logging
import time
from dataclasses import dataclass
from typing import Any, Callable, List, Optional, Sequence

import dask
from dask import delayed

from error_handling import ConicalABError, ErrorAggregator

logger = logging.getLogger(__name__)


@dataclass
class GridOutcome:
    """Value or error of one grid point, in grid order."""
    index: int
    point: Any
    value: Any = None
    error: Optional[Exception] = None

    @property
    def ok(self) -> bool:
        return self.error is None


def _evaluate(func: Callable, index: int, point: Any, capture: bool) -> GridOutcome:
    """Run func on one point; numerical and domain failures become part of the outcome."""
    try:
        return GridOutcome(index=index, point=point, value=func(point))
    except ConicalABError as e:
        if not capture:
            raise
        return GridOutcome(index=index, point=point, error=e)


class GridExecutor:
    """
    Evaluate a function over a list of grid points.

    Points run as dask.delayed tasks on the threaded scheduler; results are
    returned in grid order, so the output does not depend on the thread count
    or on completion order. threads=1 runs synchronously.
    """

    def __init__(self, threads: int = 1, scheduler: str = "threads"):
        """
        Initialize executor.

        Args:
            threads: Worker threads (>= 1)
            scheduler: "threads" or "sync"
        """
        if threads < 1:
            raise ValueError(f"Threads must be >= 1: {threads}")
        self.threads = threads
        self.scheduler = "sync" if threads == 1 else scheduler
        self.errors = ErrorAggregator()

    def map(self, func: Callable, points: Sequence[Any], capture_errors: bool = True) -> List[GridOutcome]:
        """
        Evaluate func on every point.

        Args:
            func: Pure function of one grid point
            points: Grid points in output order
            capture_errors: Record ConicalABError per point instead of raising

        Returns:
            GridOutcome list aligned with points
        """
        start_time = time.time()
        tasks = [delayed(_evaluate)(func, i, p, capture_errors) for i, p in enumerate(points)]

        if self.scheduler == "sync":
            outcomes = list(dask.compute(*tasks, scheduler="sync"))
        else:
            outcomes = list(dask.compute(*tasks, scheduler="threads", num_workers=self.threads))

        outcomes.sort(key=lambda outcome: outcome.index)
        for outcome in outcomes:
            if outcome.error is not None:
                self.errors.add_error(outcome.error, context=f"point {outcome.point}")

        logger.debug(f"Evaluated {len(points)} grid points on {self.threads} thread(s) "
                     f"in {time.time() - start_time:.3f}s")
        return outcomes

    def values(self, func: Callable, points: Sequence[Any]) -> List[Any]:
        """Like map, but raise the first error and return bare values."""
        return [outcome.value for outcome in self.map(func, points, capture_errors=False)]

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.errors.clear()
