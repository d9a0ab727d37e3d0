# coding: utf-8
"""Empirical growth of path-faithful checking on unrolled loops.

The probe times check_pfds on the faithful_loop example schema with
criterion paths of ``k`` iterations and fits the slope of log time against
log path length. Shared term ids keep each evaluation step constant-time, so
the slope stays well below quadratic even though the printed terms grow.
"""

import logging
import time
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy import stats

from src.gadgets.corpus import faithful_loop_path, faithful_loop_schema
from src.herbrand.terms import TermStore
from src.schema.model import delete_symbols
from src.slicing.checkers import SliceCriterion, check_pfds

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScalingReport:
    """Timings and fitted exponent.

    Attributes:
        iterations: Loop iteration counts measured.
        path_lengths: Criterion path length per count.
        seconds: Best-of-``repeats`` wall time per count (check on S plus one rejected quotient).
        exponent: Slope of the log-log fit.
    """

    iterations: Tuple[int, ...]
    path_lengths: Tuple[int, ...]
    seconds: Tuple[float, ...]
    exponent: float

    def lines(self) -> Tuple[str, ...]:
        measured = zip(self.iterations, self.path_lengths, self.seconds)
        rows = [f"k={k} len={n} seconds={s:.6f}" for k, n, s in measured]
        rows.append(f"exponent={self.exponent:.3f}")
        return tuple(rows)


def measure_pfds_scaling(ks: Sequence[int] = (10, 100, 1000), repeats: int = 3) -> ScalingReport:
    """Time check_pfds on faithful_loop-style criteria with ``k`` loop iterations.

    Raises:
        ValueError: If fewer than two iteration counts are given.
    """
    if len(ks) < 2:
        raise ValueError("at least two iteration counts are needed for a fit")
    schema = faithful_loop_schema()
    without_h = delete_symbols(schema, ["H"])
    lengths = []
    timings = []
    for k in ks:
        path = faithful_loop_path(k)
        best = float("inf")
        for _ in range(max(repeats, 1)):
            criterion = SliceCriterion.build(schema, path, ("v",), "end", TermStore())
            started = time.perf_counter()
            check_pfds(criterion, schema)
            check_pfds(criterion, without_h)
            best = min(best, time.perf_counter() - started)
        lengths.append(len(path))
        timings.append(best)
        _logger.debug("k=%d len=%d %.6fs", k, len(path), best)

    x = np.log(np.asarray(lengths, dtype=float))
    y = np.log(np.maximum(np.asarray(timings, dtype=float), 1e-9))
    fit = stats.linregress(x, y)
    report = ScalingReport(tuple(ks), tuple(lengths), tuple(timings), float(fit.slope))
    _logger.info("check_pfds scaling exponent %.3f over path lengths %s", report.exponent, lengths)
    return report


__all__ = ["ScalingReport", "measure_pfds_scaling"]
