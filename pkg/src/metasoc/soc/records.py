"""Avalanche records and their size distribution."""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from dataclasses import asdict, dataclass
from typing import Sequence

from ..errors import EmptyInput
from ..fitting import PointSet
from ..stats import loglog_regression


@dataclass(frozen=True)
class AvalancheRecord:
    start_step: int
    size: int
    duration: int

    def __post_init__(self):
        if self.size < 0 or self.duration < 0:
            raise ValueError("avalanche size and duration must be non-negative")
        if (self.size == 0) != (self.duration == 0):
            raise ValueError("size is zero exactly when duration is zero")


def avalanche_distribution(records: Sequence[AvalancheRecord], binning: str = "linear") -> PointSet:
    """Histogram of non-zero avalanche sizes.

    ``linear``: (size, count) for every observed size.
    ``log2``: sizes pooled into [2^k, 2^(k+1)); y is the probability density
    (count / bin width / number of non-zero avalanches) and x is the
    geometric mean of the smallest and largest integer in the bin.
    """
    sizes = [r.size for r in records if r.size > 0]
    if not sizes:
        raise EmptyInput("no avalanche of non-zero size")
    counts = Counter(sizes)
    if binning == "linear":
        keys = sorted(counts)
        return PointSet(tuple(float(s) for s in keys), tuple(float(counts[s]) for s in keys))
    if binning != "log2":
        raise ValueError(f"unknown binning {binning!r}")

    binned = Counter()
    for s, n in counts.items():
        binned[s.bit_length() - 1] += n
    total = len(sizes)
    xs, ys = [], []
    for k in sorted(binned):
        lo = 1 << k
        width = lo
        xs.append(math.sqrt(lo * (2 * lo - 1)))
        ys.append(binned[k] / width / total)
    return PointSet(tuple(xs), tuple(ys))


def size_exponent(records: Sequence[AvalancheRecord], drop_tail: int = 2) -> tuple[float, float]:
    """Log-log slope and R^2 of the log2-binned size density.

    The last ``drop_tail`` bins, where the finite system size cuts the
    distribution off, are left out of the regression.
    """
    pts = avalanche_distribution(records, "log2")
    n = len(pts) - drop_tail
    if n < 2:
        raise EmptyInput("too few populated bins for a slope")
    slope, _, r2 = loglog_regression(pts.xs[:n], pts.ys[:n])
    return slope, r2


def records_csv(records: Sequence[AvalancheRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["start_step", "size", "duration"])
    for r in records:
        w.writerow([r.start_step, r.size, r.duration])
    return buf.getvalue()


def records_json(records: Sequence[AvalancheRecord]) -> str:
    return json.dumps([asdict(r) for r in records]) + "\n"


def histogram_csv(points: PointSet) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["size", "value"])
    for x, y in points.points:
        w.writerow([repr(x), repr(y)])
    return buf.getvalue()
