"""Rank-frequency preparation, Pearson correlation and batch fit statistics."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence, TextIO

import numpy as np

from .constructions import MetaphorProfile
from .errors import FitError, LengthMismatch, ZeroVariance
from .fitting import PointSet, PowerLawFit, fit_power_law

VARIABLES = ("b", "foy", "frequency")


def rank_frequency(profile: MetaphorProfile) -> PointSet:
    """Construction frequencies against 1-based rank, most frequent first.

    Ties keep the profile's own construction order.
    """
    freqs = sorted((c.frequency for c in profile.constructions), reverse=True)
    return PointSet(tuple(float(r) for r in range(1, len(freqs) + 1)),
                    tuple(float(f) for f in freqs))


def pearson(xs: Sequence[float], ys: Sequence[float], names=("x", "y")) -> float:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape:
        raise LengthMismatch(f"series lengths differ: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise LengthMismatch("need at least two observations")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    for name, s in zip(names, (sxx, syy)):
        if s == 0.0:
            raise ZeroVariance(f"{name} has zero variance", name)
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


@dataclass(frozen=True)
class MetaphorRow:
    lemma: str
    b: float
    foy: int
    frequency: int


@dataclass(frozen=True)
class CorrelationMatrix:
    variables: tuple[str, ...]
    r: np.ndarray = field(compare=False)

    def __getitem__(self, pair: tuple[str, str]) -> float:
        i, j = (self.variables.index(v) for v in pair)
        return float(self.r[i, j])

    def to_csv(self, digits: int = 9) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["", *self.variables])
        for name, row in zip(self.variables, self.r):
            w.writerow([name, *(f"{v:.{digits}f}" for v in row)])
        return buf.getvalue()


def correlation_matrix(rows: Sequence[MetaphorRow]) -> CorrelationMatrix:
    if len(rows) < 2:
        raise LengthMismatch("need at least two rows to correlate")
    cols = {v: [getattr(row, v) for row in rows] for v in VARIABLES}
    n = len(VARIABLES)
    r = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = VARIABLES[i], VARIABLES[j]
            r[i, j] = r[j, i] = pearson(cols[a], cols[b], names=(a, b))
    return CorrelationMatrix(VARIABLES, r)


def read_table(stream: TextIO | str) -> list[MetaphorRow]:
    """Rows from a CSV with columns lemma, b, foy, frequency."""
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.DictReader(stream)
    missing = {"lemma", *VARIABLES} - set(reader.fieldnames or ())
    if missing:
        raise ValueError(f"table is missing columns: {sorted(missing)}")
    return [MetaphorRow(r["lemma"], float(r["b"]), int(r["foy"]), int(r["frequency"]))
            for r in reader]


def metaphor_row(profile: MetaphorProfile, fit: PowerLawFit) -> MetaphorRow:
    return MetaphorRow(profile.lemma, fit.b, profile.first_occurrence_year,
                       profile.total_instances)


@dataclass
class BatchFitSummary:
    fits: dict[str, PowerLawFit]
    errors: dict[str, str]

    @property
    def r_squared(self) -> list[float]:
        return [f.quality.r_squared for f in self.fits.values()]

    @property
    def mean_r_squared(self) -> float | None:
        rs = self.r_squared
        return float(np.mean(rs)) if rs else None

    @property
    def min_r_squared(self) -> float | None:
        return min(self.r_squared, default=None)

    @property
    def max_r_squared(self) -> float | None:
        return max(self.r_squared, default=None)


def batch_fit_summary(profiles: Sequence[MetaphorProfile], method: str = "nls") -> BatchFitSummary:
    """Power-law fit per profile; failures are recorded, not raised."""
    fits, errors = {}, {}
    for p in profiles:
        try:
            fits[p.lemma] = fit_power_law(rank_frequency(p), method)
        except FitError as exc:
            errors[p.lemma] = f"{type(exc).__name__}: {exc}"
    return BatchFitSummary(fits, errors)


def loglog_regression(x, y) -> tuple[float, float, float]:
    """OLS of ln y on ln x; returns (slope, intercept, R^2 in log space)."""
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    if len(lx) < 2 or np.ptp(lx) == 0:
        raise ZeroVariance("need at least two distinct x values", "x")
    slope, intercept = np.polyfit(lx, ly, 1)
    pred = intercept + slope * lx
    sst = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - float(np.sum((ly - pred) ** 2)) / sst if sst > 0 else 0.0
    return float(slope), float(intercept), r2
