"""Least-squares fits of the power law, the Menzerath-Altmann law and the logistic curve.

Models::

    power law        y = a * x**(-b)                 (b > 0 for decaying data)
    MA law (full)    y = A * x**b * exp(-c * x)
    MA law (trunc.)  y = A * x**b                    (b < 0 for decaying data)
    logistic         y = L / (1 + exp(-k * (x - x0)))

All fits minimise the sum of squared residuals on the raw scale with a damped
Gauss-Newton (Levenberg-Marquardt) iteration.  Goodness of fit is the
coefficient of determination about the mean of ``y``, also on the raw scale.

Note the sign conventions: ``PowerLawFit.b`` and ``MALawFit.b`` have opposite
signs for the same data.  Use :func:`power_to_ma` / :func:`ma_to_power` rather
than negating by hand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateData, NonPositiveY, NoConvergence, TooFewPoints

MAX_ITERATIONS = 200
REL_TOL = 1e-10
LAMBDA_INIT = 1e-3
LAMBDA_MAX = 1e16


@dataclass(frozen=True)
class PointSet:
    """Ordered (x, y) observations with strictly positive abscissae."""

    xs: tuple[float, ...]
    ys: tuple[float, ...]

    def __post_init__(self):
        if len(self.xs) != len(self.ys):
            raise ValueError("xs and ys differ in length")
        if any(not x > 0 for x in self.xs):
            raise ValueError("PointSet abscissae must be positive")

    @classmethod
    def from_pairs(cls, pairs) -> "PointSet":
        pairs = list(pairs)
        return cls(tuple(float(p[0]) for p in pairs), tuple(float(p[1]) for p in pairs))

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.xs, self.ys))

    def __len__(self) -> int:
        return len(self.xs)


@dataclass(frozen=True)
class FitQuality:
    r_squared: float
    sse: float
    n: int
    iterations: int
    converged: bool


@dataclass(frozen=True)
class PowerLawFit:
    a: float
    b: float
    quality: FitQuality
    method: str = "nls"

    model = "power"

    def __call__(self, x):
        return self.a * np.power(np.asarray(x, dtype=float), -self.b)

    @property
    def params(self) -> dict:
        return {"a": self.a, "b": self.b}


@dataclass(frozen=True)
class MALawFit:
    A: float
    b: float
    c: float
    truncated: bool
    quality: FitQuality

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.A * np.power(x, self.b) * np.exp(-self.c * x)

    @property
    def model(self) -> str:
        return "ma" if self.truncated else "ma_full"

    @property
    def params(self) -> dict:
        return {"A": self.A, "b": self.b, "c": self.c}


@dataclass(frozen=True)
class LogisticFit:
    L: float
    k: float
    x0: float
    quality: FitQuality

    model = "logistic"

    def __call__(self, x):
        return _logistic(np.asarray(x, dtype=float), self.L, self.k, self.x0)

    @property
    def params(self) -> dict:
        return {"L": self.L, "k": self.k, "x0": self.x0}


def _logistic(x, L, k, x0):
    # 1/(1+e^-z) without overflow for large |z|
    z = k * (x - x0)
    return L * np.where(z >= 0, 1.0 / (1.0 + np.exp(-np.abs(z))),
                        np.exp(-np.abs(z)) / (1.0 + np.exp(-np.abs(z))))


def r_squared(y, yhat) -> float:
    """1 - SSE/SST about the mean of y; 0.0 when y has no spread."""
    y = np.asarray(y, dtype=float)
    sse = float(np.sum((y - yhat) ** 2))
    sst = float(np.sum((y - y.mean()) ** 2))
    if sst == 0.0:
        return 0.0
    return 1.0 - sse / sst


def _as_points(data, minimum: int) -> tuple[np.ndarray, np.ndarray]:
    """Accept a PointSet, a sequence of (x, y) pairs, or an (x, y) tuple of arrays."""
    if hasattr(data, "xs") and hasattr(data, "ys"):
        x, y = data.xs, data.ys
    elif isinstance(data, tuple) and len(data) == 2 and np.ndim(data[0]) == 1:
        x, y = data
    else:
        arr = np.asarray(list(data), dtype=float)
        if arr.size == 0:
            arr = arr.reshape(0, 2)
        x, y = arr[:, 0], arr[:, 1]
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError("x and y must have the same length")
    if len(x) < minimum:
        raise TooFewPoints(f"need at least {minimum} points, got {len(x)}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise DegenerateData("non-finite coordinates")
    return x, y


@dataclass(frozen=True)
class _LMResult:
    params: np.ndarray
    sse: float
    iterations: int
    converged: bool


def levenberg_marquardt(residual_jac: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]],
                        p0: Sequence[float], max_iter: int = MAX_ITERATIONS,
                        rel_tol: float = REL_TOL, sse_floor: float = 0.0) -> _LMResult:
    """Minimise ||r(p)||^2.

    ``residual_jac(p)`` returns the residual vector ``y - f(p)`` and the
    Jacobian of ``f`` with respect to ``p``.  Marquardt's diagonal scaling is
    used; the damping factor is multiplied by 10 after a rejected step and
    divided by 10 after an accepted one.  Stops when an accepted step improves
    the SSE by less than ``rel_tol`` relatively, when the SSE drops to
    ``sse_floor`` or below, or when the damping saturates (no descent direction
    left, i.e. a stationary point).
    """
    p = np.asarray(p0, dtype=float).copy()
    r, J = residual_jac(p)
    sse = float(r @ r)
    lam = LAMBDA_INIT
    if not np.isfinite(sse):
        return _LMResult(p, sse, 0, False)

    for it in range(1, max_iter + 1):
        if sse <= sse_floor:
            return _LMResult(p, sse, it - 1, True)
        JtJ = J.T @ J
        g = J.T @ r
        diag = np.diag(JtJ).copy()
        diag[diag <= 0] = 1e-12 * max(1.0, float(diag.max(initial=0.0)))
        accepted = False
        while lam <= LAMBDA_MAX:
            try:
                step = np.linalg.solve(JtJ + lam * np.diag(diag), g)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            p_new = p + step
            r_new, J_new = residual_jac(p_new)
            sse_new = float(r_new @ r_new)
            if np.isfinite(sse_new) and sse_new <= sse:
                accepted = True
                break
            lam *= 10.0
        if not accepted:
            return _LMResult(p, sse, it, True)
        improvement = sse - sse_new
        p, r, J = p_new, r_new, J_new
        sse_old, sse = sse, sse_new
        lam = max(lam / 10.0, 1e-15)
        if improvement <= rel_tol * sse_old:
            return _LMResult(p, sse, it, True)
    return _LMResult(p, sse, max_iter, False)


def _floor(y) -> float:
    # residual energy indistinguishable from rounding noise in y
    return 1e-28 * float(np.sum(np.asarray(y) ** 2))


def _quality(y, yhat, lm: _LMResult) -> FitQuality:
    yhat = np.asarray(yhat, dtype=float)
    sse = float(np.sum((y - yhat) ** 2))
    return FitQuality(r_squared=r_squared(y, yhat), sse=sse, n=len(y),
                      iterations=lm.iterations, converged=lm.converged)


def _ols(design: np.ndarray, target: np.ndarray) -> np.ndarray:
    if np.linalg.matrix_rank(design) < design.shape[1]:
        raise DegenerateData("design matrix is rank deficient (repeated x values?)")
    coef, *_ = np.linalg.lstsq(design, target, rcond=None)
    return coef


def loglog_ols(x, y) -> tuple[float, float]:
    """Closed-form (a, b) of y = a x^-b from OLS on (ln x, ln y)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x <= 0):
        raise DegenerateData("power-law abscissae must be positive")
    if np.any(y <= 0):
        raise NonPositiveY("log-log regression needs y > 0")
    design = np.column_stack([np.ones_like(x), np.log(x)])
    intercept, slope = _ols(design, np.log(y))
    return float(np.exp(intercept)), float(-slope)


def fit_power_law(data, method: str = "nls", require_convergence: bool = False) -> PowerLawFit:
    """Fit ``y = a x^-b``.

    ``method="loglog"`` is ordinary least squares on the log scale;
    ``method="nls"`` refines that estimate on the raw scale.  R^2 is reported
    on the raw scale either way.
    """
    x, y = _as_points(data, 3)
    if np.any(x <= 0):
        raise DegenerateData("power-law abscissae must be positive")
    if np.ptp(x) == 0:
        raise DegenerateData("all x values are equal")

    if method == "loglog":
        a, b = loglog_ols(x, y)
        yhat = a * x ** -b
        lm = _LMResult(np.array([a, b]), float(np.sum((y - yhat) ** 2)), 0, True)
        return PowerLawFit(a, b, _quality(y, yhat, lm), method="loglog")
    if method != "nls":
        raise ValueError(f"unknown method {method!r}")

    try:
        a0, b0 = loglog_ols(x, y)
    except NonPositiveY:
        a0, b0 = float(np.max(y)), 1.0
        if a0 <= 0:
            raise NonPositiveY("no positive y value to anchor the fit") from None
    lnx = np.log(x)

    def residual_jac(p):
        f = np.exp(p[0] - p[1] * lnx)
        return y - f, np.column_stack([f, -f * lnx])

    lm = levenberg_marquardt(residual_jac, [math.log(a0), b0], sse_floor=_floor(y))
    a, b = float(math.exp(lm.params[0])), float(lm.params[1])
    fit = PowerLawFit(a, b, _quality(y, a * x ** -b, lm), method="nls")
    if require_convergence and not lm.converged:
        raise NoConvergence("power-law fit did not converge", fit)
    return fit


def power_to_ma(fit: PowerLawFit) -> MALawFit:
    return MALawFit(A=fit.a, b=-fit.b, c=0.0, truncated=True, quality=fit.quality)


def ma_to_power(fit: MALawFit) -> PowerLawFit:
    if not fit.truncated:
        raise ValueError("only the truncated MA law is a power law")
    return PowerLawFit(a=fit.A, b=-fit.b, quality=fit.quality)


def fit_ma_law(data, truncated: bool = True, require_convergence: bool = False) -> MALawFit:
    """Fit the Menzerath-Altmann law; ``truncated=True`` pins c = 0."""
    if truncated:
        return power_to_ma(fit_power_law(data, "nls", require_convergence))

    x, y = _as_points(data, 3)
    if np.any(x <= 0):
        raise DegenerateData("Menzerath-Altmann abscissae must be positive")
    lnx = np.log(x)
    if np.all(y > 0):
        # ln y = ln A + b ln x - c x is linear in (ln A, b, c)
        design = np.column_stack([np.ones_like(x), lnx, -x])
        p0 = _ols(design, np.log(y))
    else:
        if np.max(y) <= 0:
            raise NonPositiveY("no positive y value to anchor the fit")
        if np.ptp(x) == 0:
            raise DegenerateData("all x values are equal")
        p0 = np.array([math.log(np.max(y)), 0.0, 0.0])

    def residual_jac(p):
        f = np.exp(p[0] + p[1] * lnx - p[2] * x)
        return y - f, np.column_stack([f, f * lnx, -x * f])

    lm = levenberg_marquardt(residual_jac, p0, sse_floor=_floor(y))
    A, b, c = float(math.exp(lm.params[0])), float(lm.params[1]), float(lm.params[2])
    yhat = A * x ** b * np.exp(-c * x)
    fit = MALawFit(A, b, c, False, _quality(y, yhat, lm))
    if require_convergence and not lm.converged:
        raise NoConvergence("MA-law fit did not converge", fit)
    return fit


def _logistic_start(x, y) -> np.ndarray:
    order = np.argsort(x, kind="stable")
    xs, ys = x[order], y[order]
    L = float(ys.max())
    mid = int(np.argmin(np.abs(ys - L / 2)))
    lo, hi = max(mid - 1, 0), min(mid + 1, len(xs) - 1)
    slope = (ys[hi] - ys[lo]) / (xs[hi] - xs[lo]) if xs[hi] > xs[lo] else 0.0
    k = 4.0 * slope / L
    if k <= 0:
        k = 4.0 / max(np.ptp(xs), 1e-12)
    return np.array([L, k, xs[mid]])


def fit_logistic(data, require_convergence: bool = False) -> LogisticFit:
    """Fit a rising S-curve.

    A series with no spread, or a fit that collapses to k ~ 0 (a flat line),
    is reported with ``converged=False``: no sigmoid was found.
    """
    x, y = _as_points(data, 4)
    if np.any(y < 0):
        raise DegenerateData("logistic fit expects non-negative y")
    if np.ptp(x) == 0:
        raise DegenerateData("all x values are equal")
    if np.ptp(y) == 0:
        if y[0] == 0:
            raise DegenerateData("all y values are zero")
        L = float(2 * y[0])
        q = FitQuality(r_squared(y, np.full_like(y, y[0])), 0.0, len(y), 0, False)
        fit = LogisticFit(L, 0.0, float(np.mean(x)), q)
        if require_convergence:
            raise NoConvergence("flat series has no sigmoid", fit)
        return fit

    def residual_jac(p):
        L, k, x0 = p
        s = _logistic(x, 1.0, k, x0)
        f = L * s
        ds = L * s * (1 - s)
        return y - f, np.column_stack([s, ds * (x - x0), -ds * k])

    lm = levenberg_marquardt(residual_jac, _logistic_start(x, y), sse_floor=_floor(y))
    L, k, x0 = (float(v) for v in lm.params)
    converged = bool(lm.converged and abs(k) * np.ptp(x) > 1e-8)
    fit = LogisticFit(L, k, x0, _quality(y, _logistic(x, L, k, x0),
                                         _LMResult(lm.params, lm.sse, lm.iterations, converged)))
    if require_convergence and not converged:
        raise NoConvergence("logistic fit did not converge", fit)
    return fit


def sample_curve(fit, xs) -> list[tuple[float, float]]:
    xs = np.asarray(list(xs), dtype=float)
    if xs.size == 0:
        raise ValueError("xs must be non-empty")
    if not isinstance(fit, LogisticFit) and np.any(xs <= 0):
        raise ValueError("power and MA curves are defined for x > 0 only")
    ys = fit(xs)
    return [(float(a), float(b)) for a, b in zip(xs, ys)]


def power_family(a: float, bs: Sequence[float], xs) -> dict[float, list[tuple[float, float]]]:
    """Curves y = a x^-b for several exponents, as used for family plots."""
    q = FitQuality(1.0, 0.0, 0, 0, True)
    return {float(b): sample_curve(PowerLawFit(a, b, q), xs) for b in bs}


def fit_to_dict(fit) -> dict:
    q = fit.quality
    return {
        "model": fit.model,
        "params": {k: float(v) for k, v in fit.params.items()},
        "r_squared": q.r_squared,
        "sse": q.sse,
        "n": q.n,
        "converged": q.converged,
        "iterations": q.iterations,
    }


FITTERS = {
    "power": lambda pts: fit_power_law(pts, "nls"),
    "ma": lambda pts: fit_ma_law(pts, truncated=True),
    "ma_full": lambda pts: fit_ma_law(pts, truncated=False),
    "logistic": fit_logistic,
}
