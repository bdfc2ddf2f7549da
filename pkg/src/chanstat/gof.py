"""Goodness of fit: one-sample KS test, Q-Q points and Q-Q correlation.

p-values come from the asymptotic Kolmogorov distribution even when the
hypothesized parameters were estimated from the same sample. That makes them
optimistic (the Lilliefors effect); no correction is applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .distributions import DistributionSpec, Family, cdf, quantile

DEFAULT_ALPHA = 0.05
_SERIES_TOL = 1e-12


@dataclass(frozen=True)
class GofReport:
    ks_d: float
    p_value: float
    qq_r: float
    n: int
    spec: DistributionSpec

    def __post_init__(self):
        if not 0.0 <= self.ks_d <= 1.0:
            raise ValueError(f"KS statistic out of range: {self.ks_d}")
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p-value out of range: {self.p_value}")

    def accepts(self, alpha: float = DEFAULT_ALPHA) -> bool:
        return self.p_value > alpha


@dataclass(frozen=True)
class FitResult:
    """One row of a fit table: what was fitted, to what, and how well.

    ``spec`` and ``gof`` are None when the fit failed; ``error`` then says why.
    """

    location: str
    scenario: str
    quantity: str  # "power" or "delay"
    family: Family
    n: int
    spec: Optional[DistributionSpec] = None
    gof: Optional[GofReport] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def p_value(self) -> Optional[float]:
        return None if self.gof is None else self.gof.p_value

    @property
    def qq_r(self) -> Optional[float]:
        return None if self.gof is None else self.gof.qq_r


def _as_data(data) -> np.ndarray:
    x = np.asarray(data, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("goodness-of-fit needs at least one data point")
    return x


def ks_statistic(data: Sequence[float], spec: DistributionSpec) -> float:
    """Kolmogorov-Smirnov distance between the sample ECDF and ``spec``'s CDF."""
    x = np.sort(_as_data(data))
    n = x.size
    f = np.asarray(cdf(spec, x), dtype=float)
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - f)
    d_minus = np.max(f - (i - 1) / n)
    return float(min(max(d_plus, d_minus, 0.0), 1.0))


def kolmogorov_sf(lam: float) -> float:
    """Survival function of the Kolmogorov distribution, P(K > lam).

    For lam >= 1 the alternating series 2 sum (-1)^(k-1) exp(-2 k^2 lam^2) is
    summed until terms drop below 1e-12. Below that it converges slowly, so
    the equivalent theta-function form
    1 - sqrt(2 pi)/lam * sum_{k odd} exp(-k^2 pi^2 / (8 lam^2)) is used.
    """
    if lam <= 0.0:
        return 1.0
    if lam < 1.0:
        total = 0.0
        k = 1
        while True:
            term = math.exp(-(k * k) * math.pi ** 2 / (8.0 * lam * lam))
            total += term
            if term < _SERIES_TOL:
                break
            k += 2
        p = 1.0 - math.sqrt(2.0 * math.pi) / lam * total
    else:
        p = 0.0
        k = 1
        while True:
            term = math.exp(-2.0 * k * k * lam * lam)
            p += term if k % 2 else -term
            if term < _SERIES_TOL:
                break
            k += 1
        p *= 2.0
    return min(max(p, 0.0), 1.0)


def ks_pvalue(d: float, n: int) -> float:
    """Asymptotic KS p-value for statistic d on n points."""
    if not 0.0 <= d <= 1.0:
        raise ValueError(f"KS statistic must lie in [0, 1], got {d}")
    if n < 1:
        raise ValueError("sample size must be at least 1")
    return kolmogorov_sf(math.sqrt(n) * d)


def ks_critical_value(n: int, alpha: float = DEFAULT_ALPHA) -> float:
    """Smallest d whose asymptotic p-value is at most ``alpha``."""
    lo, hi = 0.0, 1.0
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if ks_pvalue(mid, n) > alpha:
            lo = mid
        else:
            hi = mid
    return hi


def plotting_positions(n: int) -> np.ndarray:
    return (np.arange(1, n + 1) - 0.5) / n


def qq_points(data: Sequence[float], spec: DistributionSpec) -> np.ndarray:
    """(theoretical, empirical) quantile pairs as an ``(n, 2)`` array.

    Empirical quantiles are the sorted data; theoretical ones are taken at
    the plotting positions (i - 0.5) / n.
    """
    x = np.sort(_as_data(data))
    theo = np.atleast_1d(quantile(spec, plotting_positions(x.size)))
    return np.column_stack([theo, x])


def qq_correlation(points) -> float:
    """Pearson correlation between the two Q-Q coordinates."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 2:
        raise ValueError("Q-Q correlation needs at least two points")
    a = pts[:, 0] - pts[:, 0].mean()
    b = pts[:, 1] - pts[:, 1].mean()
    sa = math.sqrt(float(a @ a))
    sb = math.sqrt(float(b @ b))
    if not (sa > 0 and sb > 0) or not (math.isfinite(sa) and math.isfinite(sb)):
        raise ValueError("Q-Q correlation undefined for zero-variance coordinates")
    return float(min(max((a @ b) / (sa * sb), -1.0), 1.0))


def evaluate(data: Sequence[float], spec: DistributionSpec) -> GofReport:
    x = _as_data(data)
    d = ks_statistic(x, spec)
    return GofReport(ks_d=d, p_value=ks_pvalue(d, x.size),
                     qq_r=qq_correlation(qq_points(x, spec)), n=int(x.size), spec=spec)
