"""Parametric distributions under the loc/scale/shape convention.

A :class:`DistributionSpec` describes ``X = loc + scale * Y`` where ``Y``
follows the family's unit form with the given shape parameters, so the
density is ``f(x) = f0((x - loc) / scale; shapes) / scale``. Fitted values
from scipy-style tables (loc, scale, shape) load directly.

Sampling is by inversion of the quantile function for every family.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import special
from .rng import make_rng, open_uniforms

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


class Family(str, enum.Enum):
    NORMAL = "normal"
    EXPONENTIAL = "exponential"
    LOGNORMAL = "lognormal"
    RAYLEIGH = "rayleigh"
    RICIAN = "rician"
    NAKAGAMI = "nakagami"
    GAMMA = "gamma"
    BETA = "beta"
    LOGLOGISTIC = "loglogistic"
    WEIBULL = "weibull"

    @classmethod
    def parse(cls, name) -> "Family":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("-", "").replace("_", "").replace(" ", "")
        key = {"rice": "rician", "fisk": "loglogistic", "norm": "normal",
               "expon": "exponential", "lognorm": "lognormal"}.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown distribution family {name!r}") from None

    @property
    def arity(self) -> int:
        return len(_UNITS[self].shape_names)

    @property
    def shape_names(self) -> tuple:
        return _UNITS[self].shape_names

    @property
    def label(self) -> str:
        return _LABELS[self]


_LABELS = {
    Family.NORMAL: "Normal", Family.EXPONENTIAL: "Exponential",
    Family.LOGNORMAL: "Log-Normal", Family.RAYLEIGH: "Rayleigh",
    Family.RICIAN: "Rician", Family.NAKAGAMI: "Nakagami", Family.GAMMA: "Gamma",
    Family.BETA: "Beta", Family.LOGLOGISTIC: "Log Logistic", Family.WEIBULL: "Weibull",
}


def _xlogy(a, y):
    """a * log(y) with the convention 0 * log(0) = 0."""
    y = np.asarray(y, dtype=float)
    if a == 0:
        return np.zeros_like(y)
    with np.errstate(divide="ignore"):
        return a * np.log(y)


def _invert(cdf: Callable, pdf: Callable, q: np.ndarray, x0: np.ndarray,
            lower: float = 0.0, upper: float = math.inf, maxiter: int = 300) -> np.ndarray:
    """Solve cdf(x) = q elementwise by bracketed Newton iteration.

    ``cdf`` and ``pdf`` take 1-d arrays. The bracket starts at the support
    bounds; an infinite upper bound is replaced by expanding from ``x0``.
    """
    n = q.size
    lo = np.full(n, lower, dtype=float)
    hi = np.full(n, upper, dtype=float)
    x = np.array(x0, dtype=float)
    if math.isinf(upper):
        h = np.maximum(x, 1.0)
        pending = np.ones(n, dtype=bool)
        for _ in range(2000):
            idx = np.nonzero(pending)[0]
            if idx.size == 0:
                break
            ok = cdf(h[idx]) >= q[idx]
            pending[idx[ok]] = False
            grow = idx[~ok]
            lo[grow] = np.maximum(lo[grow], h[grow])
            h[grow] = 2.0 * h[grow] + 1.0
        hi = h
    bad = ~((x > lo) & (x < hi))
    x[bad] = 0.5 * (lo[bad] + hi[bad])
    active = np.ones(n, dtype=bool)
    for _ in range(maxiter):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        xi = x[idx]
        f = cdf(xi) - q[idx]
        exact = f == 0.0
        below = f < 0.0
        lo[idx[below]] = xi[below]
        hi[idx[~below & ~exact]] = xi[~below & ~exact]
        dens = pdf(xi)
        with np.errstate(divide="ignore", invalid="ignore"):
            xn = xi - f / dens
        l, h = lo[idx], hi[idx]
        outside = ~np.isfinite(xn) | (xn <= l) | (xn >= h)
        xn[outside] = 0.5 * (l[outside] + h[outside])
        tol = 4.0 * np.finfo(float).eps * np.maximum(np.abs(xn), np.finfo(float).tiny)
        done = exact | (np.abs(xn - xi) <= tol) | (h - l <= tol)
        x[idx[~exact]] = xn[~exact]
        active[idx[done]] = False
    return x


class _Unit:
    """Unit-form density family (loc 0, scale 1)."""

    shape_names: tuple = ()
    lower: float = 0.0
    upper: float = math.inf

    def check(self, shapes) -> None:
        for name, value in zip(self.shape_names, shapes):
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"shape {name} must be positive and finite, got {value}")

    def logpdf(self, y, s):
        raise NotImplementedError

    def cdf(self, y, s):
        raise NotImplementedError

    def ppf(self, q, s):
        return _invert(lambda y: self.cdf(y, s), lambda y: np.exp(self.logpdf(y, s)),
                       q, self.guess(q, s), self.lower, self.upper)

    def guess(self, q, s):
        return np.ones_like(q)

    def mean(self, s) -> Optional[float]:
        raise NotImplementedError


class _Normal(_Unit):
    lower = -math.inf

    def logpdf(self, y, s):
        return -0.5 * y * y - _LOG_SQRT_2PI

    def cdf(self, y, s):
        return special.ndtr(y)

    def ppf(self, q, s):
        return special.ndtri(q)

    def mean(self, s):
        return 0.0


class _Exponential(_Unit):
    def logpdf(self, y, s):
        return -y

    def cdf(self, y, s):
        return -np.expm1(-y)

    def ppf(self, q, s):
        return -np.log1p(-q)

    def mean(self, s):
        return 1.0


class _LogNormal(_Unit):
    shape_names = ("sigma",)

    def logpdf(self, y, s):
        (sigma,) = s
        with np.errstate(divide="ignore"):
            ly = np.log(y)
        out = -0.5 * (ly / sigma) ** 2 - ly - math.log(sigma) - _LOG_SQRT_2PI
        return np.where(y > 0, out, -np.inf)

    def cdf(self, y, s):
        with np.errstate(divide="ignore"):
            return special.ndtr(np.log(y) / s[0])

    def ppf(self, q, s):
        return np.exp(s[0] * special.ndtri(q))

    def mean(self, s):
        return math.exp(0.5 * s[0] ** 2)


class _Rayleigh(_Unit):
    def logpdf(self, y, s):
        with np.errstate(divide="ignore"):
            return np.log(y) - 0.5 * y * y

    def cdf(self, y, s):
        return -np.expm1(-0.5 * y * y)

    def ppf(self, q, s):
        return np.sqrt(-2.0 * np.log1p(-q))

    def mean(self, s):
        return math.sqrt(math.pi / 2.0)


class _Rician(_Unit):
    shape_names = ("b",)

    def check(self, shapes):
        (b,) = shapes
        if not (math.isfinite(b) and b >= 0):
            raise ValueError(f"shape b must be non-negative and finite, got {b}")

    def logpdf(self, y, s):
        (b,) = s
        with np.errstate(divide="ignore"):
            out = np.log(y) - 0.5 * (y - b) ** 2 + np.log(special.i0e(b * y))
        return np.where(y > 0, out, -np.inf)

    def cdf(self, y, s):
        # Y^2 is noncentral chi-square (2 dof, noncentrality b^2): Poisson mixture of
        # regularized lower incomplete gammas.
        (b,) = s
        y = np.asarray(y, dtype=float)
        half = 0.5 * y * y
        mu = 0.5 * b * b
        if mu == 0.0:
            return -np.expm1(-half)
        spread = 12.0 * math.sqrt(mu)
        j0 = max(0, int(mu - spread) - 5)
        j1 = int(mu + spread) + 40
        # P(j+1, x) = P(j, x) - x^j e^-x / j!, started from one direct evaluation.
        p = np.atleast_1d(special.gammainc(j0 + 1.0, half)).astype(float)
        with np.errstate(divide="ignore"):
            log_half = np.log(half)
        out = np.zeros_like(p)
        for j in range(j0, j1 + 1):
            if j > j0:
                p = np.maximum(p - np.exp(-half + j * log_half - math.lgamma(j + 1.0)), 0.0)
            w = math.exp(-mu + j * math.log(mu) - math.lgamma(j + 1.0))
            out += w * p
        return np.clip(out, 0.0, 1.0).reshape(np.shape(y))

    def guess(self, q, s):
        (b,) = s
        return np.sqrt(-2.0 * np.log1p(-q) + b * b)

    def mean(self, s):
        (b,) = s
        h = 0.25 * b * b
        lag = (1.0 + 2.0 * h) * special.i0e(h) + 2.0 * h * special.i1e(h)
        return math.sqrt(math.pi / 2.0) * lag


class _Gamma(_Unit):
    shape_names = ("a",)

    def logpdf(self, y, s):
        (a,) = s
        out = _xlogy(a - 1.0, y) - y - math.lgamma(a)
        return np.where(y >= 0, out, -np.inf)

    def cdf(self, y, s):
        return special.gammainc(s[0], np.maximum(y, 0.0))

    def guess(self, q, s):
        (a,) = s
        z = special.ndtri(q)
        wh = a * (1.0 - 1.0 / (9.0 * a) + z / (3.0 * math.sqrt(a))) ** 3
        small = np.exp((np.log(q) + math.lgamma(a + 1.0)) / a)
        return np.where((wh > 0) & (a >= 1.0), wh, small)

    def mean(self, s):
        return s[0]


class _Nakagami(_Unit):
    shape_names = ("nu",)

    def logpdf(self, y, s):
        (nu,) = s
        out = (math.log(2.0) + nu * math.log(nu) - math.lgamma(nu)
               + _xlogy(2.0 * nu - 1.0, y) - nu * y * y)
        return np.where(y >= 0, out, -np.inf)

    def cdf(self, y, s):
        (nu,) = s
        return special.gammainc(nu, nu * np.asarray(y, dtype=float) ** 2)

    def ppf(self, q, s):
        (nu,) = s
        return np.sqrt(_UNITS[Family.GAMMA].ppf(q, (nu,)) / nu)

    def mean(self, s):
        (nu,) = s
        return math.exp(math.lgamma(nu + 0.5) - math.lgamma(nu)) / math.sqrt(nu)


class _Beta(_Unit):
    shape_names = ("a", "b")
    upper = 1.0

    def logpdf(self, y, s):
        a, b = s
        lbeta = math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)
        y = np.asarray(y, dtype=float)
        out = _xlogy(a - 1.0, y) + _xlogy(b - 1.0, 1.0 - y) - lbeta
        return np.where((y >= 0) & (y <= 1), out, -np.inf)

    def cdf(self, y, s):
        a, b = s
        return special.betainc(a, b, np.clip(y, 0.0, 1.0))

    def guess(self, q, s):
        a, b = s
        return np.full_like(q, a / (a + b))

    def mean(self, s):
        a, b = s
        return a / (a + b)


class _LogLogistic(_Unit):
    shape_names = ("c",)

    def logpdf(self, y, s):
        (c,) = s
        with np.errstate(divide="ignore"):
            ly = np.log(y)
        out = math.log(c) + _xlogy(c - 1.0, y) - 2.0 * np.logaddexp(0.0, c * ly)
        return np.where(y >= 0, out, -np.inf)

    def cdf(self, y, s):
        (c,) = s
        with np.errstate(divide="ignore", over="ignore"):
            return 1.0 / (1.0 + np.exp(-c * np.log(y)))

    def ppf(self, q, s):
        return (q / (1.0 - q)) ** (1.0 / s[0])

    def mean(self, s):
        (c,) = s
        if c <= 1.0:
            return None
        return (math.pi / c) / math.sin(math.pi / c)


class _Weibull(_Unit):
    shape_names = ("c",)

    def logpdf(self, y, s):
        (c,) = s
        out = math.log(c) + _xlogy(c - 1.0, y) - np.asarray(y, dtype=float) ** c
        return np.where(y >= 0, out, -np.inf)

    def cdf(self, y, s):
        return -np.expm1(-np.asarray(y, dtype=float) ** s[0])

    def ppf(self, q, s):
        return (-np.log1p(-q)) ** (1.0 / s[0])

    def mean(self, s):
        return math.gamma(1.0 + 1.0 / s[0])


_UNITS = {
    Family.NORMAL: _Normal(), Family.EXPONENTIAL: _Exponential(),
    Family.LOGNORMAL: _LogNormal(), Family.RAYLEIGH: _Rayleigh(),
    Family.RICIAN: _Rician(), Family.NAKAGAMI: _Nakagami(), Family.GAMMA: _Gamma(),
    Family.BETA: _Beta(), Family.LOGLOGISTIC: _LogLogistic(), Family.WEIBULL: _Weibull(),
}


def _sig(value: float, digits: int = 6) -> float:
    return float(f"{value:.{digits}g}")


@dataclass(frozen=True)
class DistributionSpec:
    """A family plus its loc/scale/shape parameter vector."""

    family: Family
    loc: float
    scale: float
    shapes: tuple = ()

    def __post_init__(self):
        family = Family.parse(self.family)
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "loc", float(self.loc))
        object.__setattr__(self, "scale", float(self.scale))
        object.__setattr__(self, "shapes", tuple(float(s) for s in self.shapes))
        if not math.isfinite(self.loc):
            raise ValueError(f"loc must be finite, got {self.loc}")
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise ValueError(f"scale must be positive and finite, got {self.scale}")
        if len(self.shapes) != family.arity:
            raise ValueError(f"{family.value} takes {family.arity} shape parameter(s), "
                             f"got {len(self.shapes)}")
        _UNITS[family].check(self.shapes)

    @property
    def support(self) -> tuple:
        unit = _UNITS[self.family]
        return (self.loc + self.scale * unit.lower, self.loc + self.scale * unit.upper)

    def to_dict(self, digits: Optional[int] = 6) -> dict:
        r = (lambda v: _sig(v, digits)) if digits else float
        return {"family": self.family.value, "loc": r(self.loc), "scale": r(self.scale),
                "shapes": [r(s) for s in self.shapes]}

    @classmethod
    def from_dict(cls, d: dict) -> "DistributionSpec":
        return cls(d["family"], d["loc"], d["scale"], tuple(d.get("shapes", ())))

    # Convenience methods mirroring the module-level functions.
    def pdf(self, x):
        return pdf(self, x)

    def logpdf(self, x):
        return logpdf(self, x)

    def cdf(self, x):
        return cdf(self, x)

    def quantile(self, q):
        return quantile(self, q)

    def sample(self, n, seed):
        return sample(self, n, seed)

    def mean(self):
        return mean(self)


def _standardize(spec: DistributionSpec, x):
    x = np.asarray(x, dtype=float)
    return x, (x - spec.loc) / spec.scale


def _scalar_out(x, out):
    return float(out) if np.ndim(x) == 0 else out


def logpdf(spec: DistributionSpec, x):
    """Log density; -inf outside the support."""
    x, y = _standardize(spec, x)
    unit = _UNITS[spec.family]
    y1 = np.atleast_1d(y)
    with np.errstate(invalid="ignore"):
        out = unit.logpdf(y1, spec.shapes) - math.log(spec.scale)
    out = np.where((y1 < unit.lower) | (y1 > unit.upper), -np.inf, out)
    out = np.where(np.isnan(out) & ~np.isnan(y1), -np.inf, out)
    return _scalar_out(x, out.reshape(np.shape(y)))


def pdf(spec: DistributionSpec, x):
    """Density at x; 0 outside the support."""
    return _scalar_out(x, np.exp(logpdf(spec, x)))


def cdf(spec: DistributionSpec, x):
    """Cumulative distribution function, clipped to [0, 1]."""
    x, y = _standardize(spec, x)
    unit = _UNITS[spec.family]
    y1 = np.atleast_1d(y)
    out = np.empty(y1.shape)
    below = y1 <= unit.lower
    above = y1 >= unit.upper
    out[below] = 0.0
    out[above] = 1.0
    mid = ~(below | above)
    if mid.any():
        out[mid] = unit.cdf(y1[mid], spec.shapes)
    out = np.clip(out, 0.0, 1.0)
    return _scalar_out(x, out.reshape(np.shape(y)))


def quantile(spec: DistributionSpec, q):
    """Inverse CDF for probabilities strictly inside (0, 1)."""
    q = np.asarray(q, dtype=float)
    if not np.all((q > 0.0) & (q < 1.0)):
        raise ValueError("quantile probabilities must lie strictly inside (0, 1)")
    q1 = np.atleast_1d(q).ravel()
    y = _UNITS[spec.family].ppf(q1, spec.shapes)
    out = (spec.loc + spec.scale * y).reshape(q.shape)
    return _scalar_out(q, out)


def sample(spec: DistributionSpec, n: int, seed) -> np.ndarray:
    """Draw n variates by inversion; ``seed`` is an int or a Generator."""
    if n < 0:
        raise ValueError("sample count must be non-negative")
    if n == 0:
        return np.empty(0)
    u = open_uniforms(make_rng(seed), n)
    return np.asarray(quantile(spec, u), dtype=float)


def log_likelihood(spec: DistributionSpec, data: Sequence[float]) -> float:
    """Sum of log densities; -inf if any point lies outside the support."""
    data = np.asarray(data, dtype=float).ravel()
    if data.size == 0:
        raise ValueError("log-likelihood needs at least one data point")
    return float(np.sum(logpdf(spec, data)))


def mean(spec: DistributionSpec) -> Optional[float]:
    """Analytic mean, or None where it diverges (log-logistic with c <= 1)."""
    m = _UNITS[spec.family].mean(spec.shapes)
    if m is None:
        return None
    return spec.loc + spec.scale * m
