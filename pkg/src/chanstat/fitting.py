"""Maximum-likelihood fitting under the loc/scale/shape convention.

Normal and Exponential use their closed-form estimators. Every other family is
fitted numerically: the data are standardized to zero mean and unit standard
deviation, the negative mean log-likelihood is minimized with Nelder-Mead from
several moment- and quantile-based starting points, and the winner is mapped
back to data units. Working on standardized data makes the fit equivariant
under affine maps of the data.

Log-parameters are softly confined to magnitudes below 12, so a likelihood
that keeps improving toward a limiting family still yields a finite estimate.

For families with a lower support bound and a free location, the location is
kept at or below ``min(data) - eps`` with ``eps = 1e-9 * (max - min)``, since
the likelihood can grow without bound as the location approaches the sample
minimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from .distributions import DistributionSpec, Family, logpdf
from .rng import make_rng

_LN3 = math.log(3.0)
_EULER_GAMMA = 0.5772156649015329
# Location gaps below the sample minimum, in units of the sample standard deviation.
_LOC_GAPS = (0.01, 0.1, 0.5, 2.0, 8.0)
_SHAPE_FACTORS = (1.0, 0.25, 0.5, 2.0, 4.0)
# Log-parameters beyond this magnitude are penalized quadratically, so fits whose
# likelihood only improves toward a limiting family (e.g. Beta with an unbounded
# upper end) settle at a large but finite value instead of drifting forever.
_LOG_CAP = 12.0


class FitError(RuntimeError):
    """Raised when a fit cannot be produced; ``best`` holds the best spec seen, if any."""

    def __init__(self, message: str, best: Optional[DistributionSpec] = None):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class FitOptions:
    fixed_loc: Optional[float] = None
    tolerance: float = 1e-8
    max_evaluations: int = 10_000
    seed: int = 0
    extra_starts: int = 2

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_evaluations < 1:
            raise ValueError("max_evaluations must be at least 1")


def fit_mle(family, data: Sequence[float], opts: FitOptions = FitOptions()) -> DistributionSpec:
    """Maximum-likelihood estimate of ``family`` parameters for ``data``.

    Raises
    ------
    FitError
        If there are fewer than ``3 + arity`` points, the data are degenerate,
        the data violate a pinned support bound, or no start converges within
        the evaluation budget.
    """
    family = Family.parse(family)
    x = np.asarray(data, dtype=float).ravel()
    if not np.all(np.isfinite(x)):
        raise FitError("data contain non-finite values")
    if x.size < 3 + family.arity:
        raise FitError(f"{family.value} fit needs at least {3 + family.arity} points, got {x.size}")

    if family is Family.NORMAL:
        if opts.fixed_loc is None:
            return DistributionSpec(family, x.mean(), _positive(x.std(), family))
        loc = float(opts.fixed_loc)
        return DistributionSpec(family, loc, _positive(math.sqrt(np.mean((x - loc) ** 2)), family))
    if family is Family.EXPONENTIAL:
        loc = float(x.min()) if opts.fixed_loc is None else float(opts.fixed_loc)
        if x.min() < loc:
            raise FitError("data lie below the fixed location")
        return DistributionSpec(family, loc, _positive(x.mean() - loc, family))

    center = float(x.mean())
    spread = float(x.std())
    if not spread > 0:
        raise FitError("data have zero variance")
    z = (x - center) / spread
    fixed_z = None if opts.fixed_loc is None else (float(opts.fixed_loc) - center) / spread
    if fixed_z is not None and z.min() < fixed_z:
        raise FitError("data lie below the fixed location")

    model = _Model(family, z, fixed_z)
    objective = model.objective
    starts = model.starts()
    rng = make_rng(opts.seed)
    base = min(starts, key=objective)
    for _ in range(opts.extra_starts):
        starts.append(base + rng.normal(0.0, 0.5, size=base.size))

    best_theta, best_f, converged = None, math.inf, False
    for theta0 in starts:
        if not math.isfinite(objective(theta0)):
            continue
        theta, f, ok = _nelder_mead(objective, theta0, opts)
        if f < best_f:
            best_theta, best_f, converged = theta, f, ok

    if best_theta is None:
        raise FitError(f"no finite-likelihood starting point for {family.value}")
    best = model.spec(best_theta, center, spread)
    if opts.fixed_loc is not None:
        # Undo the rounding picked up by standardizing a pinned location.
        best = DistributionSpec(family, float(opts.fixed_loc), best.scale, best.shapes)
    if not converged:
        raise FitError(f"{family.value} fit did not converge within "
                       f"{opts.max_evaluations} evaluations", best)
    return best


def _positive(value: float, family: Family) -> float:
    if not value > 0:
        raise FitError(f"degenerate data for {family.value} fit")
    return float(value)


def _nelder_mead(f: Callable, theta0: np.ndarray, opts: FitOptions):
    """Nelder-Mead with restarts from the incumbent until the objective stops moving."""
    theta = np.asarray(theta0, dtype=float)
    fval = f(theta)
    budget = opts.max_evaluations
    step = 0.25
    converged = False
    for _ in range(4):
        simplex = np.vstack([theta, theta + step * np.eye(theta.size)])
        fatol = opts.tolerance * max(1.0, abs(fval))
        res = minimize(f, theta, method="Nelder-Mead",
                       options={"initial_simplex": simplex, "maxfev": budget,
                                "xatol": 1e-7, "fatol": fatol})
        budget -= res.nfev
        improved = fval - res.fun
        if res.fun <= fval:
            theta, fval = res.x, float(res.fun)
        converged = bool(res.success)
        if not converged or budget <= 0 or improved <= fatol:
            break
        step = 0.05
    return theta, fval, converged


class _Model:
    """Unconstrained parameterization of one family on standardized data."""

    def __init__(self, family: Family, z: np.ndarray, fixed_loc: Optional[float]):
        self.family = family
        self.z = z
        self.fixed = fixed_loc
        self.zmin = float(z.min())
        self.zmax = float(z.max())
        eps = 1e-9 * (self.zmax - self.zmin)
        self.lower_bound = self.zmin - eps
        self.upper_bound = self.zmax + eps

    # theta layout: [loc term if free] [upper term (beta) | log scale] [log shapes]
    def unpack(self, theta):
        i = 0
        if self.fixed is None:
            loc = self.lower_bound - math.exp(theta[0])
            i = 1
        else:
            loc = self.fixed
        if self.family is Family.BETA:
            scale = self.upper_bound + math.exp(theta[i]) - loc
        else:
            scale = math.exp(theta[i])
        shapes = tuple(math.exp(t) for t in theta[i + 1:])
        return loc, scale, shapes

    def pack(self, loc, scale, shapes):
        theta = []
        if self.fixed is None:
            theta.append(math.log(max(self.lower_bound - loc, 1e-300)))
        if self.family is Family.BETA:
            theta.append(math.log(max(loc + scale - self.upper_bound, 1e-300)))
        else:
            theta.append(math.log(scale))
        theta.extend(math.log(max(s, 1e-300)) for s in shapes)
        return np.array(theta)

    def objective(self, theta) -> float:
        try:
            loc, scale, shapes = self.unpack(theta)
            spec = DistributionSpec(self.family, loc, scale, shapes)
        except (ValueError, OverflowError):
            return math.inf
        with np.errstate(all="ignore"):
            value = -float(np.mean(logpdf(spec, self.z)))
        excess = np.maximum(np.abs(theta) - _LOG_CAP, 0.0)
        value += float(np.dot(excess, excess))
        return value if math.isfinite(value) else math.inf

    def spec(self, theta, center, spread) -> DistributionSpec:
        loc, scale, shapes = self.unpack(theta)
        return DistributionSpec(self.family, center + spread * loc, spread * scale, shapes)

    def starts(self) -> List[np.ndarray]:
        out = []
        if self.fixed is None:
            locs = [self.zmin - g for g in _LOC_GAPS]
            q = _three_quantile_loc(self.z)
            if q is not None and q < self.lower_bound:
                locs.append(q)
            for loc in locs:
                init = self._initial(loc)
                if init is not None:
                    out.append(self.pack(loc, *init))
        else:
            init = self._initial(self.fixed)
            if init is not None:
                scale, shapes = init
                for factor in _SHAPE_FACTORS:
                    out.append(self.pack(self.fixed, scale, tuple(s * factor for s in shapes)))
        return out

    def _initial(self, loc):
        """Moment- or quantile-based (scale, shapes) given a location."""
        y = self.z - loc
        if np.any(y < 0):
            return None
        fam = self.family
        with np.errstate(divide="ignore", invalid="ignore"):
            if fam is Family.BETA:
                upper = self.zmax + 0.1 * (self.zmax - self.zmin) + 1e-3
                u = y / (upper - loc)
                m, v = u.mean(), u.var()
                common = m * (1.0 - m) / v - 1.0
                a = max(m * common, 0.1)
                b = max((1.0 - m) * common, 0.1)
                return upper - loc, (a, b)
            yp = y[y > 0]
            if yp.size < 2:
                return None
            if fam is Family.LOGNORMAL:
                ly = np.log(yp)
                return math.exp(ly.mean()), (max(ly.std(), 1e-3),)
            if fam is Family.RAYLEIGH:
                return math.sqrt(np.mean(y * y) / 2.0), ()
            if fam is Family.RICIAN:
                m2, m4 = np.mean(y ** 2), np.mean(y ** 4)
                b = _rician_b_from_moments(m4 / m2 ** 2)
                return math.sqrt(m2 / (2.0 + b * b)), (b,)
            if fam is Family.NAKAGAMI:
                y2 = y * y
                nu = min(max(y2.mean() ** 2 / y2.var(), 0.05), 1e3)
                return math.sqrt(y2.mean()), (nu,)
            if fam is Family.GAMMA:
                m, v = y.mean(), y.var()
                return v / m, (min(max(m * m / v, 0.05), 1e4),)
            if fam is Family.LOGLOGISTIC:
                ly = np.log(yp)
                q1, med, q3 = np.percentile(ly, [25, 50, 75])
                iqr = q3 - q1
                return math.exp(med), (2.0 * _LN3 / iqr if iqr > 0 else 1.0,)
            if fam is Family.WEIBULL:
                ly = np.log(yp)
                c = math.pi / (math.sqrt(6.0) * max(ly.std(), 1e-6))
                return math.exp(ly.mean() + _EULER_GAMMA / c), (c,)
        raise AssertionError(fam)


def _three_quantile_loc(z: np.ndarray) -> Optional[float]:
    """Location estimate from symmetric log-quantiles (exact for a shifted lognormal)."""
    lo, med, hi = np.percentile(z, [5, 50, 95])
    denom = lo + hi - 2.0 * med
    if denom <= 0:
        return None
    return float((lo * hi - med * med) / denom)


def _rician_b_from_moments(ratio: float) -> float:
    # Unit Rician: E[R^2] = 2 + b^2, E[R^4] = b^4 + 8 b^2 + 8.
    if not 1.0 < ratio < 2.0:
        return 0.1 if ratio >= 2.0 else 10.0
    a = 1.0 - ratio
    b = 8.0 - 4.0 * ratio
    disc = b * b - 4.0 * a * b
    s = (-b - math.sqrt(max(disc, 0.0))) / (2.0 * a)
    return math.sqrt(max(s, 0.01))
