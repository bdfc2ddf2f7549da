"""Vectorized special functions used by the distribution engine.

Regularized incomplete gamma and beta functions follow the classic series /
modified-Lentz continued-fraction split. Exponentially scaled modified Bessel
functions use the ascending power series for small arguments and the Hankel
asymptotic expansion above ``_BESSEL_SWITCH``.

Iterative loops freeze an element once it has converged and the Bessel sums use
a term count fixed per argument bucket, so results are bit-identical regardless
of how inputs are batched.
"""

from __future__ import annotations

import math

import numpy as np

_EPS = np.finfo(float).eps
_FPMIN = np.finfo(float).tiny / _EPS
_MAXITER = 10_000
_BESSEL_SWITCH = 20.0

_lgamma_ufunc = np.frompyfunc(math.lgamma, 1, 1)
_erfc_ufunc = np.frompyfunc(math.erfc, 1, 1)


def lgamma(x):
    """ln|Gamma(x)| elementwise (delegates to the C library per element)."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        return math.lgamma(float(x))
    return _lgamma_ufunc(x).astype(float)


def erfc(x):
    """Complementary error function, elementwise."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        return math.erfc(float(x))
    return _erfc_ufunc(x).astype(float)


def ndtr(x):
    """Standard normal CDF."""
    return 0.5 * erfc(-np.asarray(x, dtype=float) / math.sqrt(2.0))


def ndtri(p):
    """Inverse of the standard normal CDF for p in (0, 1).

    A rational starting guess (absolute error < 4.5e-4) is refined by a fixed
    number of Newton steps carried out on the lower tail, where ``ndtr`` is
    accurate.
    """
    p = np.asarray(p, dtype=float)
    scalar = p.ndim == 0
    p = np.atleast_1d(p)
    upper = p > 0.5
    pl = np.where(upper, 1.0 - p, p)
    with np.errstate(divide="ignore"):
        t = np.sqrt(-2.0 * np.log(pl))
    x = -(t - (2.515517 + 0.802853 * t + 0.010328 * t * t)
          / (1.0 + 1.432788 * t + 0.189269 * t * t + 0.001308 * t ** 3))
    for _ in range(5):
        phi = np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = (ndtr(x) - pl) / phi
        x = np.where(np.isfinite(step), x - step, x)
    x = np.where(pl == 0.0, -np.inf, x)
    x = np.where(pl == 0.5, 0.0, x)
    x = np.where(upper, -x, x)
    return float(x[0]) if scalar else x


def _gamma_prefactor(a, x):
    with np.errstate(divide="ignore"):
        return np.exp(-x + a * np.log(x) - lgamma(a))


def _gamma_series(a, x):
    ap = a.copy()
    term = 1.0 / a
    total = term.copy()
    active = np.ones(a.shape, dtype=bool)
    for _ in range(_MAXITER):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        ap[idx] += 1.0
        term[idx] *= x[idx] / ap[idx]
        total[idx] += term[idx]
        done = np.abs(term[idx]) < np.abs(total[idx]) * _EPS
        active[idx[done]] = False
    return total * _gamma_prefactor(a, x)


def _gamma_contfrac(a, x):
    b = x + 1.0 - a
    c = np.full(a.shape, 1.0 / _FPMIN)
    d = 1.0 / b
    h = d.copy()
    active = np.ones(a.shape, dtype=bool)
    for i in range(1, _MAXITER):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        an = -i * (i - a[idx])
        b[idx] += 2.0
        di = an * d[idx] + b[idx]
        di = np.where(np.abs(di) < _FPMIN, _FPMIN, di)
        ci = b[idx] + an / c[idx]
        ci = np.where(np.abs(ci) < _FPMIN, _FPMIN, ci)
        di = 1.0 / di
        delta = di * ci
        d[idx] = di
        c[idx] = ci
        h[idx] *= delta
        done = np.abs(delta - 1.0) < _EPS
        active[idx[done]] = False
    return _gamma_prefactor(a, x) * h


def _gamma_pq(a, x):
    a, x = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(x, dtype=float))
    shape = a.shape
    a = a.ravel().copy()
    x = x.ravel().copy()
    p = np.empty(a.shape)
    q = np.empty(a.shape)
    zero = x <= 0.0
    inf = np.isposinf(x)
    p[zero], q[zero] = 0.0, 1.0
    p[inf], q[inf] = 1.0, 0.0
    rest = ~(zero | inf)
    series = rest & (x < a + 1.0)
    cf = rest & ~series
    if series.any():
        p[series] = _gamma_series(a[series], x[series])
        q[series] = 1.0 - p[series]
    if cf.any():
        q[cf] = _gamma_contfrac(a[cf], x[cf])
        p[cf] = 1.0 - q[cf]
    return p.reshape(shape), q.reshape(shape)


def gammainc(a, x):
    """Regularized lower incomplete gamma P(a, x), a > 0, x >= 0."""
    p, _ = _gamma_pq(a, x)
    return p if p.ndim else float(p)


def gammaincc(a, x):
    """Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x)."""
    _, q = _gamma_pq(a, x)
    return q if q.ndim else float(q)


def _beta_contfrac(a, b, x):
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = np.ones(a.shape)
    d = 1.0 - qab * x / qap
    d = np.where(np.abs(d) < _FPMIN, _FPMIN, d)
    d = 1.0 / d
    h = d.copy()
    active = np.ones(a.shape, dtype=bool)
    for m in range(1, _MAXITER):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        ai, bi, xi = a[idx], b[idx], x[idx]
        m2 = 2 * m
        aa = m * (bi - m) * xi / ((qam[idx] + m2) * (ai + m2))
        di = 1.0 + aa * d[idx]
        di = np.where(np.abs(di) < _FPMIN, _FPMIN, di)
        ci = 1.0 + aa / c[idx]
        ci = np.where(np.abs(ci) < _FPMIN, _FPMIN, ci)
        di = 1.0 / di
        hi = h[idx] * di * ci
        aa = -(ai + m) * (qab[idx] + m) * xi / ((ai + m2) * (qap[idx] + m2))
        di = 1.0 + aa * di
        di = np.where(np.abs(di) < _FPMIN, _FPMIN, di)
        ci = 1.0 + aa / ci
        ci = np.where(np.abs(ci) < _FPMIN, _FPMIN, ci)
        di = 1.0 / di
        delta = di * ci
        hi *= delta
        d[idx], c[idx], h[idx] = di, ci, hi
        done = np.abs(delta - 1.0) < _EPS
        active[idx[done]] = False
    return h


def betainc(a, b, x):
    """Regularized incomplete beta I_x(a, b), a, b > 0, 0 <= x <= 1."""
    a, b, x = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (a, b, x)))
    shape = x.shape
    a, b, x = (v.ravel().copy() for v in (a, b, x))
    out = np.empty(x.shape)
    out[x <= 0.0] = 0.0
    out[x >= 1.0] = 1.0
    mid = (x > 0.0) & (x < 1.0)
    if mid.any():
        am, bm, xm = a[mid], b[mid], x[mid]
        front = np.exp(lgamma(am + bm) - lgamma(am) - lgamma(bm)
                       + am * np.log(xm) + bm * np.log1p(-xm))
        direct = xm < (am + 1.0) / (am + bm + 2.0)
        res = np.empty(xm.shape)
        if direct.any():
            res[direct] = (front[direct]
                           * _beta_contfrac(am[direct], bm[direct], xm[direct]) / am[direct])
        flip = ~direct
        if flip.any():
            res[flip] = 1.0 - (front[flip]
                               * _beta_contfrac(bm[flip], am[flip], 1.0 - xm[flip]) / bm[flip])
        out[mid] = res
    out = out.reshape(shape)
    return out if out.ndim else float(out)


# (upper argument, number of series terms) chosen so the truncated tail is below 1e-20.
_SERIES_BUCKETS = ((2.0, 14), (5.0, 22), (10.0, 32), (_BESSEL_SWITCH, 50))
_ASYMPTOTIC_TERMS = 30


def _bessel_series(nu, x):
    # I_nu(x) = (x/2)^nu * sum_k (x^2/4)^k / (k! (k+nu)!), Horner form with a
    # term count fixed per argument bucket.
    t = 0.25 * x * x
    out = np.empty(x.shape)
    lo = -1.0
    for hi, terms in _SERIES_BUCKETS:
        sel = (x > lo) & (x <= hi)
        lo = hi
        if not sel.any():
            continue
        ts = t[sel]
        acc = np.full(ts.shape, 1.0 / (math.factorial(terms) * math.factorial(terms + nu)))
        for k in range(terms - 1, -1, -1):
            acc = acc * ts + 1.0 / (math.factorial(k) * math.factorial(k + nu))
        out[sel] = acc
    return out * (0.5 * x) ** nu * np.exp(-x)


def _bessel_asymptotic(nu, x):
    # Hankel expansion of e^{-x} I_nu(x); valid well past the switch point since
    # the smallest term there is ~exp(-2x).
    mu = 4.0 * nu * nu
    r = 1.0 / (8.0 * x)
    coef = [1.0]
    for k in range(1, _ASYMPTOTIC_TERMS + 1):
        coef.append(coef[-1] * (-(mu - (2 * k - 1) ** 2)) / k)
    acc = np.full(x.shape, coef[-1])
    for c in reversed(coef[:-1]):
        acc = acc * r + c
    return acc / np.sqrt(2.0 * math.pi * x)


def _bessel_scaled(nu, x):
    x = np.asarray(x, dtype=float)
    shape = x.shape
    x = np.abs(x.ravel())
    out = np.empty(x.shape)
    small = x <= _BESSEL_SWITCH
    if small.any():
        out[small] = _bessel_series(nu, x[small])
    if (~small).any():
        out[~small] = _bessel_asymptotic(nu, x[~small])
    out = out.reshape(shape)
    return out if out.ndim else float(out)


def i0e(x):
    """Exponentially scaled modified Bessel function exp(-|x|) I0(x)."""
    return _bessel_scaled(0, x)


def i1e(x):
    """Exponentially scaled modified Bessel function exp(-|x|) I1(|x|), x >= 0."""
    return _bessel_scaled(1, x)
