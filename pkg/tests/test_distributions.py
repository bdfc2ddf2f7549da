"""Distribution engine checked against scipy.stats and quadrature."""

import math

import numpy as np
import pytest
import scipy.stats as ss
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from chanstat.distributions import (DistributionSpec, Family, cdf, log_likelihood, logpdf,
                                    mean, pdf, quantile, sample)
from chanstat.gof import ks_statistic

from conftest import all_specs, spec_id

SPECS = all_specs()


def scipy_frozen(spec):
    s, loc, scale = spec.shapes, spec.loc, spec.scale
    f = spec.family
    table = {
        Family.NORMAL: lambda: ss.norm(loc, scale),
        Family.EXPONENTIAL: lambda: ss.expon(loc, scale),
        Family.LOGNORMAL: lambda: ss.lognorm(s[0], loc, scale),
        Family.RAYLEIGH: lambda: ss.rayleigh(loc, scale),
        Family.RICIAN: lambda: ss.rice(s[0], loc, scale),
        Family.NAKAGAMI: lambda: ss.nakagami(s[0], loc, scale),
        Family.GAMMA: lambda: ss.gamma(s[0], loc, scale),
        Family.BETA: lambda: ss.beta(s[0], s[1], loc, scale),
        Family.LOGLOGISTIC: lambda: ss.fisk(s[0], loc, scale),
        Family.WEIBULL: lambda: ss.weibull_min(s[0], loc, scale),
    }
    return table[f]()


def interior_grid(spec, n=60):
    ref = scipy_frozen(spec)
    return ref.ppf(np.linspace(0.002, 0.998, n))


@pytest.mark.parametrize("spec", SPECS, ids=spec_id)
def test_pdf_and_cdf_match_scipy(spec):
    ref = scipy_frozen(spec)
    x = interior_grid(spec)
    np.testing.assert_allclose(pdf(spec, x), ref.pdf(x), rtol=1e-10)
    np.testing.assert_allclose(cdf(spec, x), ref.cdf(x), rtol=1e-10, atol=1e-13)


@pytest.mark.parametrize("spec", SPECS, ids=spec_id)
def test_quantile_matches_scipy(spec):
    q = np.linspace(0.001, 0.999, 99)
    np.testing.assert_allclose(quantile(spec, q), scipy_frozen(spec).ppf(q), rtol=1e-8,
                               atol=1e-8 * spec.scale)


@pytest.mark.parametrize("spec", SPECS, ids=spec_id)
def test_cdf_monotone_and_limits(spec):
    lo, hi = scipy_frozen(spec).ppf([1e-9, 1 - 1e-10])
    x = np.linspace(lo - spec.scale, hi + spec.scale, 1000)
    F = cdf(spec, x)
    assert np.all(np.diff(F) >= 0)
    assert F[0] <= 1e-9 and abs(F[-1] - 1) <= 1e-9
    upper = spec.support[1]
    if math.isfinite(upper):
        assert abs(cdf(spec, upper) - 1) <= 1e-9


@pytest.mark.parametrize("spec", SPECS, ids=spec_id)
def test_cdf_is_integral_of_pdf(spec):
    a, b = scipy_frozen(spec).ppf([0.05, 0.8])
    area, _ = quad(lambda t: pdf(spec, t), a, b, epsabs=1e-12, epsrel=1e-10, limit=200)
    assert area == pytest.approx(cdf(spec, b) - cdf(spec, a), abs=1e-8)


def test_pdf_zero_outside_support():
    e = DistributionSpec("exponential", 0, 2)
    assert pdf(e, -1e-9) == 0.0
    assert logpdf(e, -1.0) == -math.inf
    b = DistributionSpec("beta", 1, 2, (2, 3))
    assert pdf(b, 0.999) == 0.0 and pdf(b, 3.001) == 0.0
    assert cdf(b, 1.0) == 0.0 and cdf(b, 3.0) == 1.0


def test_reference_values():
    assert pdf(DistributionSpec("exponential", 0, 43.51), 0.0) == pytest.approx(1 / 43.51,
                                                                                 rel=1e-14)
    assert cdf(DistributionSpec("exponential", 0, 50.52), 50.52) == pytest.approx(
        1 - math.exp(-1), rel=1e-14)
    ll = DistributionSpec("loglogistic", -3, 2, (2.7,))
    assert cdf(ll, -1.0) == pytest.approx(0.5, abs=1e-15)
    for spec in SPECS:
        if math.isfinite(spec.support[0]):
            assert cdf(spec, spec.support[0]) == 0.0


def test_quantile_inverse_examples():
    s = 12.5
    assert quantile(DistributionSpec("exponential", 0, s), 1 - math.exp(-1)) == pytest.approx(s)
    assert quantile(DistributionSpec("normal", -4.2, 3), 0.5) == -4.2


@pytest.mark.parametrize("q", [0.0, 1.0, -0.1, 1.5, float("nan")])
def test_quantile_rejects_out_of_range(q):
    with pytest.raises(ValueError):
        quantile(DistributionSpec("normal", 0, 1), q)


def test_quantile_cdf_round_trip_random_specs():
    rng = np.random.default_rng(99)
    worst = 0.0
    for _ in range(1000):
        spec = SPECS[rng.integers(len(SPECS))]
        q = rng.uniform(1e-6, 1 - 1e-6)
        worst = max(worst, abs(cdf(spec, quantile(spec, q)) - q))
    assert worst < 1e-9


@pytest.mark.parametrize("bad", [
    ("normal", 0, 0, ()), ("normal", 0, -1, ()), ("exponential", 0, 1, (1,)),
    ("gamma", 0, 1, ()), ("gamma", 0, 1, (0,)), ("beta", 0, 1, (1,)),
    ("beta", 0, 1, (1, -2)), ("rician", 0, 1, (-0.1,)), ("weibull", float("nan"), 1, (1,)),
    ("nosuch", 0, 1, ()),
])
def test_invalid_specs_rejected(bad):
    with pytest.raises(ValueError):
        DistributionSpec(*bad)


def test_rician_zero_shape_allowed():
    DistributionSpec("rician", 0, 1, (0,))


def test_family_aliases_and_arity():
    assert Family.parse("Log-Normal") is Family.LOGNORMAL
    assert Family.parse("fisk") is Family.LOGLOGISTIC
    assert Family.parse("Rice") is Family.RICIAN
    assert [f.arity for f in Family] == [0, 0, 1, 0, 1, 1, 1, 2, 1, 1]


def test_sample_determinism_and_support():
    spec = DistributionSpec("gamma", -30.7, 3.73, (3.66,))
    a, b = sample(spec, 1000, 5), sample(spec, 1000, 5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, sample(spec, 1000, 6))
    assert np.all(a > spec.loc)
    assert sample(spec, 0, 5).size == 0
    with pytest.raises(ValueError):
        sample(spec, -1, 5)


def test_sample_mean_law_of_large_numbers():
    x = sample(DistributionSpec("exponential", 0, 50.52), 100_000, 11)
    assert abs(x.mean() / 50.52 - 1) < 0.01


def test_lognormal_monte_carlo_mean():
    spec = DistributionSpec("lognormal", -35.5, 17.4, (0.37,))
    expected = -35.5 + 17.4 * math.exp(0.37 ** 2 / 2)
    assert expected == pytest.approx(-16.87, abs=0.01)
    assert abs(sample(spec, 100_000, 12).mean() - expected) < 0.05
    assert mean(spec) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("spec", SPECS, ids=spec_id)
def test_inversion_sampling_passes_ks(spec):
    n = 10_000
    x = sample(spec, n, 2024)
    assert ks_statistic(x, spec) < 1.63 / math.sqrt(n)


@pytest.mark.parametrize("spec", SPECS, ids=spec_id)
def test_mean_matches_scipy(spec):
    m = mean(spec)
    ref = scipy_frozen(spec).mean()
    if spec.family is Family.LOGLOGISTIC and spec.shapes[0] <= 1:
        assert m is None
    else:
        assert m == pytest.approx(ref, rel=1e-10, abs=1e-10)


def test_mean_examples():
    assert mean(DistributionSpec("exponential", 0, 50.52)) == 50.52
    assert mean(DistributionSpec("normal", 3.5, 2)) == 3.5
    assert mean(DistributionSpec("loglogistic", -29, 5.6, (0.84,))) is None


def test_log_likelihood():
    assert log_likelihood(DistributionSpec("normal", 0, 1), [0.0]) == pytest.approx(
        -0.91894, abs=1e-5)
    spec = DistributionSpec("gamma", 0, 2, (3,))
    one = log_likelihood(spec, [1.7])
    assert log_likelihood(spec, [1.7, 1.7]) == pytest.approx(2 * one, rel=1e-15)
    assert log_likelihood(DistributionSpec("exponential", 0, 1), [-1, 2]) == -math.inf
    with pytest.raises(ValueError):
        log_likelihood(spec, [])


def test_spec_dict_round_trip():
    spec = DistributionSpec("beta", -17.1234567, 5.69, (2.5, 3.5))
    d = spec.to_dict()
    assert d == {"family": "beta", "loc": -17.1235, "scale": 5.69, "shapes": [2.5, 3.5]}
    assert DistributionSpec.from_dict(spec.to_dict(digits=None)) == spec


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SPECS), st.floats(-50, 50), st.floats(0.1, 10))
def test_affine_transform_of_spec(spec, b, a):
    moved = DistributionSpec(spec.family, a * spec.loc + b, a * spec.scale, spec.shapes)
    q = np.array([0.1, 0.5, 0.9])
    np.testing.assert_allclose(quantile(moved, q), a * quantile(spec, q) + b, rtol=1e-9,
                               atol=1e-9 * (abs(b) + a * spec.scale + abs(a * spec.loc)))
