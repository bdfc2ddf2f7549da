import numpy as np
import pytest

from chanstat.rng import derive_seed, make_rng, open_uniforms


def test_make_rng_is_deterministic():
    assert np.array_equal(make_rng(7).random(5), make_rng(7).random(5))
    assert not np.array_equal(make_rng(7).random(5), make_rng(8).random(5))


def test_make_rng_passes_generator_through():
    g = np.random.default_rng(1)
    assert make_rng(g) is g


@pytest.mark.parametrize("bad", [-1, 2 ** 64, 1.5, "3"])
def test_rejects_bad_seeds(bad):
    with pytest.raises((ValueError, TypeError)):
        make_rng(bad)


def test_derive_seed_distinct_and_stable():
    seeds = [derive_seed(0, i) for i in range(1000)]
    assert len(set(seeds)) == 1000
    assert seeds[:3] == [derive_seed(0, i) for i in range(3)]
    assert all(0 <= s < 2 ** 64 for s in seeds)
    assert derive_seed(0, 1) != derive_seed(1, 0)


def test_open_uniforms_strictly_inside_unit_interval():
    u = open_uniforms(make_rng(3), 100_000)
    assert u.min() > 0 and u.max() < 1
    assert abs(u.mean() - 0.5) < 0.005
    assert open_uniforms(make_rng(3), 0).size == 0
