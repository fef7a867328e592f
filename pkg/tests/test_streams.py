"""Keyed uniform draws and seed derivation stay frozen across releases."""
import numpy as np

from spasir.streams import derive_seed, pair_uniform


def test_pair_uniform_frozen_values():
    # regression anchors: changing the stream silently would break replays
    assert pair_uniform(42, 1, 2) == 0.5070805276762108
    assert pair_uniform(42, 2, 1) == 0.9406408876405521
    assert pair_uniform(7, 123456, 654321) == 0.33853243644505504


def test_pair_uniform_orientation_independent_draws():
    # the two orientations of one edge are distinct draws
    assert pair_uniform(1, 3, 9) != pair_uniform(1, 9, 3)


def test_pair_uniform_vectorised_matches_scalar():
    rng = np.random.default_rng(0)
    u = rng.integers(1, 10_000, size=200)
    v = rng.integers(1, 10_000, size=200)
    vec = pair_uniform(99, u, v)
    assert vec.shape == (200,)
    for k in range(200):
        assert vec[k] == pair_uniform(99, int(u[k]), int(v[k]))


def test_pair_uniform_range_and_spread():
    u, v = np.meshgrid(np.arange(1, 101), np.arange(1, 101))
    draws = pair_uniform(5, u.ravel(), v.ravel())
    assert (draws >= 0.0).all() and (draws < 1.0).all()
    assert abs(draws.mean() - 0.5) < 0.01
    assert np.unique(draws).size == draws.size


def test_derive_seed_frozen_and_distinct():
    assert derive_seed(0, "graph", 0, 0) == 13324859366609558392
    assert derive_seed(9, "sir", 3, 0, "A", "10.0", 17) == 2001847883523311959
    seeds = {derive_seed(1, "sir", c, 0, s, g, r)
             for c in range(5) for s in ("A", "B") for g in ("1.0", "10.0") for r in range(5)}
    assert len(seeds) == 100
