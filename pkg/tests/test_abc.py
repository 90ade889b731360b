import numpy as np
import pytest

from oracles import abc_grid_range
from twincausal.bayes import abc_nonidentifiable
from twincausal.datasets import simpson_table
from twincausal.errors import HeaderMismatch, NoAcceptedSamples


@pytest.fixture(scope="module")
def ty():
    return simpson_table().marginalize(["T", "Y"])


@pytest.fixture(scope="module")
def simpson_abc(ty):
    return abc_nonidentifiable(ty, latent_card=2, n_samples=2_000_000, tolerance=0.01, seed=11)


def natural_bounds(ty, t):
    """Sharp bounds on P(y=1 | do(t)) with an unrestricted confounder."""
    p = ty.to_array(["T", "Y"]) / ty.total
    low = p[t, 1]
    return low, low + 1.0 - p[t].sum()


def test_single_latent_state_collapses_to_conditional(ty):
    res = abc_nonidentifiable(ty, latent_card=1, n_samples=1_000_000, tolerance=0.01, seed=3)
    p = ty.to_array(["T", "Y"])
    for t in (0, 1):
        lo, hi = res.interval(t)
        assert hi - lo < 0.04
        assert res.mean(t) == pytest.approx(p[t, 1] / p[t].sum(), abs=0.02)


def test_simpson_interval_is_wide(simpson_abc):
    assert simpson_abc.n_accepted > 30
    lo, hi = simpson_abc.interval(1)
    assert hi - lo >= 0.1


def test_simpson_inside_natural_bounds(ty, simpson_abc):
    for t in (0, 1):
        low, high = natural_bounds(ty, t)
        assert high - low >= 0.1
        draws = simpson_abc.samples[:, t, 1]
        assert draws.min() >= low - 0.05
        assert draws.max() <= high + 0.05


def test_simpson_inside_grid_search_range(ty, simpson_abc):
    omega = ty.to_array(["T", "Y"]) / ty.total
    lo, hi = abc_grid_range(omega, 1, 0.01)
    assert hi - lo >= 0.1
    draws = simpson_abc.samples[:, 1, 1]
    assert lo - 0.05 <= draws.min() and draws.max() <= hi + 0.05


def test_loose_tolerance_returns_prior(ty):
    res = abc_nonidentifiable(ty, latent_card=2, n_samples=200_000, tolerance=1.0, seed=1)
    assert res.n_accepted == 200_000
    for t in (0, 1):
        assert res.mean(t) == pytest.approx(0.5, abs=0.005)


def test_no_accepted(ty):
    with pytest.raises(NoAcceptedSamples):
        abc_nonidentifiable(ty, latent_card=2, n_samples=1000, tolerance=1e-6, seed=0)


def test_bad_inputs(ty):
    with pytest.raises(HeaderMismatch):
        abc_nonidentifiable(simpson_table(), 2, 1000, 0.1, 0)
    with pytest.raises(ValueError):
        abc_nonidentifiable(ty, 0, 1000, 0.1, 0)
    with pytest.raises(ValueError):
        abc_nonidentifiable(ty, 2, 1000, 0.0, 0)
    with pytest.raises(ValueError):
        abc_nonidentifiable(ty, 2, 1000, 0.1, 0, psi_concentration=[1, 0])


def test_workers_do_not_change_result(ty):
    one = abc_nonidentifiable(ty, 2, 450_000, 0.03, seed=5)
    four = abc_nonidentifiable(ty, 2, 450_000, 0.03, seed=5, workers=4)
    np.testing.assert_array_equal(one.samples, four.samples)


def test_seed_determinism(ty):
    a = abc_nonidentifiable(ty, 2, 150_000, 0.03, seed=9)
    b = abc_nonidentifiable(ty, 2, 150_000, 0.03, seed=9)
    c = abc_nonidentifiable(ty, 2, 150_000, 0.03, seed=10)
    np.testing.assert_array_equal(a.samples, b.samples)
    assert a.samples.shape != c.samples.shape or not np.array_equal(a.samples, c.samples)


def test_to_dict(simpson_abc):
    d = simpson_abc.to_dict()
    assert d["method"] == "abc" and d["n_accepted"] == simpson_abc.n_accepted
    assert [r["t_star"] for r in d["results"]] == [0, 1]


@pytest.mark.slow
def test_prior_sensitivity_persists_with_more_data(ty):
    big = ty.scaled(100)
    flat = abc_nonidentifiable(big, 2, 4_000_000, 0.03, seed=11)
    skew = abc_nonidentifiable(big, 2, 4_000_000, 0.03, seed=12, psi_concentration=[1, 5])
    assert abs(flat.mean(1) - skew.mean(1)) > 0.02
