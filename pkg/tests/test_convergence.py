import math

import numpy as np
import pytest

from twincausal.bayes import estimate_cpts
from twincausal.convergence_lab import (
    compare_on_table,
    rows_from_csv,
    rows_to_csv,
    run_convergence,
    summarize,
)
from twincausal.datasets import frontdoor_cpts
from twincausal.errors import NotIdentifiedError, UnnormalizedCpt

GRID = [100, 1000, 10000, 100000]


@pytest.fixture(scope="module")
def case1_truth():
    from twincausal.datasets import load_graph, simpson_table
    g = load_graph("case1")
    return g, estimate_cpts(g, simpson_table())


@pytest.fixture(scope="module")
def grid_rows(case1_truth):
    g, cpts = case1_truth
    return run_convergence(g, cpts, GRID, replicates=20, seed=5)


def test_forced_simpson_row(case1_truth, simpson):
    g, cpts = case1_truth
    row = compare_on_table(g, simpson, cpts, "T", "Y")[0]
    assert row.M == 850 and row.t_star == 0
    assert row.do_plugin == pytest.approx(0.4376471, abs=1e-6)
    assert row.bayes_predictive == pytest.approx(0.4386687, abs=1e-6)
    assert abs(row.do_plugin - row.bayes_predictive) == pytest.approx(0.001, abs=2e-4)
    # the truth here is the empirical CPTs, so the plug-in is exact
    assert row.abs_gap_do == pytest.approx(0.0, abs=1e-12)


def test_deterministic_cpts_are_exact(case1):
    cpts = {"Z": np.array([[0.0, 1.0]]), "T": np.array([[1.0, 0.0], [0.0, 1.0]]),
            "Y": np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 1.0], [1.0, 0.0]])}
    rows = run_convergence(case1, cpts, [5, 500, 50_000], replicates=2, seed=0)
    for row in rows:
        if row.t_star == 1:  # Z=1, T=1 is the only observed cell
            assert row.do_plugin == row.ground_truth == 0.0
        else:
            assert math.isnan(row.do_plugin)
    # smoothing keeps the Bayesian value off the truth, by less as M grows
    gaps = [r.abs_gap_bayes for r in rows if r.t_star == 1 and r.replicate == 0]
    assert gaps[0] > gaps[1] > gaps[2] > 0


def test_large_sample_bayes_gap(case1_truth):
    g, cpts = case1_truth
    rows = run_convergence(g, cpts, [100_000], replicates=20, seed=5)
    assert np.median([r.abs_gap_bayes for r in rows]) <= 0.005


def test_medians_shrink(grid_rows):
    s = summarize(grid_rows)
    for key in ("median_gap_do", "median_gap_bayes"):
        values = [s[M][key] for M in GRID]
        assert all(b <= a for a, b in zip(values, values[1:])), (key, values)


def test_smoothing_perturbation_bound(grid_rows, case1_truth):
    g, _ = case1_truth
    cells = sum(g.card(v) * math.prod(g.card(p) for p in g.parents(v))
                for v in g.names if v != "T")
    for r in grid_rows:
        if not math.isnan(r.do_plugin):
            assert abs(r.do_plugin - r.bayes_predictive) <= 4 * cells / r.M
    assert summarize(grid_rows)[100_000]["max_do_vs_bayes"] <= 0.005


def test_rows_sorted_and_gaps_consistent(grid_rows):
    keys = [(r.M, r.replicate, r.t_star) for r in grid_rows]
    assert keys == sorted(keys)
    assert len(grid_rows) == len(GRID) * 20 * 2
    for r in grid_rows:
        assert r.abs_gap_bayes == abs(r.bayes_predictive - r.ground_truth)
        assert r.abs_gap_bayes >= 0


def test_workers_parity(case1_truth):
    g, cpts = case1_truth
    seq = run_convergence(g, cpts, [50, 500], replicates=6, seed=9)
    par = run_convergence(g, cpts, [50, 500], replicates=6, seed=9, workers=4)
    assert rows_to_csv(seq) == rows_to_csv(par)


def test_csv_round_trip(grid_rows):
    text = rows_to_csv(grid_rows)
    assert text.splitlines()[0] == (
        "M,replicate,t_star,do_plugin,bayes_predictive,ground_truth,"
        "abs_gap_do,abs_gap_bayes,seed")
    again = rows_from_csv(text)
    assert rows_to_csv(again) == text
    assert [r.seed for r in again] == [r.seed for r in grid_rows]


def test_frontdoor_convergence(frontdoor):
    rows = run_convergence(frontdoor, frontdoor_cpts(), [20_000], replicates=3, seed=1)
    assert max(r.abs_gap_bayes for r in rows) < 0.02


def test_errors(confounded, case1):
    with pytest.raises(NotIdentifiedError):
        run_convergence(confounded, {}, [10], 1, 0)
    bad = {"Z": np.array([[0.3, 0.3]]), "T": np.full((2, 2), 0.5), "Y": np.full((4, 2), 0.5)}
    with pytest.raises(UnnormalizedCpt):
        run_convergence(case1, bad, [10], 1, 0)
