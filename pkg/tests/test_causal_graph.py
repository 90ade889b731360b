import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import d_separated_by_paths, random_dag, random_disjoint_sets
from twincausal.causal_graph import (
    CausalGraph,
    RemoveIncoming,
    RemoveOutgoing,
    VariableDecl,
    d_separated,
    mutilate,
    validate_dag,
)
from twincausal.errors import CycleError, OverlappingSets, UnknownVariable


def edges_of(g):
    return set(g.edges)


# -- validate_dag -----------------------------------------------------------

def test_topological_order_case1(case1):
    assert validate_dag(case1) == ["Z", "T", "Y"]


def test_empty_graph_has_empty_order():
    assert validate_dag(CausalGraph()) == []


def test_two_cycle_rejected():
    with pytest.raises(CycleError) as err:
        CausalGraph.from_edges([("A", "B"), ("B", "A")])
    assert set(err.value.cycle) == {"A", "B"}


def test_longer_cycle_is_named():
    with pytest.raises(CycleError) as err:
        CausalGraph.from_edges([("A", "B"), ("B", "C"), ("C", "A"), ("X", "A")])
    cycle = err.value.cycle
    assert cycle[0] == cycle[-1]
    assert set(cycle) == {"A", "B", "C"}


def test_unknown_edge_endpoint():
    with pytest.raises(UnknownVariable):
        CausalGraph((VariableDecl("A"),), (("A", "B"),))


def test_self_loop_and_duplicates_rejected():
    with pytest.raises(CycleError):
        CausalGraph.from_edges([("A", "A")])
    with pytest.raises(ValueError):
        CausalGraph.from_edges([("A", "B"), ("A", "B")])
    with pytest.raises(ValueError):
        CausalGraph((VariableDecl("A"), VariableDecl("A")))


def test_cardinality_must_be_at_least_two():
    with pytest.raises(ValueError):
        VariableDecl("A", cardinality=1)


def test_order_respects_every_edge():
    rng = np.random.default_rng(0)
    for _ in range(200):
        g = random_dag(rng, n_max=7)
        pos = {n: i for i, n in enumerate(validate_dag(g))}
        assert all(pos[p] < pos[c] for p, c in g.edges)


# -- mutilate ---------------------------------------------------------------

def test_mutilate_incoming_case1(case1):
    assert edges_of(mutilate(case1, "T", RemoveIncoming)) == {("Z", "Y"), ("T", "Y")}


def test_mutilate_outgoing_case1(case1):
    assert edges_of(mutilate(case1, "T", RemoveOutgoing)) == {("Z", "T"), ("Z", "Y")}


def test_mutilate_incoming_case2_is_identity(case2):
    assert mutilate(case2, "T", RemoveIncoming) == case2


def test_mutilate_unknown_target(case1):
    with pytest.raises(UnknownVariable):
        mutilate(case1, "Q", RemoveIncoming)


@pytest.mark.parametrize("mode", [RemoveIncoming, RemoveOutgoing])
def test_mutilate_is_idempotent_and_counts_edges(mode):
    rng = np.random.default_rng(1)
    for _ in range(100):
        g = random_dag(rng)
        for t in g.names:
            once = mutilate(g, t, mode)
            assert mutilate(once, t, mode) == once
            removed = [e for e in g.edges if (e[1] if mode is RemoveIncoming else e[0]) == t]
            assert len(once.edges) == len(g.edges) - len(removed)
            assert once.variables == g.variables


# -- d-separation -----------------------------------------------------------

def test_direct_edge_is_connected():
    g = CausalGraph.from_edges([("X", "Y")])
    assert not d_separated(g, {"X"}, {"Y"}, set())


def test_case1_rule3_independence(case1):
    g = mutilate(case1, "T", RemoveIncoming)
    assert d_separated(g, {"Z"}, {"T"}, set())


def test_case1_rule2_independence(case1):
    g = mutilate(case1, "T", RemoveOutgoing)
    assert d_separated(g, {"Y"}, {"T"}, {"Z"})


def test_collider_opens_when_descendant_observed():
    g = CausalGraph.from_edges([("A", "C"), ("B", "C"), ("C", "D")])
    assert d_separated(g, "A", "B", ())
    assert not d_separated(g, "A", "B", {"C"})
    assert not d_separated(g, "A", "B", {"D"})


def test_overlapping_sets_rejected(case1):
    with pytest.raises(OverlappingSets):
        d_separated(case1, {"Z"}, {"Z", "T"}, set())
    with pytest.raises(OverlappingSets):
        d_separated(case1, {"Z"}, {"T"}, {"T"})


def test_unknown_name_rejected(case1):
    with pytest.raises(UnknownVariable):
        d_separated(case1, {"Z"}, {"Q"}, set())


def test_matches_path_enumeration_oracle():
    rng = np.random.default_rng(20240501)
    checked = 0
    while checked < 1000:
        g = random_dag(rng, n_max=5, p=float(rng.uniform(0.2, 0.8)))
        sets = random_disjoint_sets(rng, g.names)
        if sets is None:
            continue
        a, b, z = sets
        assert d_separated(g, a, b, z) == d_separated_by_paths(g, a, b, z), (g, a, b, z)
        checked += 1


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_d_separation_symmetric(seed):
    rng = np.random.default_rng(seed)
    g = random_dag(rng, n_max=6)
    sets = random_disjoint_sets(rng, g.names)
    if sets is None:
        return
    a, b, z = sets
    assert d_separated(g, a, b, z) == d_separated(g, b, a, z)
