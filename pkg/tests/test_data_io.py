import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twincausal.data_io import CountsTable, empirical_joint, load_counts, serialize_counts
from twincausal.datasets import load_graph, read_text
from twincausal.errors import (
    DuplicateAssignment,
    EmptyTable,
    HeaderMismatch,
    NegativeCount,
    OutOfRangeState,
    ZeroConditioningMass,
)


def test_simpson_total(simpson):
    assert simpson.total == 150 + 50 + 180 + 180 + 50 + 200 + 4 + 36 == 850
    assert len(simpson.rows) == 8


def test_latent_column_rejected(confounded):
    with pytest.raises(HeaderMismatch):
        load_counts(read_text("simpson.csv"), confounded)


def test_single_row(case1):
    t = load_counts("Z,T,Y,N\n0,0,0,5\n", case1)
    assert t.total == 5


def test_header_in_any_order(case1, simpson):
    text = "Y,T,Z,N\n1,1,1,36\n0,0,0,150\n"
    t = load_counts(text, case1)
    assert t.variables == ("Y", "T", "Z")
    assert t.to_array(["Z", "T", "Y"])[1, 1, 1] == 36


@pytest.mark.parametrize("text,exc", [
    ("Z,T,N\n0,0,1\n", HeaderMismatch),
    ("Z,T,Y\n0,0,0\n", HeaderMismatch),
    ("Z,T,Y,N\n0,0,0,-1\n", NegativeCount),
    ("Z,T,Y,N\n0,2,0,1\n", OutOfRangeState),
    ("Z,T,Y,N\n0,0,0,1\n0,0,0,2\n", DuplicateAssignment),
    ("Z,T,Y,N\n0,0,1\n", HeaderMismatch),
    ("", HeaderMismatch),
])
def test_load_errors(case1, text, exc):
    with pytest.raises(exc):
        load_counts(text, case1)


def test_conditionals_from_simpson(simpson):
    j = empirical_joint(simpson)
    assert j.cond({"Y": 1}, {"Z": 1, "T": 1}) == pytest.approx(36 / 40, abs=1e-12)
    assert j.cond({"Y": 1}, {"Z": 0, "T": 0}) == pytest.approx(0.25, abs=1e-12)
    assert j.cond({"Y": 1}, {"Z": 0, "T": 1}) == pytest.approx(0.5, abs=1e-12)
    assert j.cond({"Y": 1}, {"Z": 1, "T": 0}) == pytest.approx(0.8, abs=1e-12)
    assert j.cond({"Y": 1}, {"T": 0}) == pytest.approx(250 / 450, abs=1e-12)
    assert j.cond({"Y": 1}, {"T": 1}) == pytest.approx(0.54, abs=1e-12)


def test_all_mass_on_one_row(case1):
    j = empirical_joint(load_counts("Z,T,Y,N\n1,0,1,7\n", case1))
    assert j.prob({"Z": 1, "T": 0, "Y": 1}) == 1.0
    assert j.prob({"Z": 0}) == 0.0


def test_empty_table(case1):
    with pytest.raises(EmptyTable):
        empirical_joint(load_counts("Z,T,Y,N\n", case1))
    with pytest.raises(EmptyTable):
        empirical_joint(load_counts("Z,T,Y,N\n0,0,0,0\n", case1))


def test_zero_conditioning_mass(case1):
    j = empirical_joint(load_counts("Z,T,Y,N\n0,0,0,3\n", case1))
    with pytest.raises(ZeroConditioningMass) as err:
        j.cond({"Y": 1}, {"T": 1})
    assert "T=1" in str(err.value)


def test_marginalize_and_scale(simpson):
    ty = simpson.marginalize(["T", "Y"])
    assert ty.variables == ("T", "Y")
    assert ty.to_array().tolist() == [[200, 250], [184, 216]]
    assert simpson.scaled(100).total == 85_000


counts_tables = st.lists(
    st.integers(0, 50), min_size=8, max_size=8
).filter(lambda xs: sum(xs) > 0)


@settings(max_examples=100, deadline=None)
@given(counts_tables)
def test_serialize_round_trip_and_normalization(counts):
    case1 = load_graph("case1")
    arr = np.array(counts).reshape(2, 2, 2)
    t = CountsTable.from_array(("Z", "T", "Y"), arr)
    again = load_counts(serialize_counts(t), case1)
    assert again == t
    assert again.to_array().tolist() == arr.tolist()
    assert abs(empirical_joint(t).mass.sum() - 1.0) < 1e-12
