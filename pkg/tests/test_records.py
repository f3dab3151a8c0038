import dataclasses
import random

import pytest
from hypothesis import given, strategies as st

from perfgrove.errors import DomainError, FormatError
from perfgrove.records import ATTRIBUTES, RunRecord, parse_records, render_records, schema_of, validate

from .conftest import SCALING_NODES, SCALING_TIMES

HEADER = "query,nodes,data_size,replication,blk_range,colocated,exec_minutes"


def test_single_row_maps_fields():
    recs = parse_records(HEADER + "\n1,2,1,2,64,1,8.45\n")
    assert recs == [RunRecord(query=1, nodes=2, data_size=1, replication=2, blk_range=64, colocated=1, exec_minutes=8.45)]


def test_column_order_is_free():
    text = "exec_minutes,colocated,blk_range,replication,data_size,nodes,query\n8.45,1,64,2,1,2,1\n"
    assert parse_records(text)[0] == parse_records(HEADER + "\n1,2,1,2,64,1,8.45\n")[0]


def test_scaling_rows(scaling_records):
    text = HEADER + "\n" + "\n".join(f"1,{n},1,3,64,1,{t}" for n, t in zip(SCALING_NODES, SCALING_TIMES))
    recs = parse_records(text)
    assert len(recs) == 5
    assert [r.exec_minutes for r in recs] == list(SCALING_TIMES)
    assert recs == scaling_records


def test_non_numeric_cell_reports_row():
    text = HEADER + "\n1,2,1,2,64,1,8.45\n1,2,1,2,64,1,abc\n"
    with pytest.raises(FormatError) as info:
        parse_records(text)
    assert info.value.row == 2
    assert "row 2" in str(info.value)


def test_missing_column_is_named():
    with pytest.raises(FormatError, match="colocated"):
        parse_records("query,nodes,data_size,replication,blk_range,exec_minutes\n1,2,1,2,64,8.0\n")


@pytest.mark.parametrize("text", ["", "\n\n", "# only a comment\n"])
def test_empty_input(text):
    with pytest.raises(FormatError):
        parse_records(text)


def test_fractional_integer_field_rejected():
    with pytest.raises(FormatError, match="integer"):
        parse_records(HEADER + "\n1,2.5,1,2,64,1,8.0\n")


def test_comment_lines_skipped():
    recs = parse_records("# seed=3\n" + HEADER + "\n# mid\n1,2,1,2,64,1,8.45\n")
    assert len(recs) == 1


def test_validate_examples(scaling_records):
    base = scaling_records[0]
    bad = dataclasses.replace(base, nodes=0)
    rep = validate([bad])
    assert [(i.index, i.field) for i in rep.errors] == [(0, "nodes")]
    warn = dataclasses.replace(base, replication=6, nodes=4)
    rep = validate([warn])
    assert rep.ok and [(i.index, i.field) for i in rep.warnings] == [(0, "replication")]
    # the 2-node run uses replication 3, which trips the advisory rule
    rep = validate(scaling_records)
    assert rep.ok and not rep.errors
    assert [(i.index, i.field) for i in rep.warnings] == [(0, "replication")]


def test_colocated_must_be_flag(scaling_records):
    rep = validate([dataclasses.replace(scaling_records[0], colocated=2)])
    assert [i.field for i in rep.errors] == ["colocated"]


def test_schema_examples(scaling_records):
    s = schema_of(scaling_records)
    assert s.attributes == ATTRIBUTES
    assert s.values["nodes"] == (2, 4, 8, 12, 16)
    assert s.values["replication"] == (3,)
    single = schema_of(scaling_records[:1])
    assert all(len(v) == 1 for v in single.values.values())
    a = scaling_records[0]
    two = schema_of([a, dataclasses.replace(a, blk_range=128)])
    assert two.values["blk_range"] == (64, 128)
    assert all(len(two.values[k]) == 1 for k in ATTRIBUTES if k != "blk_range")
    with pytest.raises(DomainError):
        schema_of([])


positive_int = st.integers(min_value=1, max_value=10_000)
positive_float = st.floats(min_value=1e-6, max_value=1e6, allow_nan=False, allow_infinity=False)

records_st = st.builds(
    RunRecord,
    query=positive_int,
    nodes=positive_int,
    data_size=st.one_of(positive_int, positive_float.filter(lambda x: not x.is_integer())),
    replication=positive_int,
    blk_range=positive_int,
    colocated=st.sampled_from([0, 1]),
    exec_minutes=positive_float,
)


@given(st.lists(records_st, min_size=1, max_size=30))
def test_render_parse_round_trip(records):
    assert parse_records(render_records(records, "seed=1")) == records


@given(st.lists(records_st, min_size=1, max_size=20), st.randoms(use_true_random=False))
def test_schema_permutation_invariant(records, rnd):
    shuffled = list(records)
    rnd.shuffle(shuffled)
    assert schema_of(shuffled) == schema_of(records)


mixed_st = st.builds(
    RunRecord,
    query=st.integers(-3, 5),
    nodes=st.integers(-3, 5),
    data_size=st.floats(-5, 5, allow_nan=False),
    replication=st.integers(-3, 5),
    blk_range=st.integers(-3, 5),
    colocated=st.integers(-1, 2),
    exec_minutes=st.floats(-5, 5, allow_nan=False),
)


@given(st.lists(mixed_st, max_size=20))
def test_validate_is_pure_and_bounded(records):
    before = list(records)
    rep = validate(records)
    assert records == before
    assert len(rep.errors) <= len(records) * 7
    assert all(0 <= i.index < len(records) for i in rep.errors + rep.warnings)
