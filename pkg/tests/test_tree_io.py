import json
import math

import pytest
from hypothesis import given, strategies as st

from perfgrove.binning import BinSet
from perfgrove.errors import FormatError
from perfgrove.id3 import Internal, Leaf, ProbDist, iter_leaves, iter_paths
from perfgrove.tree_io import from_json, parse_appendix, render_appendix, to_json


def test_parse_fragment():
    tree = parse_appendix("{ 'nodes': { 2: <ProbDist 8.6-8.3=1.0>}}")
    assert tree == Internal("nodes", {2: Leaf(ProbDist({"8.6-8.3": 1.0}))})
    leaf = tree.children[2]
    assert leaf.n == 0 and leaf.synthetic


def test_parse_bare_leaf():
    tree = parse_appendix("<ProbDist 6.7-5.8=0.5, 7.7-6.7=0.5>")
    assert tree == Leaf(ProbDist({"6.7-5.8": 0.5, "7.7-6.7": 0.5}))


def test_bad_sum_reports_offset():
    with pytest.raises(FormatError, match="sum") as info:
        parse_appendix("{ 'nodes': { 2: <ProbDist 8.6-8.3=0.6>}}")
    assert info.value.offset == 16


@pytest.mark.parametrize(
    "text",
    [
        "{ 'nodes': { 2: <ProbDist 8.6-8.3=1.0>}",
        "{ 'nodes': { 2: <ProbDist 8.6-8.3=1.0>}}}",
        "{ nodes: { 2: <ProbDist 8.6-8.3=1.0>}}",
        "{ 'nodes': { 2: <ProbDist 8.6=1.0>}}",
        "{ 'nodes': { 2: <ProbDist 8.6-8.3=1.0>, 2: <ProbDist 8.6-8.3=1.0>}}",
        "",
    ],
)
def test_malformed(text):
    with pytest.raises(FormatError) as info:
        parse_appendix(text)
    assert info.value.offset is not None


def test_render_leaf():
    assert render_appendix(Leaf(ProbDist({"8.6-8.3": 1.0}))) == "<ProbDist 8.6-8.3=1.0>"


def test_render_orders_branches_and_entries():
    tree = Internal(
        "nodes",
        {4: Leaf(ProbDist({"6.7-5.8": 0.5, "7.7-6.7": 0.5})), 2: Leaf(ProbDist({"8.6-8.3": 1.0}))},
    )
    assert render_appendix(tree) == (
        "{ 'nodes': {\n"
        "  2: <ProbDist 8.6-8.3=1.0>,\n"
        "  4: <ProbDist 7.7-6.7=0.5, 6.7-5.8=0.5>}}"
    )


def test_fixture_round_trip(appendix_text):
    tree = parse_appendix(appendix_text)
    text = render_appendix(tree)
    again = parse_appendix(text)
    assert again == tree
    assert render_appendix(again) == text


def test_fixture_through_json(appendix_model):
    tree, binset = from_json(to_json(appendix_model.tree, appendix_model.binset))
    assert tree == appendix_model.tree
    assert binset == appendix_model.binset
    assert all(leaf.synthetic for leaf in iter_leaves(tree))


def test_json_keeps_counts():
    tree = Internal("a", {1: Leaf(ProbDist({"2-1": 1.0}), n=5), 2: Leaf(ProbDist({"3-2": 1.0}), n=7)})
    back, _ = from_json(to_json(tree, BinSet((1.0, 2.0, 3.0))))
    assert [leaf.n for leaf in iter_leaves(back)] == [5, 7]


def test_json_version_checks():
    obj = json.loads(to_json(Leaf(ProbDist({"2-1": 1.0})), BinSet((1.0, 2.0))))
    del obj["format_version"]
    with pytest.raises(FormatError, match="format_version"):
        from_json(json.dumps(obj))
    obj["format_version"] = 2
    with pytest.raises(FormatError, match="unsupported"):
        from_json(json.dumps(obj))
    with pytest.raises(FormatError):
        from_json("{not json")


# random trees over a small label ladder
LABELS = ["12.5-10", "10-8.25", "8.25-7", "7-3.5", "3.5-1"]


@st.composite
def dists(draw):
    chosen = draw(st.lists(st.sampled_from(LABELS), min_size=1, max_size=4, unique=True))
    weights = draw(st.lists(st.integers(1, 8), min_size=len(chosen), max_size=len(chosen)))
    total = sum(weights)
    probs = {lab: w / total for lab, w in zip(chosen, weights)}
    # keep the sum exact so the parse tolerance is not what is being tested
    drift = 1.0 - math.fsum(probs.values())
    probs[chosen[0]] += drift
    return ProbDist(probs)


def trees(depth=3):
    leaf = st.builds(lambda d, n: Leaf(d, n=n), dists(), st.integers(0, 20))
    if depth == 0:
        return leaf
    inner = st.builds(
        Internal,
        st.sampled_from(["query", "nodes", "replication", "blk_range"]),
        st.dictionaries(st.integers(0, 300), trees(depth - 1), min_size=1, max_size=4),
    )
    return st.one_of(leaf, inner)


@given(trees())
def test_appendix_identity(tree):
    text = render_appendix(tree)
    assert parse_appendix(text) == tree
    assert render_appendix(parse_appendix(text)) == text


@given(trees())
def test_json_identity(tree):
    binset = BinSet((1.0, 3.5, 7.0, 8.25, 10.0, 12.5))
    back, bs = from_json(to_json(tree, binset))
    assert back == tree and bs == binset
    counts = lambda t: {path: leaf.n for path, leaf in iter_paths(t)}
    assert counts(back) == counts(tree)
    assert to_json(back, bs) == to_json(tree, binset)


@given(trees())
def test_parsed_dists_sum_to_one(tree):
    for leaf in iter_leaves(parse_appendix(render_appendix(tree))):
        assert abs(math.fsum(leaf.dist.values()) - 1.0) <= 1e-6
