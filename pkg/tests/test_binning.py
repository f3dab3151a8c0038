import pytest
from hypothesis import assume, given, strategies as st

from perfgrove.binning import (
    BinSet,
    KneePolicy,
    bin_of,
    bin_times,
    build_binset,
    detect_knees,
    format_minutes,
    knee_indices,
    make_label,
    parse_label,
    relative_gaps,
)
from perfgrove.errors import DomainError, PolicyError

from .conftest import SCALING_TIMES

# gaps written out by hand from the descending list 41.32, 39.22, 34.18, 32, 27.26
SCALING_GAPS = [
    (41.32 - 39.22) / 39.22,
    (39.22 - 34.18) / 34.18,
    (34.18 - 32.0) / 32.0,
    (32.0 - 27.26) / 27.26,
]


def test_scaling_gaps():
    gaps = relative_gaps(SCALING_TIMES)
    assert gaps == pytest.approx(SCALING_GAPS, rel=1e-12)
    assert [round(g, 4) for g in gaps] == [0.0535, 0.1475, 0.0681, 0.1739]


def test_two_point_gap():
    assert relative_gaps([8.6, 8.3]) == pytest.approx([0.3 / 8.3])


def test_single_value_has_no_gaps():
    assert relative_gaps([5.0]) == []


def test_nonpositive_time_rejected():
    with pytest.raises(DomainError):
        relative_gaps([1.0, 0.0])


def test_threshold_knees_scaling():
    assert detect_knees(SCALING_TIMES, KneePolicy.threshold(0.10)) == [27.26, 34.18]


def test_top_k_knees_scaling():
    assert knee_indices(SCALING_TIMES, KneePolicy.top_k(3)) == [1, 3]
    assert detect_knees(SCALING_TIMES, KneePolicy.top_k(3)) == [27.26, 34.18]


def test_top_k_too_large():
    with pytest.raises(PolicyError):
        detect_knees([3.0, 3.0, 2.0], KneePolicy.top_k(3))


def test_top_k_ties_go_to_earlier_gap():
    # 8 -> 4 and 4 -> 2 both have gap 1.0
    assert knee_indices([8.0, 4.0, 2.0], KneePolicy.top_k(2)) == [0]


def test_bad_policies():
    with pytest.raises(PolicyError):
        KneePolicy.threshold(0)
    with pytest.raises(PolicyError):
        KneePolicy.top_k(0)


def test_build_binset_drops_min_knee():
    bs = build_binset(SCALING_TIMES, [34.18, 27.26])
    assert bs.boundaries == (27.26, 34.18, 41.32)
    assert bs.labels == ["41.32-34.18", "34.18-27.26"]
    assert bs.bins[1].closed_low and not bs.bins[0].closed_low


def test_build_binset_rejects_foreign_knees():
    with pytest.raises(DomainError):
        build_binset(SCALING_TIMES, [50.0])
    with pytest.raises(DomainError):
        build_binset(SCALING_TIMES, [30.0])


def test_bin_of_boundary_goes_low():
    bs = BinSet((8.15, 8.3, 8.6))
    assert bin_of(bs, 8.3) == "8.3-8.15"
    assert bin_of(bs, 8.15) == "8.3-8.15"
    assert bin_of(bs, 8.6) == "8.6-8.3"
    assert bin_of(bs, 8.1) is None


def test_bin_of_above_fixture_range(appendix_model):
    assert appendix_model.binset.hi == 71.12
    assert bin_of(appendix_model.binset, 100.0) is None


def test_labels():
    assert make_label(8.3, 8.6) == "8.6-8.3"
    assert make_label(2.0, 3.0) == "3-2"
    assert parse_label("71.12-58.39") == (58.39, 71.12)
    assert format_minutes(32.0) == "32"
    with pytest.raises(DomainError):
        parse_label("5-9")


def test_single_time_gives_degenerate_bin():
    bs = bin_times([4.0, 4.0])
    assert len(bs) == 1 and bs.labels == ["4-4"]
    assert bin_of(bs, 4.0) == "4-4"


def test_from_labels_rejects_holes():
    assert BinSet.from_labels(["3-2", "2-1"]).boundaries == (1.0, 2.0, 3.0)
    with pytest.raises(DomainError):
        BinSet.from_labels(["3-1", "2-1"])


def test_get_unknown_label():
    with pytest.raises(DomainError):
        BinSet((1.0, 2.0)).get("9-8")


times_st = st.lists(
    st.floats(min_value=0.01, max_value=1e4, allow_nan=False, allow_infinity=False),
    min_size=1,
    max_size=40,
)
policy_st = st.one_of(
    st.floats(min_value=1e-3, max_value=2.0).map(KneePolicy.threshold),
    st.integers(min_value=1, max_value=6).map(KneePolicy.top_k),
)


@given(times_st, policy_st)
def test_partition_property(times, policy):
    assume(policy.mode == "threshold" or policy.k <= len(set(times)))
    bs = bin_times(times, policy)
    for t in times:
        hits = [b for b in bs.bins if t in b]
        assert len(hits) == 1
        assert hits[0].label == bin_of(bs, t)


@given(times_st, policy_st)
def test_boundaries_are_observed(times, policy):
    assume(policy.mode == "threshold" or policy.k <= len(set(times)))
    bs = bin_times(times, policy)
    inner = bs.boundaries[1:-1]
    assert set(bs.boundaries) <= set(times)
    assert len(bs) == len(inner) + 1


@given(times_st, st.floats(min_value=0.01, max_value=100.0), st.integers(1, 5))
def test_scale_invariance(times, c, k):
    gaps = relative_gaps(times)
    # top-k ranks gaps, so keep clear of near-ties that rounding could reorder
    positive = sorted(g for g in gaps if g > 0)
    assume(all(b - a > 1e-6 for a, b in zip(positive, positive[1:])))
    assume(all(g == 0 or g > 1e-6 for g in gaps))
    assume(k <= len(set(times)))
    scaled = [t * c for t in times]
    assume(len(set(scaled)) == len(set(times)))
    pol = KneePolicy.top_k(k)
    assert knee_indices(scaled, pol) == knee_indices(times, pol)


@given(times_st, policy_st)
def test_monotone_labels(times, policy):
    assume(policy.mode == "threshold" or policy.k <= len(set(times)))
    bins = bin_times(times, policy).bins
    assert [b.hi for b in bins] == sorted((b.hi for b in bins), reverse=True)
