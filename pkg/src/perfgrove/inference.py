"""Execution-time range prediction and anomaly flagging."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Mapping, Sequence

from perfgrove.binning import Bin, BinSet
from perfgrove.errors import DomainError, InputError, PolicyError
from perfgrove.id3 import Internal, Leaf, Node, ProbDist, leaf_labels
from perfgrove.records import RunRecord

EXACT = "exact"
FALLBACK = "fallback"


@dataclass(frozen=True)
class Prediction:
    prob_dist: ProbDist
    top_bin: str
    confidence: str
    path: tuple[tuple[str, Any], ...] = ()


def _aggregate(node: Node) -> tuple[ProbDist, int]:
    """Distribution of a whole subtree plus its sample count.

    Children are weighted by their sample counts; if any child carries no
    counts (trees read from listings without them) children weigh equally.
    """
    if isinstance(node, Leaf):
        return node.dist, node.n
    parts = [_aggregate(child) for child in node.children.values()]
    counts = [n for _, n in parts]
    if all(n > 0 for n in counts):
        weighted = [(n, d) for d, n in parts]
    else:
        weighted = [(1.0, d) for d, _ in parts]
    return ProbDist.mixture(weighted), sum(counts)


def predict(tree: Node, assignment: Mapping[str, Any]) -> Prediction:
    node = tree
    path = []
    while isinstance(node, Internal):
        if node.attribute not in assignment:
            raise InputError(node.attribute)
        value = assignment[node.attribute]
        child = node.children.get(value)
        if child is None:
            dist, _ = _aggregate(node)
            return Prediction(dist, dist.top(), FALLBACK, tuple(path))
        path.append((node.attribute, value))
        node = child
    return Prediction(node.dist, node.dist.top(), EXACT, tuple(path))


@dataclass(frozen=True)
class AcceptPolicy:
    """Which predicted bins count as the expected range.

    ``top`` accepts the most probable bin only. ``p_min`` accepts every
    bin with probability at least ``p_min`` and always keeps the top bin,
    so ``p_min=0`` accepts the whole support.
    """

    mode: str = "top"
    p_min: float = 0.0

    def __post_init__(self):
        if self.mode not in ("top", "p_min"):
            raise PolicyError(f"unknown accept policy {self.mode!r}")
        if not 0.0 <= self.p_min <= 1.0:
            raise PolicyError(f"p_min must lie in [0, 1], got {self.p_min!r}")

    @classmethod
    def top(cls) -> "AcceptPolicy":
        return cls("top")

    @classmethod
    def at_least(cls, p_min: float) -> "AcceptPolicy":
        return cls("p_min", p_min)

    @classmethod
    def any_bin(cls) -> "AcceptPolicy":
        return cls("p_min", 0.0)

    @classmethod
    def parse(cls, text: str) -> "AcceptPolicy":
        text = text.strip()
        if text == "top":
            return cls.top()
        if text == "any":
            return cls.any_bin()
        key, sep, value = text.partition("=")
        if key.strip() == "p_min" and sep:
            try:
                return cls.at_least(float(value))
            except ValueError:
                pass
        raise PolicyError(f"cannot parse accept policy {text!r}; expected top, any or p_min=<x>")

    def accepted(self, dist: ProbDist) -> list[str]:
        top = dist.top()
        if self.mode == "top":
            return [top]
        return [lab for lab, p in dist.items() if p >= self.p_min or lab == top]

    def __str__(self) -> str:
        return "top" if self.mode == "top" else f"p_min={self.p_min!r}"


@dataclass(frozen=True)
class AnomalyReport:
    record: RunRecord
    prediction: Prediction
    accepted_bins: tuple[str, ...]
    is_anomaly: bool
    margin: float

    def to_dict(self) -> dict:
        out = asdict(self.record)
        out.update(
            top_bin=self.prediction.top_bin,
            accepted=list(self.accepted_bins),
            is_anomaly=self.is_anomaly,
            margin=self.margin,
            confidence=self.prediction.confidence,
        )
        return out


def binset_for(tree: Node) -> BinSet:
    return BinSet.from_labels(leaf_labels(tree))


def _accepted_ranges(labels: Sequence[str], binset: BinSet) -> list[Bin]:
    return [binset.get(lab) for lab in labels]


def detect_anomaly(
    tree: Node,
    record: RunRecord,
    policy: AcceptPolicy | None = None,
    binset: BinSet | None = None,
) -> AnomalyReport:
    """Compare a measured run against the range its setting predicts.

    ``margin`` is the distance in minutes to the nearest accepted range.
    A time sitting exactly on the open lower bound of an accepted bin is
    outside it; its margin is reported as one ulp so that a zero margin
    always means "not an anomaly".
    """
    policy = policy or AcceptPolicy.top()
    binset = binset or binset_for(tree)
    pred = predict(tree, record.assignment())
    accepted = policy.accepted(pred.prob_dist)
    ranges = _accepted_ranges(accepted, binset)
    t = record.exec_minutes
    inside = any(t in r for r in ranges)
    if inside:
        margin = 0.0
    else:
        margin = min(r.distance(t) for r in ranges)
        if margin == 0.0:
            margin = math.ulp(t)
    return AnomalyReport(record, pred, tuple(accepted), not inside, margin)


@dataclass
class CoverageSummary:
    total: int
    covered: int
    per_query: dict[int, tuple[int, int]] = field(default_factory=dict)
    reports: list[AnomalyReport] = field(default_factory=list, repr=False)

    @property
    def coverage(self) -> float:
        return self.covered / self.total

    @property
    def anomalies(self) -> list[AnomalyReport]:
        return [r for r in self.reports if r.is_anomaly]

    def query_coverage(self, query: int) -> float:
        covered, total = self.per_query[query]
        return covered / total


def batch_evaluate(
    tree: Node,
    records: Sequence[RunRecord],
    policy: AcceptPolicy | None = None,
    binset: BinSet | None = None,
) -> CoverageSummary:
    """Fraction of runs whose time lies in the accepted predicted range."""
    if not records:
        raise DomainError("batch_evaluate needs at least one record")
    binset = binset or binset_for(tree)
    reports = [detect_anomaly(tree, rec, policy, binset) for rec in records]
    per_query: dict[int, list[int]] = {}
    for rep in reports:
        tally = per_query.setdefault(rep.record.query, [0, 0])
        tally[0] += not rep.is_anomaly
        tally[1] += 1
    covered = sum(not r.is_anomaly for r in reports)
    return CoverageSummary(
        total=len(reports),
        covered=covered,
        per_query={q: (c, n) for q, (c, n) in sorted(per_query.items())},
        reports=reports,
    )
