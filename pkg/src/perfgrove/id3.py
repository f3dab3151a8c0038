"""ID3 induction over categorical execution-setting attributes.

Leaves keep the empirical distribution of execution-time bins among the
training samples that reach them instead of a single class.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterator, Sequence, Union

from perfgrove.binning import parse_label
from perfgrove.errors import DomainError
from perfgrove.records import AttributeSchema

Assignment = Mapping[str, Any]
Sample = tuple[Assignment, str]


def label_order_key(label: str):
    """Sort key putting bins with larger upper bounds first."""
    try:
        lo, hi = parse_label(label)
    except DomainError:
        return (1, 0.0, 0.0, label)
    return (0, -hi, -lo, label)


class ProbDist(Mapping):
    """Immutable mapping from bin label to probability.

    Zero entries are dropped; the remaining probabilities must lie in
    (0, 1] and sum to one within ``tol``.
    """

    __slots__ = ("_p",)

    def __init__(self, probs: Mapping[str, float], tol: float = 1e-9):
        p = {str(k): float(v) for k, v in probs.items() if v != 0}
        if not p:
            raise DomainError("a distribution needs at least one entry")
        for k, v in p.items():
            if not 0.0 < v <= 1.0 + tol:
                raise DomainError(f"probability of {k!r} is {v!r}, outside (0, 1]")
        total = math.fsum(p.values())
        if abs(total - 1.0) > tol:
            raise DomainError(f"probabilities sum to {total!r}, not 1")
        self._p = dict(sorted(p.items(), key=lambda kv: label_order_key(kv[0])))

    def __getitem__(self, label: str) -> float:
        return self._p[label]

    def __iter__(self) -> Iterator[str]:
        return iter(self._p)

    def __len__(self) -> int:
        return len(self._p)

    def __eq__(self, other) -> bool:
        if isinstance(other, ProbDist):
            return self._p == other._p
        if isinstance(other, Mapping):
            return self._p == dict(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._p.items()))

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={v!r}" for k, v in self._p.items())
        return f"<ProbDist {inner}>"

    def top(self) -> str:
        """Most probable label; ties go to the bin with the larger upper bound."""
        best = max(self._p.values())
        # _p is already ordered by descending upper bound
        return next(k for k, v in self._p.items() if v == best)

    @classmethod
    def mixture(cls, parts: Sequence[tuple[float, "ProbDist"]]) -> "ProbDist":
        total = math.fsum(w for w, _ in parts)
        if not total > 0:
            raise DomainError("mixture weights must have a positive sum")
        acc: dict[str, list[float]] = {}
        for w, dist in parts:
            for k, v in dist.items():
                acc.setdefault(k, []).append(w * v / total)
        return cls({k: math.fsum(vs) for k, vs in acc.items()})


@dataclass(frozen=True)
class Leaf:
    dist: ProbDist
    # sample count is metadata; structural equality ignores it
    n: int = field(default=0, compare=False)
    synthetic: bool = field(default=False, compare=False)


@dataclass(frozen=True)
class Internal:
    attribute: str
    children: dict[Hashable, "Node"]


Node = Union[Leaf, Internal]


@dataclass(frozen=True)
class TrainParams:
    min_samples_leaf: int = 1
    gain_epsilon: float = 1e-12

    def __post_init__(self):
        if self.min_samples_leaf < 1:
            raise DomainError("min_samples_leaf must be at least 1")
        if not self.gain_epsilon > 0:
            raise DomainError("gain_epsilon must be positive")


def entropy(class_counts: Sequence[int]) -> float:
    """Shannon entropy in bits of a class histogram."""
    if any(c < 0 for c in class_counts):
        raise DomainError("class counts must be nonnegative")
    total = sum(class_counts)
    if total <= 0:
        raise DomainError("entropy of an empty histogram is undefined")
    h = -math.fsum((c / total) * math.log2(c / total) for c in class_counts if c > 0)
    # -0.0 and tiny negatives from rounding on pure nodes
    return max(h, 0.0)


def _label_entropy(labels: Sequence[str]) -> float:
    return entropy(list(Counter(labels).values()))


def _partition(samples: Sequence[Sample], attribute: str) -> dict[Hashable, list[Sample]]:
    groups: dict[Hashable, list[Sample]] = {}
    for values, label in samples:
        try:
            v = values[attribute]
        except KeyError:
            raise DomainError(f"sample has no value for attribute {attribute!r}") from None
        groups.setdefault(v, []).append((values, label))
    return groups


def information_gain(samples: Sequence[Sample], attribute: str) -> float:
    if not samples:
        raise DomainError("information gain of an empty sample set is undefined")
    n = len(samples)
    parent = _label_entropy([lab for _, lab in samples])
    groups = _partition(samples, attribute)
    remainder = math.fsum(len(g) / n * _label_entropy([lab for _, lab in g]) for g in groups.values())
    # clamp rounding so that 0 <= IG <= H holds exactly
    return min(max(parent - remainder, 0.0), parent)


def best_attribute(samples: Sequence[Sample], candidates: Sequence[str], gain_epsilon: float = 1e-12) -> str:
    """Candidate with maximal gain; near-ties go to the earliest candidate."""
    if not candidates:
        raise DomainError("no candidate attributes")
    gains = [information_gain(samples, a) for a in candidates]
    best = max(gains)
    for a, g in zip(candidates, gains):
        if g >= best - gain_epsilon:
            return a
    raise AssertionError("unreachable")


def leaf_distribution(samples: Sequence[Sample]) -> ProbDist:
    if not samples:
        raise DomainError("leaf distribution of an empty sample set is undefined")
    counts = Counter(lab for _, lab in samples)
    n = len(samples)
    return ProbDist({lab: c / n for lab, c in counts.items()})


def _sort_values(values):
    try:
        return sorted(values)
    except TypeError:
        return sorted(values, key=repr)


def build_tree(samples: Sequence[Sample], schema: AttributeSchema, params: TrainParams | None = None) -> Node:
    """Grow an unpruned ID3 tree.

    A node becomes a leaf when its labels agree, no attributes remain, no
    remaining attribute has gain above ``gain_epsilon``, or it holds fewer
    than ``2 * min_samples_leaf`` samples. Children exist only for values
    seen at the node and are kept in ascending value order.
    """
    params = params or TrainParams()
    if not samples:
        raise DomainError("cannot build a tree from no samples")
    return _grow(list(samples), tuple(schema.attributes), params)


def _grow(samples: list[Sample], candidates: tuple[str, ...], params: TrainParams) -> Node:
    labels = {lab for _, lab in samples}
    if len(labels) == 1 or not candidates or len(samples) < 2 * params.min_samples_leaf:
        return Leaf(leaf_distribution(samples), n=len(samples))
    gains = [information_gain(samples, a) for a in candidates]
    if max(gains) <= params.gain_epsilon:
        return Leaf(leaf_distribution(samples), n=len(samples))
    attr = best_attribute(samples, candidates, params.gain_epsilon)
    groups = _partition(samples, attr)
    rest = tuple(a for a in candidates if a != attr)
    children = {v: _grow(groups[v], rest, params) for v in _sort_values(groups)}
    return Internal(attr, children)


def iter_leaves(node: Node) -> Iterator[Leaf]:
    if isinstance(node, Leaf):
        yield node
        return
    for child in node.children.values():
        yield from iter_leaves(child)


def iter_paths(node: Node, prefix: tuple = ()) -> Iterator[tuple[tuple[tuple[str, Any], ...], Leaf]]:
    """Yield ``(path, leaf)`` pairs; a path is a tuple of (attribute, value)."""
    if isinstance(node, Leaf):
        yield prefix, node
        return
    for v, child in node.children.items():
        yield from iter_paths(child, prefix + ((node.attribute, v),))


def leaf_labels(node: Node) -> set[str]:
    return {lab for leaf in iter_leaves(node) for lab in leaf.dist}


def sample_count(node: Node) -> int:
    return sum(leaf.n for leaf in iter_leaves(node))
