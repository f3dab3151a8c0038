"""Knee-point discretization of execution times into contiguous ranges.

Times are sorted descending and the relative gap between neighbours,
``(t[i] - t[i+1]) / t[i+1]``, is computed. A knee is a gap that is large
either in absolute terms (threshold mode) or relative to the other gaps
(top-k mode). Each knee places a boundary at the lower of its two times,
so bins are half-open ``(lo, hi]`` with the lowest bin closed.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Iterable, Sequence

from perfgrove.errors import DomainError, PolicyError

DEFAULT_THETA = 0.05


def format_minutes(value: float) -> str:
    """Shortest round-trip decimal, without a trailing ``.0``."""
    text = repr(float(value))
    return text[:-2] if text.endswith(".0") else text


def make_label(lo: float, hi: float) -> str:
    return f"{format_minutes(hi)}-{format_minutes(lo)}"


def parse_label(label: str) -> tuple[float, float]:
    """Return ``(lo, hi)`` for a ``"<hi>-<lo>"`` label."""
    hi_text, sep, lo_text = label.strip().partition("-")
    if not sep:
        raise DomainError(f"bad bin label {label!r}")
    try:
        hi, lo = float(hi_text), float(lo_text)
    except ValueError:
        raise DomainError(f"bad bin label {label!r}") from None
    if lo > hi:
        raise DomainError(f"bin label {label!r} has its bounds reversed")
    return lo, hi


@dataclass(frozen=True)
class Bin:
    lo: float
    hi: float
    closed_low: bool = False

    @property
    def label(self) -> str:
        return make_label(self.lo, self.hi)

    @property
    def midpoint(self) -> float:
        return (self.lo + self.hi) / 2.0

    def __contains__(self, t: float) -> bool:
        if self.closed_low:
            return self.lo <= t <= self.hi
        return self.lo < t <= self.hi

    def distance(self, t: float) -> float:
        """Minutes between ``t`` and this bin; 0 when ``t`` lies inside."""
        if t in self:
            return 0.0
        if t > self.hi:
            return t - self.hi
        return self.lo - t


@dataclass(frozen=True)
class BinSet:
    """Ordered contiguous execution-time ranges.

    ``boundaries`` ascend; bin ``k`` (in ascending order) covers
    ``(boundaries[k], boundaries[k+1]]`` and the lowest bin also contains
    ``boundaries[0]``. A single observed value gives one zero-width bin.
    """

    boundaries: tuple[float, ...]

    def __post_init__(self):
        b = tuple(float(x) for x in self.boundaries)
        object.__setattr__(self, "boundaries", b)
        if len(b) < 2:
            raise DomainError("a BinSet needs at least two boundaries")
        if len(b) == 2:
            if b[0] > b[1]:
                raise DomainError("boundaries must ascend")
        elif any(x >= y for x, y in zip(b, b[1:])):
            raise DomainError("boundaries must be strictly ascending")

    @property
    def lo(self) -> float:
        return self.boundaries[0]

    @property
    def hi(self) -> float:
        return self.boundaries[-1]

    @property
    def bins(self) -> list[Bin]:
        """Bins from the highest range down, the order labels are listed in."""
        b = self.boundaries
        ascending = [Bin(b[k], b[k + 1], closed_low=(k == 0)) for k in range(len(b) - 1)]
        return ascending[::-1]

    @property
    def labels(self) -> list[str]:
        return [x.label for x in self.bins]

    def __len__(self) -> int:
        return len(self.boundaries) - 1

    def get(self, label: str) -> Bin:
        for x in self.bins:
            if x.label == label:
                return x
        raise DomainError(f"bin {label!r} is not part of this bin set")

    def render(self) -> str:
        return "\n".join(self.labels) + "\n"

    @classmethod
    def from_labels(cls, labels: Iterable[str]) -> "BinSet":
        """Rebuild a bin set from a label vocabulary such as a tree's leaves.

        Every label must span two adjacent values of the combined boundary
        set; a vocabulary with holes or overlaps is rejected.
        """
        spans = {parse_label(lab) for lab in labels}
        if not spans:
            raise DomainError("no labels given")
        points = sorted({v for span in spans for v in span})
        adjacent = set(zip(points, points[1:])) or {(points[0], points[0])}
        for span in spans:
            if span not in adjacent:
                raise DomainError(f"label {make_label(*span)!r} does not span adjacent boundaries")
        return cls(tuple(points) if len(points) > 1 else (points[0], points[0]))


@dataclass(frozen=True)
class KneePolicy:
    mode: str = "threshold"
    theta: float = DEFAULT_THETA
    k: int | None = None

    def __post_init__(self):
        if self.mode == "threshold":
            if not self.theta > 0:
                raise PolicyError(f"theta must be positive, got {self.theta!r}")
        elif self.mode == "top_k":
            if self.k is None or self.k < 1:
                raise PolicyError(f"k must be at least 1, got {self.k!r}")
        else:
            raise PolicyError(f"unknown knee mode {self.mode!r}")

    @classmethod
    def threshold(cls, theta: float = DEFAULT_THETA) -> "KneePolicy":
        return cls("threshold", theta=theta)

    @classmethod
    def top_k(cls, k: int) -> "KneePolicy":
        return cls("top_k", k=k)


def _descending(times: Sequence[float]) -> list[float]:
    if len(times) == 0:
        raise DomainError("no execution times given")
    for t in times:
        if not t > 0:
            raise DomainError(f"execution times must be positive, got {t!r}")
    return sorted((float(t) for t in times), reverse=True)


def relative_gaps(times: Sequence[float]) -> list[float]:
    desc = _descending(times)
    return [(a - b) / b for a, b in zip(desc, desc[1:])]


def knee_indices(times: Sequence[float], policy: KneePolicy) -> list[int]:
    """0-based gap indices selected as knees, ascending."""
    gaps = relative_gaps(times)
    if policy.mode == "threshold":
        return [i for i, g in enumerate(gaps) if g >= policy.theta]
    distinct = len(set(float(t) for t in times))
    if policy.k > distinct:
        raise PolicyError(f"top_k asks for {policy.k} bins but only {distinct} distinct times exist")
    ranked = sorted((i for i, g in enumerate(gaps) if g > 0), key=lambda i: (-gaps[i], i))
    return sorted(ranked[: policy.k - 1])


def detect_knees(times: Sequence[float], policy: KneePolicy) -> list[float]:
    """Boundary values (the lower time across each knee), ascending and unique."""
    desc = _descending(times)
    return sorted({desc[i + 1] for i in knee_indices(times, policy)})


def build_binset(times: Sequence[float], knees: Iterable[float]) -> BinSet:
    """Assemble ``[min] + knees + [max]``.

    Knees coinciding with the minimum or maximum are dropped as duplicate
    boundaries; knees outside the observed range or not equal to any
    observed time are rejected.
    """
    desc = _descending(times)
    lo, hi = desc[-1], desc[0]
    observed = set(desc)
    inner = set()
    for k in knees:
        k = float(k)
        if k < lo or k > hi:
            raise DomainError(f"knee {k!r} lies outside the observed range [{lo!r}, {hi!r}]")
        if k not in observed:
            raise DomainError(f"knee {k!r} is not an observed execution time")
        if lo < k < hi:
            inner.add(k)
    return BinSet((lo, *sorted(inner), hi))


def bin_times(times: Sequence[float], policy: KneePolicy | None = None) -> BinSet:
    policy = policy or KneePolicy.threshold()
    return build_binset(times, detect_knees(times, policy))


def bin_of(binset: BinSet, t: float) -> str | None:
    b = binset.boundaries
    if t < b[0] or t > b[-1]:
        return None
    idx = bisect.bisect_left(b, t)
    k = max(idx - 1, 0)
    return make_label(b[k], b[k + 1])
