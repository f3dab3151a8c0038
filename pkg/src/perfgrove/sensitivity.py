"""How strongly a one-attribute change moves the predicted time, by tree depth."""

from __future__ import annotations

import json
import statistics
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from perfgrove.binning import BinSet
from perfgrove.errors import DomainError, InputError
from perfgrove.id3 import Internal, Node
from perfgrove.inference import Prediction, predict


@dataclass(frozen=True)
class ImpactProbe:
    base: Mapping[str, Any]
    attribute: str
    before: Any
    after: Any

    def __post_init__(self):
        if self.before == self.after:
            raise DomainError(f"probe on {self.attribute!r} changes nothing ({self.before!r})")

    def assignments(self) -> tuple[dict, dict]:
        a = {**self.base, self.attribute: self.before}
        b = {**self.base, self.attribute: self.after}
        return a, b

    def describe(self) -> str:
        ctx = ",".join(f"{k}={v}" for k, v in self.base.items() if k != self.attribute)
        return f"{ctx} {self.attribute} {self.before}->{self.after}"

    @classmethod
    def from_dict(cls, obj: Mapping[str, Any]) -> "ImpactProbe":
        try:
            return cls(dict(obj["base"]), obj["attribute"], obj["from"], obj["to"])
        except KeyError as exc:
            raise DomainError(f"probe is missing field {exc.args[0]!r}") from None


@dataclass(frozen=True)
class ImpactResult:
    probe: ImpactProbe
    level: int | None
    rep_before: float
    rep_after: float
    percent_change: float
    bin_before: str
    bin_after: str

    def to_dict(self) -> dict:
        return {
            "base": dict(self.probe.base),
            "attribute": self.probe.attribute,
            "from": self.probe.before,
            "to": self.probe.after,
            "level": self.level,
            "bin_from": self.bin_before,
            "bin_to": self.bin_after,
            "rep_from": self.rep_before,
            "rep_to": self.rep_after,
            "percent_change": self.percent_change,
        }


def attribute_level(tree: Node, assignment: Mapping[str, Any], attribute: str) -> int | None:
    """1-based depth at which ``attribute`` is tested along the assignment's path."""
    node, level = tree, 1
    while isinstance(node, Internal):
        if node.attribute == attribute:
            return level
        if node.attribute not in assignment:
            raise InputError(node.attribute)
        node = node.children.get(assignment[node.attribute])
        if node is None:
            return None
        level += 1
    return None


def representative(prediction: Prediction, binset: BinSet) -> float:
    """Midpoint of the top predicted bin."""
    return binset.get(prediction.top_bin).midpoint


def percent_change(tree: Node, probe: ImpactProbe, binset: BinSet) -> ImpactResult:
    a, b = probe.assignments()
    pa, pb = predict(tree, a), predict(tree, b)
    ra, rb = representative(pa, binset), representative(pb, binset)
    return ImpactResult(
        probe=probe,
        level=attribute_level(tree, a, probe.attribute),
        rep_before=ra,
        rep_after=rb,
        percent_change=100.0 * abs(rb - ra) / ra,
        bin_before=pa.top_bin,
        bin_after=pb.top_bin,
    )


@dataclass
class DepthImpactReport:
    rows: list[ImpactResult]
    # attribute -> level (None when absent) -> percent changes
    by_attribute: dict[str, dict[int | None, list[float]]] = field(default_factory=dict)

    def level_means(self, attribute: str) -> dict[int, float]:
        levels = self.by_attribute.get(attribute, {})
        return {lv: statistics.fmean(pcs) for lv, pcs in sorted(levels.items()) if lv is not None}

    def shallower_dominates(self, attribute: str) -> bool | None:
        """True if mean change strictly falls as the tested level deepens.

        None when fewer than two distinct levels were probed.
        """
        means = list(self.level_means(attribute).values())
        if len(means) < 2:
            return None
        return all(x > y for x, y in zip(means, means[1:]))

    def to_json(self) -> str:
        return json.dumps([r.to_dict() for r in self.rows], indent=2)

    def render(self) -> str:
        header = ("probe", "level", "bin_from", "bin_to", "rep_from", "rep_to", "pct_change")
        body = [
            (
                r.probe.describe(),
                "absent" if r.level is None else str(r.level),
                r.bin_before,
                r.bin_after,
                f"{r.rep_before:.3f}",
                f"{r.rep_after:.3f}",
                f"{r.percent_change:.2f}",
            )
            for r in self.rows
        ]
        widths = [max(len(row[i]) for row in [header, *body]) for i in range(len(header))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in [header, *body]]
        for attr in self.by_attribute:
            means = self.level_means(attr)
            if len(means) >= 2:
                order = " > ".join(f"L{lv}={m:.2f}%" for lv, m in sorted(means.items(), key=lambda kv: -kv[1]))
                lines.append(f"{attr}: {order}")
        return "\n".join(lines) + "\n"


def depth_impact_report(tree: Node, probes: Sequence[ImpactProbe], binset: BinSet) -> DepthImpactReport:
    if not probes:
        raise DomainError("depth_impact_report needs at least one probe")
    rows = [percent_change(tree, p, binset) for p in probes]
    grouped: dict[str, dict[int | None, list[float]]] = {}
    for r in rows:
        grouped.setdefault(r.probe.attribute, {}).setdefault(r.level, []).append(r.percent_change)
    return DepthImpactReport(rows, grouped)
