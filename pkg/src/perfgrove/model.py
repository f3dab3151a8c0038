"""Training pipeline and the bundled model file (tree + bins + schema)."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from perfgrove import tree_io
from perfgrove.binning import BinSet, KneePolicy, bin_of, bin_times
from perfgrove.errors import DomainError, FormatError
from perfgrove.id3 import Node, Sample, TrainParams, build_tree, leaf_labels
from perfgrove.records import AttributeSchema, RunRecord, schema_of


@dataclass(frozen=True)
class Model:
    tree: Node
    binset: BinSet
    schema: AttributeSchema | None = None

    def to_json(self) -> str:
        obj = tree_io.to_obj(self.tree, self.binset)
        if self.schema is not None:
            obj["schema"] = {
                "attributes": list(self.schema.attributes),
                "values": {a: list(self.schema.values[a]) for a in self.schema.attributes},
            }
        return json.dumps(obj, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "Model":
        tree, binset = tree_io.from_json(text)
        schema = None
        raw = json.loads(text).get("schema")
        if raw is not None:
            try:
                attrs = tuple(raw["attributes"])
                schema = AttributeSchema(attrs, {a: tuple(raw["values"][a]) for a in attrs})
            except (KeyError, TypeError):
                raise FormatError("malformed schema block in model JSON") from None
        return cls(tree, binset, schema)

    @classmethod
    def from_appendix(cls, text: str) -> "Model":
        tree = tree_io.parse_appendix(text)
        return cls(tree, BinSet.from_labels(leaf_labels(tree)))


def load_model(text: str) -> Model:
    """Read a model from JSON or from a nested-brace listing."""
    stripped = text.lstrip()
    if stripped.startswith("{") and '"format_version"' in text:
        return Model.from_json(text)
    if stripped.startswith("{ '") or stripped.startswith("{'") or stripped.startswith("<ProbDist"):
        return Model.from_appendix(text)
    if stripped.startswith("{"):
        return Model.from_json(text)
    raise FormatError("model text is neither JSON nor a tree listing")


def label_records(records: Sequence[RunRecord], binset: BinSet) -> list[Sample]:
    samples = []
    for i, rec in enumerate(records):
        label = bin_of(binset, rec.exec_minutes)
        if label is None:
            raise DomainError(f"record {i} time {rec.exec_minutes!r} falls outside the bin set")
        samples.append((rec.assignment(), label))
    return samples


def train(
    records: Sequence[RunRecord],
    policy: KneePolicy | None = None,
    params: TrainParams | None = None,
    binset: BinSet | None = None,
) -> Model:
    """Bin the corpus (unless a bin set is supplied) and grow the tree."""
    if not records:
        raise DomainError("cannot train on an empty corpus")
    if binset is None:
        binset = bin_times([r.exec_minutes for r in records], policy)
    schema = schema_of(records)
    tree = build_tree(label_records(records, binset), schema, params)
    return Model(tree, binset, schema)
