"""Seeded synthetic benchmark corpora with a planted tree and known anomalies.

A random tree is planted over the attribute grid (always splitting on the
query first) and every planted leaf owns one distinct bin on a geometric
ladder of boundaries. Each grid cell then yields one run per repeat whose
time is the leaf's bin midpoint plus uniform noise of at most
``noise_frac`` bin widths. Outliers are pushed at least one bin width above
their own bin.

All randomness comes from numpy's PCG64 bit generator seeded with
``config.seed``; draws happen in a fixed order so a seed pins the corpus.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from perfgrove import tree_io
from perfgrove.binning import BinSet, make_label
from perfgrove.errors import DomainError
from perfgrove.id3 import Internal, Leaf, Node, ProbDist
from perfgrove.records import ATTRIBUTES, RunRecord, render_records

GENERATOR_NAME = "numpy.random.PCG64"


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 0
    queries: int = 6
    nodes: tuple[int, ...] = (2, 4, 8, 16)
    replication: tuple[int, ...] = (1, 2, 3)
    data_sizes: tuple[float, ...] = (1, 10)
    block_sizes: tuple[int, ...] = (64, 128)
    colocated: tuple[int, ...] = (0, 1)
    noise_frac: float = 0.25
    outlier_rate: float = 0.0
    repeats: int = 1
    max_depth: int = 3
    split_prob: float = 0.6
    base_minutes: float = 2.0
    bin_ratio: float = 1.2
    skip_replication_above_nodes: bool = True

    def __post_init__(self):
        if self.queries < 1:
            raise DomainError("queries must be at least 1")
        for name in ("nodes", "replication", "data_sizes", "block_sizes", "colocated"):
            if len(getattr(self, name)) == 0:
                raise DomainError(f"value list {name!r} is empty")
        if not 0.0 <= self.noise_frac < 0.5:
            raise DomainError("noise_frac must lie in [0, 0.5)")
        if not 0.0 <= self.outlier_rate < 1.0:
            raise DomainError("outlier_rate must lie in [0, 1)")
        if self.repeats < 1 or self.max_depth < 1:
            raise DomainError("repeats and max_depth must be at least 1")
        if not self.bin_ratio > 1.0 or not self.base_minutes > 0:
            raise DomainError("bin_ratio must exceed 1 and base_minutes must be positive")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")

    def grid(self) -> dict[str, tuple]:
        return {
            "query": tuple(range(1, self.queries + 1)),
            "replication": tuple(self.replication),
            "data_size": tuple(self.data_sizes),
            "nodes": tuple(self.nodes),
            "blk_range": tuple(self.block_sizes),
            "colocated": tuple(self.colocated),
        }


@dataclass
class SynthCorpus:
    config: SynthConfig
    records: list[RunRecord]
    tree: Node
    binset: BinSet
    is_outlier: list[bool]
    repeat: list[int]
    true_bins: list[str] = field(default_factory=list)

    @property
    def outlier_indices(self) -> list[int]:
        return [i for i, flag in enumerate(self.is_outlier) if flag]

    def subset(self, *, repeat: int | None = None, clean: bool = False) -> list[RunRecord]:
        return [
            rec
            for rec, r, bad in zip(self.records, self.repeat, self.is_outlier)
            if (repeat is None or r == repeat) and not (clean and bad)
        ]

    def header(self) -> str:
        return f"perfgrove synthetic corpus generator={GENERATOR_NAME} seed={self.config.seed}"

    def truth_json(self) -> str:
        obj = {
            "generator": GENERATOR_NAME,
            "seed": self.config.seed,
            "config": asdict(self.config),
            "binset": {"boundaries": list(self.binset.boundaries)},
            "tree": tree_io.node_to_obj(self.tree),
            "anomalies": self.outlier_indices,
            "repeat": self.repeat,
        }
        return json.dumps(obj, indent=2)

    def write(self, out_dir: str | Path) -> tuple[Path, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        csv_path, truth_path = out / "runs.csv", out / "truth.json"
        csv_path.write_text(render_records(self.records, self.header()), encoding="utf-8")
        truth_path.write_text(self.truth_json() + "\n", encoding="utf-8")
        return csv_path, truth_path


def _plant(rng: np.random.Generator, grid: dict[str, tuple], config: SynthConfig):
    """Return a nested plan of the planted tree and the number of leaves.

    Internal plans are ``(attribute, {value: plan})``; leaves are integer
    leaf ids assigned in depth-first order.
    """
    counter = itertools.count()

    def grow(remaining: tuple[str, ...], depth: int):
        splittable = [a for a in remaining if len(grid[a]) > 1]
        if depth >= config.max_depth or not splittable or rng.random() >= config.split_prob:
            return next(counter)
        attr = splittable[int(rng.integers(len(splittable)))]
        rest = tuple(a for a in remaining if a != attr)
        return attr, {v: grow(rest, depth + 1) for v in grid[attr]}

    rest = tuple(a for a in ATTRIBUTES if a != "query")
    plan = ("query", {q: grow(rest, 1) for q in grid["query"]})
    return plan, next(counter)


def _leaf_of(plan, cell: dict) -> int:
    while not isinstance(plan, int):
        attr, children = plan
        plan = children[cell[attr]]
    return plan


def _to_tree(plan, bins: dict[int, str], counts: dict[int, int]) -> Node:
    if isinstance(plan, int):
        return Leaf(ProbDist({bins[plan]: 1.0}), n=counts.get(plan, 0))
    attr, children = plan
    return Internal(attr, {v: _to_tree(c, bins, counts) for v, c in children.items()})


def generate(config: SynthConfig) -> SynthCorpus:
    rng = np.random.Generator(np.random.PCG64(config.seed))
    grid = config.grid()
    plan, n_leaves = _plant(rng, grid, config)

    boundaries = tuple(round(config.base_minutes * config.bin_ratio**j, 2) for j in range(n_leaves + 1))
    binset = BinSet(boundaries)
    slot = rng.permutation(n_leaves)
    leaf_bin = {leaf: (boundaries[int(slot[leaf])], boundaries[int(slot[leaf]) + 1]) for leaf in range(n_leaves)}
    bin_label = {leaf: make_label(*span) for leaf, span in leaf_bin.items()}

    cells = []
    for values in itertools.product(*(grid[a] for a in ATTRIBUTES)):
        cell = dict(zip(ATTRIBUTES, values))
        if config.skip_replication_above_nodes and cell["replication"] > cell["nodes"]:
            continue
        cells.append(cell)
    if not cells:
        raise DomainError("the configured grid has no valid cells")

    records, is_outlier, repeat, true_bins = [], [], [], []
    counts: dict[int, int] = {}
    for r in range(config.repeats):
        for cell in cells:
            leaf = _leaf_of(plan, cell)
            counts[leaf] = counts.get(leaf, 0) + 1
            lo, hi = leaf_bin[leaf]
            width = hi - lo
            jitter = rng.uniform(-1.0, 1.0)
            u_out, u_far = rng.random(), rng.random()
            t = (lo + hi) / 2.0 + jitter * config.noise_frac * width
            bad = bool(u_out < config.outlier_rate)
            if bad:
                t = hi + width * (1.0 + u_far)
            records.append(
                RunRecord(
                    query=cell["query"],
                    nodes=cell["nodes"],
                    data_size=cell["data_size"],
                    replication=cell["replication"],
                    blk_range=cell["blk_range"],
                    colocated=cell["colocated"],
                    exec_minutes=float(t),
                )
            )
            is_outlier.append(bad)
            repeat.append(r)
            true_bins.append(bin_label[leaf])

    tree = _to_tree(plan, bin_label, counts)
    return SynthCorpus(config, records, tree, binset, is_outlier, repeat, true_bins)
