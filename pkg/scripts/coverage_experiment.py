"""Holdout coverage of trained trees on synthetic corpora, across seeds.

Each corpus has ``repeats`` noisy runs per grid cell; all but the last
repeat train the model and the last one is held out.

    python scripts/coverage_experiment.py --seeds 0-39 --policy any
"""

import argparse
import statistics
import time
from dataclasses import dataclass

from perfgrove.inference import AcceptPolicy, batch_evaluate
from perfgrove.model import train
from perfgrove.synth import SynthConfig, generate


@dataclass
class ExperimentConfig:
    seeds: range = range(40)
    repeats: int = 4
    noise_frac: float = 0.25
    queries: int = 6
    policy: str = "any"
    threshold: float = 0.95


def parse_seeds(text: str) -> range:
    lo, _, hi = text.partition("-")
    return range(int(lo), int(hi or lo) + 1)


def run_seed(cfg: ExperimentConfig, seed: int) -> tuple[float, float, int]:
    corpus = generate(SynthConfig(seed=seed, noise_frac=cfg.noise_frac, queries=cfg.queries, repeats=cfg.repeats))
    last = cfg.repeats - 1
    train_recs = [r for r, k in zip(corpus.records, corpus.repeat) if k < last]
    holdout = corpus.subset(repeat=last)
    model = train(train_recs)
    policy = AcceptPolicy.parse(cfg.policy)
    held = batch_evaluate(model.tree, holdout, policy, model.binset)
    seen = batch_evaluate(model.tree, train_recs, policy, model.binset)
    return held.coverage, seen.coverage, held.total


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=parse_seeds, default=ExperimentConfig.seeds)
    ap.add_argument("--repeats", type=int, default=ExperimentConfig.repeats)
    ap.add_argument("--noise-frac", type=float, default=ExperimentConfig.noise_frac)
    ap.add_argument("--queries", type=int, default=ExperimentConfig.queries)
    ap.add_argument("--policy", default=ExperimentConfig.policy)
    args = ap.parse_args(argv)
    if args.repeats < 2:
        ap.error("--repeats must be at least 2 to leave a holdout repeat")
    cfg = ExperimentConfig(args.seeds, args.repeats, args.noise_frac, args.queries, args.policy)

    start = time.perf_counter()
    held_all = []
    print("seed  holdout  training  n_holdout")
    for seed in cfg.seeds:
        held, seen, n = run_seed(cfg, seed)
        held_all.append(held)
        mark = "" if held >= cfg.threshold else "  below threshold"
        print(f"{seed:>4}  {held:.4f}   {seen:.4f}    {n}{mark}")
    below = sum(h < cfg.threshold for h in held_all)
    print(
        f"min {min(held_all):.4f}  mean {statistics.fmean(held_all):.4f}  "
        f"below {cfg.threshold}: {below}/{len(held_all)}  ({time.perf_counter() - start:.1f}s)"
    )


if __name__ == "__main__":
    main()
