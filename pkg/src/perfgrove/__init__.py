"""Decision-tree characterization of performance anomalies in configurable batch workloads."""

from perfgrove.binning import BinSet, KneePolicy, bin_of, build_binset, detect_knees, relative_gaps
from perfgrove.errors import DomainError, FormatError, InputError, PerfgroveError, PolicyError
from perfgrove.id3 import (
    Internal,
    Leaf,
    ProbDist,
    TrainParams,
    best_attribute,
    build_tree,
    entropy,
    information_gain,
    leaf_distribution,
)
from perfgrove.inference import AcceptPolicy, AnomalyReport, Prediction, batch_evaluate, detect_anomaly, predict
from perfgrove.records import AttributeSchema, RunRecord, parse_records, render_records, schema_of, validate

__all__ = [
    "AcceptPolicy",
    "AnomalyReport",
    "AttributeSchema",
    "BinSet",
    "DomainError",
    "FormatError",
    "InputError",
    "Internal",
    "KneePolicy",
    "Leaf",
    "PerfgroveError",
    "PolicyError",
    "Prediction",
    "ProbDist",
    "RunRecord",
    "TrainParams",
    "batch_evaluate",
    "best_attribute",
    "bin_of",
    "build_binset",
    "build_tree",
    "detect_anomaly",
    "detect_knees",
    "entropy",
    "information_gain",
    "leaf_distribution",
    "parse_records",
    "predict",
    "relative_gaps",
    "render_records",
    "schema_of",
    "validate",
]
