"""Disruption index engine for citation graphs."""

from ._dxg import (
    DxgError,
    Graph,
    UnknownPaper,
    apply_filter,
    build_graph,
    classify,
    cmax_ratio_empirical,
    cmax_ratio_theoretical,
    compute,
    d_index,
    fit_zipf,
    ingest,
    load_snapshot,
    overlap_baseline,
    save_snapshot,
)

__all__ = [
    "DxgError",
    "Graph",
    "UnknownPaper",
    "apply_filter",
    "build_graph",
    "classify",
    "cmax_ratio_empirical",
    "cmax_ratio_theoretical",
    "compute",
    "d_index",
    "fit_zipf",
    "ingest",
    "load_snapshot",
    "overlap_baseline",
    "save_snapshot",
]
