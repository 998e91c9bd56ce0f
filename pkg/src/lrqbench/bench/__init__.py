"""Benchmark orchestration, estimators, certification and persistence."""

from .certify import (
    RobustnessReport,
    Verdict,
    certify,
    export_sections,
    ingest_samples,
    rank_sections,
    section_samples,
    seed_robustness,
)
from .estimate import CostEstimate, hqc_estimate, runtime_projection
from .records import dumps_record, load_record, loads_record, record_csv, save_record
from .run import (
    BenchmarkRecord,
    DiagramResult,
    PointResult,
    RunConfig,
    build_circuit,
    performance_diagram,
    point_seed,
    resolve_instance,
    run_depth_sweep,
)

__all__ = [
    "BenchmarkRecord",
    "CostEstimate",
    "DiagramResult",
    "PointResult",
    "RobustnessReport",
    "RunConfig",
    "Verdict",
    "build_circuit",
    "certify",
    "dumps_record",
    "export_sections",
    "hqc_estimate",
    "ingest_samples",
    "load_record",
    "loads_record",
    "performance_diagram",
    "point_seed",
    "rank_sections",
    "record_csv",
    "resolve_instance",
    "run_depth_sweep",
    "runtime_projection",
    "save_record",
    "section_samples",
    "seed_robustness",
]
