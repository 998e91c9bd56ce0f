"""Depth sweeps and performance diagrams."""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .. import __version__
from ..circuit import (
    Circuit,
    CountReport,
    build_lr_qaoa,
    count_gates,
    decompose_to_basis,
    export_circuit,
    predicted_counts,
    transpile_swap_network,
)
from ..problems import (
    DEFAULT_WEIGHTS,
    ProblemInstance,
    Topology,
    atomic_write,
    generate_instance,
    load_instance,
)
from ..schedule import build_schedule, default_delta
from ..simulator import (
    NoiseModel,
    expected_cost,
    noisy_expected_cost,
    sample,
    simulate,
)
from ..stats import (
    BaselineStats,
    approximation_ratio,
    classify_regime,
    effective_ratio,
    max_sample_ratio,
    random_baseline,
)

log = logging.getLogger(__name__)

RECORD_VERSION = 1
ESTIMATORS = ("samples", "expected")


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce a depth sweep.

    The instance comes from ``instance_path`` when set, otherwise it is
    generated from ``topology``/``n``/``instance_seed``/``weight_set``.
    ``delta`` is a number or ``"default"``.  ``estimator="expected"``
    replaces sampled ratios with exact expectations (trajectory-averaged
    under noise); the baseline still uses ``shots`` per subset.
    """

    topology: str = "chain"
    n: int = 10
    instance_seed: int = 0
    weight_set: tuple[float, ...] = DEFAULT_WEIGHTS
    instance_path: str | None = None
    p_list: tuple[int, ...] = (1, 3, 10)
    delta: float | str = "default"
    backend_class: str | None = None
    basis: str = "abstract"
    routed: bool | None = None
    shots: int = 1000
    eps: float = 0.0
    noise_seed: int = 0
    sample_seed: int = 0
    trajectories: int | None = None
    estimator: str = "samples"
    baseline_subsets: int = 100
    baseline_seed: int = 0
    export_only: bool = False
    export_format: str = "lrq"
    out: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "p_list", tuple(int(p) for p in self.p_list))
        object.__setattr__(self, "weight_set", tuple(float(w) for w in self.weight_set))
        if not self.p_list:
            raise ValueError("p_list must not be empty")
        if any(b <= a for a, b in zip(self.p_list, self.p_list[1:])):
            raise ValueError(f"p_list must be strictly ascending, got {self.p_list}")
        if self.p_list[0] < 1:
            raise ValueError("p values must be >= 1")
        if self.shots < 1:
            raise ValueError("shots must be >= 1")
        if self.estimator not in ESTIMATORS:
            raise ValueError(f"estimator must be one of {ESTIMATORS}")
        if isinstance(self.delta, str) and self.delta != "default":
            object.__setattr__(self, "delta", float(self.delta))

    @property
    def noise(self) -> NoiseModel | None:
        return NoiseModel(self.eps, self.noise_seed) if self.eps > 0 else None

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["p_list"] = list(self.p_list)
        d["weight_set"] = list(self.weight_set)
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> RunConfig:
        d = dict(d)
        d["p_list"] = tuple(d.get("p_list", (1,)))
        if "weight_set" in d:
            d["weight_set"] = tuple(d["weight_set"])
        return cls(**d)


def resolve_instance(config: RunConfig, with_optimum: bool = True) -> ProblemInstance:
    if config.instance_path:
        inst = load_instance(config.instance_path)
    else:
        topo = Topology.parse(config.topology)
        inst = generate_instance(topo, config.n, config.weight_set, config.instance_seed)
    return inst.with_optimum() if with_optimum else inst


def resolve_delta(config: RunConfig, instance: ProblemInstance) -> float:
    if config.delta == "default":
        return default_delta(instance.topology, instance.n, config.backend_class)
    return float(config.delta)


def is_routed(instance: ProblemInstance, basis: str, routed: bool | None = None) -> bool:
    if routed is not None:
        return routed
    return instance.topology.kind == "fully_connected" and basis in ("cz", "cx", "routed")


def build_circuit(
    instance: ProblemInstance,
    p: int,
    delta: float,
    basis: str = "abstract",
    routed: bool | None = None,
) -> Circuit:
    """LR-QAOA circuit, routed through the SWAP network for fully connected
    problems when ``routed`` (default: gate-based bases ``cz``/``cx``/``routed``)."""
    schedule = build_schedule(p, delta, delta)
    if is_routed(instance, basis, routed):
        return transpile_swap_network(instance, schedule, basis=basis)
    c = build_lr_qaoa(instance, schedule)
    return c if basis == "abstract" else decompose_to_basis(c, basis)


def point_seed(seed: int, p: int) -> int:
    """Per-point sampling seed that depends only on ``(seed, p)``."""
    return int(np.random.SeedSequence([seed, p]).generate_state(1, np.uint32)[0])


@dataclass
class PointResult:
    p: int
    delta: float
    counts: CountReport
    predicted: CountReport | None = None
    r: float | None = None
    r_max: float | None = None
    r_eff: float | None = None
    regime: str | None = None
    r_stderr: float | None = None
    wall_time: float = 0.0
    error: str | None = None

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["counts"] = self.counts.to_dict() if self.counts else None
        d["predicted"] = self.predicted.to_dict() if self.predicted else None
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> PointResult:
        d = dict(d)
        d["counts"] = CountReport(**d["counts"]) if d.get("counts") else None
        d["predicted"] = CountReport(**d["predicted"]) if d.get("predicted") else None
        return cls(**d)


def _predicted(instance: ProblemInstance, basis: str, p: int, routed: bool) -> CountReport | None:
    try:
        return predicted_counts(instance.topology, basis, p, instance.n, instance.n_edges, routed=routed)
    except ValueError:
        return None


def evaluate_point(
    instance: ProblemInstance,
    config: RunConfig,
    p: int,
    delta: float,
    baseline: BaselineStats | None,
) -> tuple[PointResult, Circuit | None]:
    """Build, count and (unless export-only) estimate ``r`` at one ``(p, delta)``.

    Failures are captured in ``PointResult.error`` rather than raised.
    """
    t0 = time.perf_counter()
    try:
        c = build_circuit(instance, p, delta, config.basis, config.routed)
        routed = is_routed(instance, config.basis, config.routed)
        res = PointResult(p, delta, count_gates(c), _predicted(instance, config.basis, p, routed))
        if config.export_only:
            res.wall_time = time.perf_counter() - t0
            return res, c
        res.r, res.r_max, res.r_stderr = _estimate_r(c, instance, config, p)
        if baseline is not None:
            res.r_eff = effective_ratio(res.r, baseline)
            res.regime = classify_regime(res.r, baseline).value
    except Exception as exc:  # recorded per point, the sweep continues
        log.warning("p=%d delta=%g failed: %s", p, delta, exc)
        res = PointResult(p, delta, counts=None, error=f"{type(exc).__name__}: {exc}")
        c = None
    res.wall_time = time.perf_counter() - t0
    return res, c


def _estimate_r(
    c: Circuit, instance: ProblemInstance, config: RunConfig, p: int
) -> tuple[float, float | None, float | None]:
    opt = instance.optimal_value
    seed = point_seed(config.sample_seed, p)
    noise = config.noise
    if config.estimator == "expected":
        if noise is None:
            sv = simulate(c)
            if not c.is_identity_layout:
                sv = sv.permuted(c.layout)
            return expected_cost(sv, instance) / opt, None, 0.0
        k = config.trajectories or config.shots
        mean, sem = noisy_expected_cost(c, instance, noise, k, seed)
        return mean / opt, None, sem / opt
    samples = sample(c, config.shots, noise, seed, trajectories=config.trajectories)
    r = approximation_ratio(samples, instance)
    return r, max_sample_ratio(samples, instance), None


@dataclass
class BenchmarkRecord:
    config: dict[str, Any]
    instance: dict[str, Any]
    baseline: BaselineStats | None
    results: list[PointResult]
    tool_version: str = __version__
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    VOLATILE = ("timestamp", "wall_time")

    def to_dict(self) -> dict[str, Any]:
        return {
            "lrq-record": RECORD_VERSION,
            "tool_version": self.tool_version,
            "timestamp": self.timestamp,
            "config": self.config,
            "instance": self.instance,
            "baseline": self.baseline.to_dict() if self.baseline else None,
            "results": [r.to_dict() for r in self.results],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> BenchmarkRecord:
        if d.get("lrq-record") != RECORD_VERSION:
            raise ValueError(f"unsupported record version {d.get('lrq-record')!r}")
        return cls(
            config=d["config"],
            instance=d["instance"],
            baseline=BaselineStats.from_dict(d["baseline"]) if d.get("baseline") else None,
            results=[PointResult.from_dict(r) for r in d["results"]],
            tool_version=d.get("tool_version", ""),
            timestamp=d.get("timestamp", ""),
        )

    def deterministic_dict(self) -> dict[str, Any]:
        """The record without run-dependent fields (timestamp, wall times)."""
        d = self.to_dict()
        d.pop("timestamp")
        for r in d["results"]:
            r.pop("wall_time")
        return d

    @property
    def best(self) -> PointResult | None:
        scored = [r for r in self.results if r.r is not None]
        return max(scored, key=lambda r: r.r) if scored else None


def _instance_summary(instance: ProblemInstance) -> dict[str, Any]:
    return {
        "topology": instance.topology.to_dict(),
        "n": instance.n,
        "n_edges": instance.n_edges,
        "seed": instance.seed,
        "optimum": instance.optimum[1] if instance.optimum else None,
    }


def circuit_path(record_path: str | Path, p: int, fmt: str = "lrq") -> Path:
    """Sibling file for the exported circuit of depth ``p``."""
    ext = "qasm" if fmt.startswith("qasm") or fmt == "openqasm" else "lrq"
    path = Path(record_path)
    return path.with_name(f"{path.stem}_p{p}.{ext}")


def run_depth_sweep(config: RunConfig, instance: ProblemInstance | None = None) -> BenchmarkRecord:
    """Run every ``p`` in ``config.p_list`` against one shared random baseline."""
    if instance is None:
        instance = resolve_instance(config, with_optimum=not config.export_only)
    delta = resolve_delta(config, instance)
    baseline = None
    if not config.export_only:
        instance = instance.with_optimum()
        baseline = random_baseline(
            instance, config.shots, config.baseline_subsets, config.baseline_seed
        )
    results = []
    for p in config.p_list:
        res, c = evaluate_point(instance, config, p, delta, baseline)
        results.append(res)
        if config.export_only and c is not None and config.out:
            atomic_write(circuit_path(config.out, p, config.export_format), export_circuit(c, config.export_format))
    record = BenchmarkRecord(config.to_dict(), _instance_summary(instance), baseline, results)
    if config.out:
        from .records import save_record

        save_record(record, config.out)
    return record


@dataclass
class DiagramResult:
    p_grid: tuple[int, ...]
    delta_grid: tuple[float, ...]
    r: np.ndarray
    points: list[list[PointResult]]

    @property
    def argmax(self) -> tuple[int, float]:
        r = np.where(np.isnan(self.r), -np.inf, self.r)
        i, j = np.unravel_index(int(np.argmax(r)), r.shape)
        return self.p_grid[i], self.delta_grid[j]

    def to_csv(self) -> str:
        lines = ["p,delta,r,r_eff,regime,n_two_qubit,two_qubit_depth"]
        for row in self.points:
            for pt in row:
                cnt = pt.counts
                lines.append(
                    ",".join(
                        [
                            str(pt.p),
                            repr(pt.delta),
                            "" if pt.r is None else repr(pt.r),
                            "" if pt.r_eff is None else repr(pt.r_eff),
                            pt.regime or "",
                            "" if cnt is None else str(cnt.n_two_qubit),
                            "" if cnt is None else str(cnt.two_qubit_depth),
                        ]
                    )
                )
        return "\n".join(lines) + "\n"


def performance_diagram(
    instance: ProblemInstance,
    p_grid: Sequence[int],
    delta_grid: Sequence[float],
    config: RunConfig | None = None,
    workers: int = 1,
    out: str | Path | None = None,
) -> DiagramResult:
    """``r`` over a ``(p, delta)`` grid; per-point seeds depend only on ``(seed, p)``.

    ``config`` supplies shots, noise, basis and seeds (its ``p_list`` and
    ``delta`` are ignored).  Grid points run on ``workers`` threads.
    """
    if not p_grid or not delta_grid:
        raise ValueError("grids must be non-empty")
    config = config or RunConfig()
    config = replace(config, p_list=tuple(sorted(set(int(p) for p in p_grid))), export_only=False)
    instance = instance.with_optimum()
    baseline = random_baseline(instance, config.shots, config.baseline_subsets, config.baseline_seed)
    cells = [(i, j, int(p), float(d)) for i, p in enumerate(p_grid) for j, d in enumerate(delta_grid)]

    def run(cell):
        i, j, p, d = cell
        return i, j, evaluate_point(instance, config, p, d, baseline)[0]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            done = list(pool.map(run, cells))
    else:
        done = [run(cell) for cell in cells]
    points: list[list[PointResult]] = [[None] * len(delta_grid) for _ in p_grid]
    r = np.full((len(p_grid), len(delta_grid)), math.nan)
    for i, j, res in done:
        points[i][j] = res
        if res.r is not None:
            r[i, j] = res.r
    result = DiagramResult(tuple(int(p) for p in p_grid), tuple(float(d) for d in delta_grid), r, points)
    if out is not None:
        atomic_write(out, result.to_csv())
    return result
