"""Certification of sample sets against the random-sampler baseline."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from ..circuit import Circuit, export_circuit
from ..problems import DEFAULT_WEIGHTS, ProblemInstance, Topology, atomic_write, generate_instance
from ..simulator import SampleSet, loads_samples
from ..stats import (
    BaselineStats,
    RegimeLabel,
    approximation_ratio,
    classify_regime,
    effective_ratio,
    random_baseline,
)
from .run import RunConfig, build_circuit, circuit_path, evaluate_point, resolve_delta, resolve_instance

log = logging.getLogger(__name__)


def ingest_samples(path: str | Path, instance: ProblemInstance) -> SampleSet:
    """Read a sample file and check it against ``instance``."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        return loads_samples(text, n_qubits=instance.n)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


@dataclass(frozen=True)
class Verdict:
    r: float
    r_eff: float
    regime: RegimeLabel
    baseline: BaselineStats

    @property
    def passed(self) -> bool:
        return self.regime.passed

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status}: r={self.r:.6f} r_eff={self.r_eff:.6f} regime={self.regime.value} "
            f"(random mean={self.baseline.mean:.6f} threshold={self.baseline.threshold:.6f}, "
            f"{self.baseline.n_subsets} subsets x {self.baseline.shots_per_subset} shots)"
        )

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "r_eff": self.r_eff,
            "regime": self.regime.value,
            "passed": self.passed,
            "baseline": self.baseline.to_dict(),
        }


def certify(
    samples: SampleSet,
    instance: ProblemInstance,
    shots_per_subset: int | None = None,
    n_subsets: int = 100,
    seed: int = 0,
) -> Verdict:
    """Pass when the sampled ratio lies above the random ``mean + 3 sigma``.

    The baseline uses as many shots per subset as the sample set unless
    ``shots_per_subset`` is given.
    """
    instance = instance.with_optimum()
    r = approximation_ratio(samples, instance)
    baseline = random_baseline(instance, shots_per_subset or samples.shots, n_subsets, seed)
    return Verdict(r, effective_ratio(r, baseline), classify_regime(r, baseline), baseline)


# --- section selection -----------------------------------------------------


def section_circuit(chain_instance: ProblemInstance, section: Sequence[int], c: Circuit) -> Circuit:
    """Relabel a chain circuit so logical node ``i`` runs on device qubit ``section[i]``."""
    if len(set(section)) != len(section) or len(section) != chain_instance.n:
        raise ValueError("section must list distinct qubits, one per chain node")
    gates = tuple(g._replace(qubits=tuple(section[q] for q in g.qubits)) for g in c.gates)
    return Circuit(max(section) + 1, gates, c.basis, None, c.n_zz)


def export_sections(
    sections: Mapping[str, Sequence[int]],
    p: int,
    delta: float = 1.0,
    basis: str = "abstract",
    weight_seed: int = 0,
    out_dir: str | Path | None = None,
    fmt: str = "lrq",
) -> dict[str, Circuit]:
    """One chain LR-QAOA circuit per candidate qubit section (export-only).

    Every candidate gets the same weighted chain instance, so ranking by
    certified ``r`` compares the hardware sections rather than problems.
    A ``sections.json`` manifest records the qubit map.
    """
    circuits = {}
    lengths = {len(s) for s in sections.values()}
    if len(lengths) != 1:
        raise ValueError("all candidate sections must have the same length")
    inst = generate_instance(Topology.chain(), lengths.pop(), DEFAULT_WEIGHTS, weight_seed)
    base = build_circuit(inst, p, delta, basis)
    for name, section in sections.items():
        circuits[name] = section_circuit(inst, list(section), base)
    if out_dir is not None:
        out = Path(out_dir)
        for name, c in circuits.items():
            atomic_write(circuit_path(out / f"section_{name}", p, fmt), export_circuit(c, fmt))
        manifest = {"p": p, "delta": delta, "basis": basis, "weight_seed": weight_seed,
                    "sections": {k: list(v) for k, v in sections.items()}}
        atomic_write(out / "sections.json", json.dumps(manifest, indent=1) + "\n")
    return circuits


def section_samples(samples: SampleSet, section: Sequence[int]) -> SampleSet:
    """Restrict device-wide bitstrings to the qubits of one section, in chain order."""
    counts: dict[str, int] = {}
    for s, c in samples.counts.items():
        key = "".join(s[q] for q in section)
        counts[key] = counts.get(key, 0) + c
    return SampleSet(len(section), dict(sorted(counts.items())))


def rank_sections(
    results: Mapping[str, SampleSet],
    chain_instance: ProblemInstance,
    n_subsets: int = 100,
    seed: int = 0,
) -> list[tuple[str, Verdict]]:
    """Certify each section's samples and sort by ``r`` (best first)."""
    ranked = [(name, certify(s, chain_instance, n_subsets=n_subsets, seed=seed)) for name, s in results.items()]
    return sorted(ranked, key=lambda item: (-item[1].r, item[0]))


# --- weight-seed robustness ------------------------------------------------


@dataclass(frozen=True)
class RobustnessReport:
    seeds: tuple[int, ...]
    ratios: tuple[float, ...]

    @property
    def mean(self) -> float:
        return float(np.mean(self.ratios))

    @property
    def std(self) -> float:
        return float(np.std(self.ratios, ddof=1)) if len(self.ratios) > 1 else 0.0


def seed_robustness(config: RunConfig, p: int, seeds: Iterable[int]) -> RobustnessReport:
    """``r`` at depth ``p`` for the same topology under different weight seeds."""
    seeds = tuple(int(s) for s in seeds)
    ratios = []
    for s in seeds:
        cfg = replace(config, instance_seed=s, instance_path=None, p_list=(p,))
        inst = resolve_instance(cfg)
        res, _ = evaluate_point(inst, cfg, p, resolve_delta(cfg, inst), None)
        if res.error:
            raise RuntimeError(f"seed {s}: {res.error}")
        ratios.append(res.r)
    return RobustnessReport(seeds, tuple(ratios))
