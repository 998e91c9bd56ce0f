"""Command-line interface: ``lrqbench <verb> [options]``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from ..circuit import BASES, export_circuit
from ..problems import DEFAULT_WEIGHTS, OptimumUnavailable, atomic_write, dumps_instance, save_instance
from ..schedule import build_schedule
from .certify import certify, ingest_samples
from .estimate import hqc_estimate, runtime_projection
from .records import record_csv
from .run import (
    RunConfig,
    build_circuit,
    circuit_path,
    performance_diagram,
    resolve_delta,
    resolve_instance,
    run_depth_sweep,
)

log = logging.getLogger("lrqbench")


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x]


def _delta(text: str) -> float | str:
    return "default" if text == "default" else float(text)


def _add_instance_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("instance")
    g.add_argument("--instance", help="instance file (overrides generation flags)")
    g.add_argument("--topology", default="chain", help="chain, fc, heavy_hex[:eagle|heron_r1|heron_r2], grid:RxC, garnet")
    g.add_argument("--nq", type=int, default=10, help="number of qubits/nodes")
    g.add_argument("--seed", type=int, default=0, help="weight seed")
    g.add_argument("--weights", type=_floats, default=list(DEFAULT_WEIGHTS), help="comma-separated weight set")


def _add_run_args(p: argparse.ArgumentParser, p_default: str) -> None:
    g = p.add_argument_group("run")
    g.add_argument("--p", type=_ints, default=_ints(p_default), help="comma-separated layer counts")
    g.add_argument("--delta", type=_delta, default="default", help="ramp scale or 'default'")
    g.add_argument("--backend-class", default=None, help="backend key for the default ramp scale")
    g.add_argument("--basis", default="abstract", choices=BASES)
    g.add_argument("--shots", type=int, default=1000)
    g.add_argument("--eps", type=float, default=0.0, help="two-qubit depolarizing probability")
    g.add_argument("--trajectories", type=int, default=None, help="share shots across this many noise trajectories")
    g.add_argument("--estimator", choices=("samples", "expected"), default="samples")
    g.add_argument("--sample-seed", type=int, default=0)
    g.add_argument("--noise-seed", type=int, default=0)
    g.add_argument("--baseline-seed", type=int, default=0)
    g.add_argument("--subsets", type=int, default=100, help="random-baseline subsets")
    g.add_argument("--out", default=None, help="output path")
    g.add_argument("--export-only", action="store_true", help="build and count circuits without simulating")
    g.add_argument("--format", default="lrq", choices=("lrq", "qasm"), help="circuit export format")


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        topology=args.topology,
        n=args.nq,
        instance_seed=args.seed,
        weight_set=tuple(args.weights),
        instance_path=args.instance,
        p_list=tuple(sorted(set(args.p))),
        delta=args.delta,
        backend_class=args.backend_class,
        basis=args.basis,
        shots=args.shots,
        eps=args.eps,
        noise_seed=args.noise_seed,
        sample_seed=args.sample_seed,
        trajectories=args.trajectories,
        estimator=args.estimator,
        baseline_subsets=args.subsets,
        baseline_seed=args.baseline_seed,
        export_only=args.export_only,
        export_format=args.format,
        out=args.out,
    )


def cmd_gen(args: argparse.Namespace) -> int:
    cfg = RunConfig(
        topology=args.topology,
        n=args.nq,
        instance_seed=args.seed,
        weight_set=tuple(args.weights),
        instance_path=args.instance,
    )
    inst = resolve_instance(cfg, with_optimum=False)
    if not args.no_optimum:
        try:
            inst = inst.with_optimum()
        except OptimumUnavailable as exc:
            log.warning("%s", exc)
    if args.out:
        save_instance(inst, args.out)
        log.info("wrote %s (%d nodes, %d edges)", args.out, inst.n, inst.n_edges)
    else:
        sys.stdout.write(dumps_instance(inst))
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    record = run_depth_sweep(_config(args))
    sys.stdout.write(record_csv(record))
    if record.baseline is not None:
        b = record.baseline
        print(f"# random baseline: mean={b.mean:.6f} sigma={b.sigma:.6f} threshold={b.threshold:.6f}")
    if args.eps > 0:
        print("# noise: depolarizing after every two-qubit gate")
    return 1 if any(r.error for r in record.results) else 0


def cmd_diagram(args: argparse.Namespace) -> int:
    cfg = _config(args)
    inst = resolve_instance(cfg)
    deltas = args.deltas or [resolve_delta(cfg, inst)]
    result = performance_diagram(inst, sorted(set(args.p)), deltas, cfg, workers=args.workers, out=args.out)
    if not args.out:
        sys.stdout.write(result.to_csv())
    p, d = result.argmax
    print(f"# argmax: p={p} delta={d}")
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    cfg = _config(args)
    inst = resolve_instance(cfg, with_optimum=False)
    delta = resolve_delta(cfg, inst)
    for p in cfg.p_list:
        c = build_circuit(inst, p, delta, cfg.basis)
        text = export_circuit(c, args.format)
        if args.out:
            path = circuit_path(args.out, p, args.format) if len(cfg.p_list) > 1 else Path(args.out)
            atomic_write(path, text)
            log.info("wrote %s", path)
        else:
            sys.stdout.write(text)
    if args.schedule:
        print(build_schedule(cfg.p_list[-1], delta).table(), file=sys.stderr)
    return 0


def cmd_certify(args: argparse.Namespace) -> int:
    cfg = _config(args)
    inst = resolve_instance(cfg)
    samples = ingest_samples(args.samples, inst)
    verdict = certify(samples, inst, args.baseline_shots, args.subsets, args.baseline_seed)
    print(verdict.summary())
    if args.out:
        atomic_write(args.out, json.dumps(verdict.to_dict(), indent=1) + "\n")
    return 0 if verdict.passed else 2


def cmd_estimate(args: argparse.Namespace) -> int:
    p = args.p[0]
    est = runtime_projection(args.nq, p, args.shots, args.t2q, args.device_class)
    print(f"HQC = {hqc_estimate(args.nq, p, args.shots):.4f}  (N_1q = p*n + n, N_2q = p*n*(n-1)/2)")
    print(f"runtime parallel   = {est.runtime_parallel:.6g} s  (depth 3*p*n)")
    print(f"runtime sequential = {est.runtime_sequential:.6g} s  (p*n*(n-1)/2 gates)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lrqbench", description="Linear-ramp QAOA benchmarking for Weighted MaxCut")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("gen", help="generate an instance file")
    _add_instance_args(p)
    p.add_argument("--out", default=None)
    p.add_argument("--no-optimum", action="store_true", help="skip the exact optimum")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("run", help="depth sweep")
    _add_instance_args(p)
    _add_run_args(p, "1,3,10")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("diagram", help="performance diagram over p and delta")
    _add_instance_args(p)
    _add_run_args(p, "1,3,10")
    p.add_argument("--deltas", type=_floats, default=None, help="comma-separated ramp scales")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("export", help="write circuits")
    _add_instance_args(p)
    _add_run_args(p, "1")
    p.add_argument("--schedule", action="store_true", help="also print the ramp table to stderr")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("certify", help="certify a sample file against the random baseline")
    _add_instance_args(p)
    _add_run_args(p, "1")
    p.add_argument("--samples", required=True, help="sample file (lrq-samples format)")
    p.add_argument("--baseline-shots", type=int, default=None, help="shots per baseline subset (default: sample count)")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("estimate", help="HQC and runtime projections")
    p.add_argument("--nq", type=int, required=True)
    p.add_argument("--p", type=_ints, required=True)
    p.add_argument("--shots", type=int, default=1000)
    p.add_argument("--t2q", type=float, default=68e-9, help="two-qubit gate time in seconds")
    p.add_argument("--device-class", default="parallel", help="parallel or sequential")
    p.set_defaults(func=cmd_estimate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, OptimumUnavailable, OSError) as exc:
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
