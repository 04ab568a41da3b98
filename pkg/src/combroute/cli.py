"""Command-line front end: route, verify, bench, topo.

Exit codes: 0 success, 1 verification mismatch, 2 usage or operational
error.  Diagnostics go to standard error; results (verdicts, listings) to
standard output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from .bench import ExperimentConfig, render_figures, run_experiment, write_records_csv
from .circuit import (
    MAX_SIM_QUBITS,
    deterministic_bindings,
    opaque_labels,
    parse_circuit,
    simulate_unitary,
    trace_overlap,
    write_circuit,
)
from .comb import CompositionError
from .combsynth import route_circuit
from .slicer import slice_route
from .topology import BUILTIN_TOPOLOGY_NAMES, resolve_topology

__all__ = ["main"]

VERIFY_TOLERANCE = 1e-9


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="combroute",
        description="Resynthesise CNOT circuits for constrained connectivity "
        "by cutting single-qubit gates into comb holes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    route = sub.add_parser("route", help="route a circuit file onto a topology")
    route.add_argument("--in", dest="infile", required=True, metavar="FILE")
    route.add_argument(
        "--arch", required=True, metavar="NAME|FILE",
        help="builtin topology name or topology JSON file",
    )
    route.add_argument("--method", choices=("comb", "slice"), default="comb")
    route.add_argument("--out", dest="outfile", required=True, metavar="FILE")

    verify = sub.add_parser(
        "verify", help="check two circuit files for unitary equivalence"
    )
    verify.add_argument("--a", required=True, metavar="FILE")
    verify.add_argument("--b", required=True, metavar="FILE")
    verify.add_argument(
        "--max-qubits", type=int, default=MAX_SIM_QUBITS,
        help="refuse circuits larger than this (default %(default)s)",
    )

    bench = sub.add_parser("bench", help="run the benchmark grid")
    bench.add_argument(
        "--config", metavar="JSON",
        help="experiment config file; omitted = full default grid",
    )
    bench.add_argument("--out-dir", dest="out_dir", required=True, metavar="DIR")
    bench.add_argument("--workers", type=int, default=None)

    topo = sub.add_parser("topo", help="inspect topologies")
    pick = topo.add_mutually_exclusive_group(required=True)
    pick.add_argument("--list", action="store_true", help="list builtin names")
    pick.add_argument("--show", metavar="NAME|FILE", help="print a topology as JSON")

    return parser


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _cmd_route(args: argparse.Namespace) -> int:
    c = parse_circuit(_read(args.infile))
    g = resolve_topology(args.arch)
    router = route_circuit if args.method == "comb" else slice_route
    routed = router(c, g)
    with open(args.outfile, "w", encoding="utf-8") as fh:
        fh.write(write_circuit(routed))
    print(
        f"routed with {args.method}: {c.cnot_count} -> {routed.cnot_count} CNOTs, "
        f"{len(c)} -> {len(routed)} gates",
        file=sys.stderr,
    )
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    a = parse_circuit(_read(args.a))
    b = parse_circuit(_read(args.b))
    if a.n_qubits != b.n_qubits:
        print(f"not equivalent: qubit counts differ ({a.n_qubits} vs {b.n_qubits})")
        return 1
    if a.n_qubits > args.max_qubits:
        raise ValueError(
            f"circuits have {a.n_qubits} qubits, above the --max-qubits cap "
            f"of {args.max_qubits}"
        )
    bindings = deterministic_bindings(opaque_labels(a) | opaque_labels(b))
    overlap = trace_overlap(
        simulate_unitary(a, bindings), simulate_unitary(b, bindings)
    )
    if overlap >= 1 - VERIFY_TOLERANCE:
        print("equivalent")
        return 0
    print(f"not equivalent (trace overlap {overlap:.9f})")
    return 1


def _cmd_bench(args: argparse.Namespace) -> int:
    if args.config is None:
        cfg = ExperimentConfig()
    else:
        cfg = ExperimentConfig.from_dict(json.loads(_read(args.config)))
    os.makedirs(args.out_dir, exist_ok=True)
    step = None

    def progress(done: int, total: int) -> None:
        nonlocal step
        if step is None:
            step = max(1, total // 25)
        if done % step == 0 or done == total:
            print(f"  {done}/{total} grid points", file=sys.stderr)

    records = run_experiment(cfg, workers=args.workers, progress=progress)
    csv_path = os.path.join(args.out_dir, "results.csv")
    write_records_csv(records, csv_path)
    figures = render_figures(records, args.out_dir)
    failed = sum(1 for r in records if r.n_cnots_out < 0)
    if failed:
        print(f"warning: {failed} of {len(records)} records failed", file=sys.stderr)
    print(f"wrote {csv_path} and {len(figures)} figures", file=sys.stderr)
    return 0


def _cmd_topo(args: argparse.Namespace) -> int:
    if args.list:
        for name in BUILTIN_TOPOLOGY_NAMES:
            print(name)
        return 0
    g = resolve_topology(args.show)
    payload = {
        "name": g.name,
        "num_qubits": g.n_vertices,
        "edges": [list(e) for e in g.edges],
    }
    print(json.dumps(payload, indent=2))
    return 0


_HANDLERS = {
    "route": _cmd_route,
    "verify": _cmd_verify,
    "bench": _cmd_bench,
    "topo": _cmd_topo,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (ValueError, TypeError, OSError, RuntimeError, CompositionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
