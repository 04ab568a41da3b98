"""Random-circuit benchmark comparing comb routing against slice routing.

The experiment grid crosses architectures, input CNOT counts, and
single-qubit-gate proportions; every grid point draws `circuits_per_point`
seeded random circuits and routes each one with both methods, recording the
output CNOT count, the percentage CNOT overhead, and wall time.  Results go
to CSV (one row per circuit and method) and to one SVG overhead chart per
architecture/proportion pair.

Routed outputs are always checked for edge compliance, and instances small
enough to simulate (at most 8 qubits and 64 CNOTs) are also checked for
unitary equivalence with the input.  A failed routing or check is recorded
with n_cnots_out = -1 and NaN overhead rather than aborting the run.
"""

from __future__ import annotations

import csv
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field, fields
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure

from .circuit import (
    CNOT,
    Circuit,
    SingleQubit,
    deterministic_bindings,
    opaque_labels,
    simulate_unitary,
    trace_overlap,
)
from .combsynth import route_circuit
from .slicer import slice_route
from .topology import BUILTIN_TOPOLOGY_NAMES, Topology, resolve_topology

__all__ = [
    "ExperimentConfig",
    "ExperimentRecord",
    "CSV_COLUMNS",
    "random_circuit",
    "run_experiment",
    "write_records_csv",
    "render_figures",
]

DEFAULT_CNOT_COUNTS = (4, 8, 16, 32, 64, 128, 256, 512, 1024)
DEFAULT_PROPORTIONS = (0.05, 0.15, 0.25, 0.5)

CSV_COLUMNS = [
    "architecture",
    "n_cnots_in",
    "proportion",
    "seed",
    "method",
    "n_cnots_out",
    "overhead_percent",
    "wall_millis",
]

# instances at or below both limits get simulated and compared to the input
SPOT_CHECK_MAX_QUBITS = 8
SPOT_CHECK_MAX_CNOTS = 64
EQUIVALENCE_TOLERANCE = 1e-9


@dataclass
class ExperimentConfig:
    """Grid definition; the defaults reproduce the full benchmark."""

    architectures: List[str] = field(
        default_factory=lambda: list(BUILTIN_TOPOLOGY_NAMES)
    )
    cnot_counts: List[int] = field(default_factory=lambda: list(DEFAULT_CNOT_COUNTS))
    proportions: List[float] = field(
        default_factory=lambda: list(DEFAULT_PROPORTIONS)
    )
    circuits_per_point: int = 20
    seed: int = 0

    def __post_init__(self):
        if not self.architectures:
            raise ValueError("at least one architecture is required")
        for count in self.cnot_counts:
            if int(count) != count or count <= 0:
                raise ValueError(f"CNOT counts must be positive integers, got {count}")
        for p in self.proportions:
            if not 0 < p <= 1:
                raise ValueError(f"proportions must lie in (0, 1], got {p}")
        if self.circuits_per_point < 1:
            raise ValueError("circuits_per_point must be at least 1")

    @classmethod
    def from_dict(cls, payload: Dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(payload) - known)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**payload)


@dataclass
class ExperimentRecord:
    architecture: str
    n_cnots_in: int
    proportion: float
    seed: int
    method: str
    n_cnots_out: int
    overhead_percent: float
    wall_millis: float


def random_circuit(n_qubits: int, n_cnots: int, proportion: float, seed: int) -> Circuit:
    """Seeded random circuit: n_cnots uniform CNOTs, floor(proportion *
    n_cnots) opaque single-qubit gates at uniform positions and qubits.

    Single-qubit gates carry labels u0, u1, ... in insertion order.
    """
    if n_qubits < 2:
        raise ValueError("random circuits need at least 2 qubits")
    if n_cnots < 0:
        raise ValueError("CNOT count must be non-negative")
    if not 0 <= proportion <= 1:
        raise ValueError("proportion must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    gates: List = []
    for _ in range(n_cnots):
        control = int(rng.integers(n_qubits))
        target = int(rng.integers(n_qubits - 1))
        if target >= control:
            target += 1
        gates.append(CNOT(control, target))
    for k in range(math.floor(proportion * n_cnots)):
        qubit = int(rng.integers(n_qubits))
        position = int(rng.integers(len(gates) + 1))
        gates.insert(position, SingleQubit(f"u{k}", (), qubit))
    return Circuit(n_qubits, tuple(gates))


@lru_cache(maxsize=None)
def _architecture(spec: str) -> Topology:
    return resolve_topology(spec)


def _verify_output(c: Circuit, routed: Circuit, g: Topology, n_cnots: int) -> None:
    for gate in routed.gates:
        if isinstance(gate, CNOT) and not g.has_edge(gate.control, gate.target):
            raise RuntimeError(
                f"routed CNOT({gate.control},{gate.target}) is off the topology"
            )
    if g.n_vertices <= SPOT_CHECK_MAX_QUBITS and n_cnots <= SPOT_CHECK_MAX_CNOTS:
        bindings = deterministic_bindings(opaque_labels(c) | opaque_labels(routed))
        overlap = trace_overlap(
            simulate_unitary(c, bindings), simulate_unitary(routed, bindings)
        )
        if overlap < 1 - EQUIVALENCE_TOLERANCE:
            raise RuntimeError(f"routed circuit is not equivalent (overlap {overlap})")


def _route_point(job: Tuple[str, int, float, int]) -> List[ExperimentRecord]:
    arch, n_cnots, proportion, seed = job
    g = _architecture(arch)
    c = random_circuit(g.n_vertices, n_cnots, proportion, seed)
    records: List[ExperimentRecord] = []
    for method, router in (("comb", route_circuit), ("slice", slice_route)):
        start = time.perf_counter()
        try:
            routed = router(c, g)
            _verify_output(c, routed, g, n_cnots)
            wall = 1e3 * (time.perf_counter() - start)
            n_out = routed.cnot_count
            overhead = 100.0 * (n_out - n_cnots) / n_cnots
        except Exception:
            wall = 1e3 * (time.perf_counter() - start)
            n_out = -1
            overhead = math.nan
        records.append(
            ExperimentRecord(
                architecture=arch,
                n_cnots_in=n_cnots,
                proportion=proportion,
                seed=seed,
                method=method,
                n_cnots_out=n_out,
                overhead_percent=overhead,
                wall_millis=wall,
            )
        )
    return records


def run_experiment(
    cfg: ExperimentConfig,
    workers: Optional[int] = None,
    progress: Optional[Callable[[int, int], None]] = None,
) -> List[ExperimentRecord]:
    """Route every grid circuit with both methods; two records per circuit.

    The per-circuit seed is cfg.seed plus the circuit's linear grid index,
    so records are reproducible for a fixed config regardless of worker
    count; only wall_millis varies between runs.  `progress`, when given,
    is called with (completed_points, total_points).
    """
    for arch in cfg.architectures:
        _architecture(arch)
    jobs: List[Tuple[str, int, float, int]] = []
    index = 0
    for arch in cfg.architectures:
        for count in cfg.cnot_counts:
            for proportion in cfg.proportions:
                for _ in range(cfg.circuits_per_point):
                    jobs.append((arch, count, proportion, cfg.seed + index))
                    index += 1
    records: List[ExperimentRecord] = []
    if workers is not None and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_route_point, job) for job in jobs]
            for done, future in enumerate(as_completed(futures), start=1):
                records.extend(future.result())
                if progress is not None:
                    progress(done, len(jobs))
    else:
        for done, job in enumerate(jobs, start=1):
            records.extend(_route_point(job))
            if progress is not None:
                progress(done, len(jobs))
    arch_order = {name: i for i, name in enumerate(cfg.architectures)}
    records.sort(
        key=lambda r: (
            arch_order[r.architecture],
            r.n_cnots_in,
            r.proportion,
            r.seed,
            r.method,
        )
    )
    return records


def write_records_csv(records: Sequence[ExperimentRecord], path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow(
                [
                    r.architecture,
                    r.n_cnots_in,
                    r.proportion,
                    r.seed,
                    r.method,
                    r.n_cnots_out,
                    r.overhead_percent,
                    r.wall_millis,
                ]
            )


def _mean_overheads(
    records: Sequence[ExperimentRecord], arch: str, proportion: float, method: str
) -> Tuple[List[int], List[float]]:
    by_count: Dict[int, List[float]] = {}
    for r in records:
        if (
            r.architecture == arch
            and r.proportion == proportion
            and r.method == method
            and r.n_cnots_out >= 0
        ):
            by_count.setdefault(r.n_cnots_in, []).append(r.overhead_percent)
    counts = sorted(by_count)
    return counts, [float(np.mean(by_count[c])) for c in counts]


def _figure_stem(arch: str) -> str:
    # architectures given as file paths must not leak directories into the
    # figure name (an absolute path would even escape out_dir)
    stem = os.path.basename(arch.rstrip("/\\")) or "topology"
    if stem.endswith(".json"):
        stem = stem[: -len(".json")]
    return stem


def render_figures(records: Sequence[ExperimentRecord], out_dir: str) -> List[str]:
    """One SVG overhead chart per (architecture, proportion); returns paths."""
    pairs = sorted(
        {(r.architecture, r.proportion) for r in records},
        key=lambda p: (p[0], p[1]),
    )
    paths: List[str] = []
    for arch, proportion in pairs:
        fig = Figure(figsize=(6.4, 4.2))
        FigureCanvasSVG(fig)
        ax = fig.add_subplot(111)
        for method, marker in (("comb", "o"), ("slice", "s")):
            counts, means = _mean_overheads(records, arch, proportion, method)
            if counts:
                ax.plot(counts, means, marker=marker, label=method)
        ax.set_xscale("log", base=2)
        ax.axhline(0.0, color="grey", linewidth=0.8, alpha=0.6)
        ax.set_xlabel("input CNOT count")
        ax.set_ylabel("CNOT overhead [%]")
        ax.set_title(f"{arch}, {100 * proportion:g}% single-qubit gates")
        ax.grid(True, alpha=0.3)
        ax.legend()
        path = os.path.join(out_dir, f"{_figure_stem(arch)}-{100 * proportion:g}.svg")
        fig.savefig(path)
        paths.append(path)
    return paths
