"""Topology-constrained resynthesis of CNOT combs.

Instead of routing each CNOT segment of a sliced circuit separately, the
whole comb is treated as one linear operator over its temporal qubits and
eliminated wire by wire.  At every step one *available* temporal qubit (the
current end of some logical wire) is extracted: its row and column of the
full parity matrix are reduced to unit vectors using row operations between
available qubits only, restricted to edges of the hardware graph.  When a
wire ends at a hole, extracting it re-opens the wire on the other side of
the hole, so elimination tunnels through the holes from the tails of the
chains back to their heads.  A logical vertex leaves the connectivity graph
only when its chain head is extracted, and then only if it is non-cutting,
exactly as in plain row/column elimination; with no holes the procedure
degenerates to that algorithm.

The emitted operations, reversed, form the output comb's circuit; the hole
set is carried over unchanged, so any plugging that fits the input fits the
output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Set, Tuple

from .circuit import CNOT, Circuit, parity_matrix
from .comb import Comb, Hole, TemporalMap, compose, decompose, frontier
from .gf2 import BitMatrix, solve_xor_subset
from .rowcol import RowOp, eliminate_column, eliminate_row
from .topology import Topology, non_cutting_vertices

__all__ = [
    "ExtractionState",
    "initial_state",
    "build_submatrix",
    "choose_extractible",
    "combsynth",
    "route_circuit",
]


@dataclass
class ExtractionState:
    """Mutable elimination state over the full temporal parity matrix.

    `p` is the n_temporal x n_temporal matrix being reduced; extracted
    qubits leave unit rows and columns behind.  `t` maps each active
    logical qubit to the live available temporal qubit currently ending its
    wire, and `active_logical` is the set of topology vertices still
    carrying live temporal qubits out of the `n_logical` originals.
    """

    p: BitMatrix
    live_temporal: Set[int]
    t: TemporalMap
    active_logical: Set[int]
    n_logical: int

    def available(self) -> Set[int]:
        return set(self.t.values())


def initial_state(comb: Comb, g: Topology) -> ExtractionState:
    """Extraction state for a fresh comb on `g`; validates the comb."""
    _, t = frontier(comb, g.n_vertices)
    n = comb.circuit.n_qubits
    return ExtractionState(
        p=parity_matrix(comb.circuit),
        live_temporal=set(range(n)),
        t=dict(t),
        active_logical=set(range(g.n_vertices)),
        n_logical=g.n_vertices,
    )


def build_submatrix(state: ExtractionState) -> BitMatrix:
    """Frontier sub-matrix: row q holds the P row of t(q), zero if retired.

    Columns span all temporal qubits of P; rows sit at their logical
    positions.
    """
    sub = BitMatrix(state.n_logical, state.p.n_cols)
    for q in state.active_logical:
        sub.set_row(q, state.p.row(state.t[q]))
    return sub


# invariant over one synthesis run, so memoised on the (frozen) comb
@lru_cache(maxsize=8)
def _first_gate_positions(comb: Comb) -> Dict[int, float]:
    first: Dict[int, float] = {}
    for i, gate in enumerate(comb.circuit.gates):
        if isinstance(gate, CNOT):
            qubits = (gate.control, gate.target)
        else:
            qubits = (gate.qubit,)
        for q in qubits:
            first.setdefault(q, i)
    return first


def _is_extractible(
    e: int,
    state: ExtractionState,
    g: Topology,
    dirty_mask: int,
    available_rows: List[int],
    chain_second: Set[int],
    non_cutting: Optional[Set[int]],
    owner: Dict[int, int],
) -> bool:
    if dirty_mask & (1 << e):
        return False
    if solve_xor_subset(available_rows, 1 << e) is None:
        return False
    if e not in chain_second:
        # extracting a chain head retires its vertex
        assert non_cutting is not None
        if owner[e] not in non_cutting:
            return False
    return True


def choose_extractible(comb: Comb, state: ExtractionState, g: Topology) -> int:
    """Pick the next temporal qubit to extract.

    Preference follows the cut order of the holes: writing h_min for the
    hole whose second wire starts earliest in the comb circuit, the
    available second wires of the other live holes are tried latest-cut
    first (highest wire index on ties), then the remaining available wires
    in ascending order.  The first candidate passing the extractibility
    predicate wins: its column must be supported on available rows only,
    its unit vector must lie in their span, and a chain-head candidate must
    be non-cutting in the active topology.
    """
    available = state.available()
    owner = {w: q for q, w in state.t.items()}
    first_gate = _first_gate_positions(comb)

    def cut_pos(wire: int) -> float:
        return first_gate.get(wire, math.inf)

    live_holes = [(a, b) for a, b in comb.holes if b in state.live_temporal]
    part_a: List[int] = []
    if live_holes:
        h_min = min(live_holes, key=lambda h: (cut_pos(h[1]), h[1]))
        part_a = sorted(
            (b for a, b in live_holes if (a, b) != h_min and b in available),
            key=lambda w: (-cut_pos(w), -w),
        )
    part_b = sorted(available - set(part_a))
    candidates = part_a + part_b

    dirty_mask = 0
    for w in state.live_temporal:
        if w not in available:
            dirty_mask |= state.p.row(w)
    available_rows = [state.p.row(state.t[q]) for q in sorted(state.active_logical)]
    chain_second = {b for _, b in comb.holes}
    non_cutting: Optional[Set[int]] = None
    for e in candidates:
        if e not in chain_second and non_cutting is None:
            non_cutting = non_cutting_vertices(g, state.active_logical)
        if _is_extractible(
            e, state, g, dirty_mask, available_rows, chain_second, non_cutting, owner
        ):
            return e
    raise RuntimeError("no extractible temporal qubit; comb or topology unusable")


def combsynth(
    comb: Comb, g: Topology, trace: Optional[List[Tuple[int, int]]] = None
) -> Comb:
    """Resynthesise a comb's CNOTs to fit the connectivity graph.

    The output comb has the same holes and the same parity matrix, and
    every CNOT joins temporal qubits whose logical owners share an edge of
    `g` and which are simultaneously alive.  When `trace` is a list, one
    (extracted_qubit, n_row_operations) pair is appended per step.
    """
    if not g.is_connected():
        raise ValueError("topology must be connected")
    state = initial_state(comb, g)
    chain_before = {b: a for a, b in comb.holes}
    ops: List[RowOp] = []
    while state.live_temporal:
        e = choose_extractible(comb, state, g)
        q0 = next(q for q, w in state.t.items() if w == e)
        row_of = {state.t[q]: q for q in state.active_logical}
        step_ops = eliminate_column(state.p, g, state.active_logical, e, e, row_of)
        step_ops += eliminate_row(state.p, g, state.active_logical, e, e, row_of)
        ops.extend(step_ops)
        if trace is not None:
            trace.append((e, len(step_ops)))
        state.live_temporal.discard(e)
        if e in chain_before:
            state.t[q0] = chain_before[e]
        else:
            state.active_logical.discard(q0)
            del state.t[q0]
    n = comb.circuit.n_qubits
    if state.p != BitMatrix.identity(n):
        raise AssertionError("extraction did not reduce the parity matrix")
    circuit = Circuit(n, tuple(CNOT(op.src, op.dst) for op in reversed(ops)))
    return Comb(circuit, comb.holes)


def route_circuit(c: Circuit, g: Topology) -> Circuit:
    """Route a CNOT + single-qubit circuit onto the connectivity graph.

    Cuts the single-qubit gates out, resynthesises the remaining CNOT comb
    against the graph, and plugs the gates back in.
    """
    comb, plugging = decompose(c)
    routed = combsynth(comb, g)
    return compose(routed, plugging)
