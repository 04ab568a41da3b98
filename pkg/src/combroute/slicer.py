"""Slice-and-route baseline.

Cuts the circuit at every maximal run of single-qubit gates, routes each
CNOT slice independently with row/column elimination over the full
connectivity graph, and re-interleaves the slices in order.  Deliberately
naive: no gates are commuted across cut points, and every slice is routed
against the whole graph even when it touches few qubits.
"""

from __future__ import annotations

from typing import List

from .circuit import CNOT, Circuit, Gate, SingleQubit, parity_matrix
from .rowcol import rowcol
from .topology import Topology

__all__ = ["slice", "slice_route"]


def slice(c: Circuit) -> List[Circuit]:
    """Split into maximal CNOT-only and single-qubit-only segments.

    Segments alternate in kind, none is empty, and concatenating their gate
    lists reproduces the input exactly.  Each segment keeps the full qubit
    count of the original circuit.
    """
    segments: List[Circuit] = []
    run: List[Gate] = []
    run_is_cnot = None
    for g in c.gates:
        if not isinstance(g, (CNOT, SingleQubit)):
            raise TypeError(f"cannot slice gate of type {type(g).__name__}")
        is_cnot = isinstance(g, CNOT)
        if run and is_cnot != run_is_cnot:
            segments.append(Circuit(c.n_qubits, tuple(run)))
            run = []
        run.append(g)
        run_is_cnot = is_cnot
    if run:
        segments.append(Circuit(c.n_qubits, tuple(run)))
    return segments


def slice_route(c: Circuit, g: Topology) -> Circuit:
    """Route every CNOT slice with rowcol; pass single-qubit runs through."""
    if c.n_qubits != g.n_vertices:
        raise ValueError(
            f"circuit has {c.n_qubits} qubits but topology has {g.n_vertices} vertices"
        )
    out: List[Gate] = []
    for segment in slice(c):
        if segment.gates and isinstance(segment.gates[0], CNOT):
            out.extend(rowcol(parity_matrix(segment), g).gates)
        else:
            out.extend(segment.gates)
    return Circuit(c.n_qubits, tuple(out))
