"""Comb-aware CNOT resynthesis for connectivity-constrained hardware.

Cut the single-qubit gates out of a circuit, leaving a CNOT comb; rebuild
the comb's parity matrix as one global linear operator restricted to the
device's coupling graph; plug the gates back in.  The package also ships
the slice-and-route baseline, a simulator-backed equivalence checker, and a
benchmark harness comparing the two methods' CNOT overhead.
"""

from .circuit import (
    CNOT,
    Circuit,
    SingleQubit,
    parity_matrix,
    parse_circuit,
    simulate_unitary,
    trace_overlap,
    write_circuit,
)
from .comb import (
    Comb,
    CompositionError,
    PluggingMap,
    compose,
    decompose,
    frontier,
    parse_comb,
    parse_plugging,
    validate,
    write_comb,
    write_plugging,
)
from .combsynth import combsynth, route_circuit
from .gf2 import BitMatrix
from .rowcol import rowcol
from .slicer import slice_route
from .topology import (
    BUILTIN_TOPOLOGY_NAMES,
    Topology,
    builtin_topology,
    load_topology,
    resolve_topology,
)

__version__ = "0.1.0"

__all__ = [
    "CNOT",
    "Circuit",
    "SingleQubit",
    "parity_matrix",
    "parse_circuit",
    "simulate_unitary",
    "trace_overlap",
    "write_circuit",
    "Comb",
    "CompositionError",
    "PluggingMap",
    "compose",
    "decompose",
    "frontier",
    "parse_comb",
    "parse_plugging",
    "validate",
    "write_comb",
    "write_plugging",
    "combsynth",
    "route_circuit",
    "BitMatrix",
    "rowcol",
    "slice_route",
    "BUILTIN_TOPOLOGY_NAMES",
    "Topology",
    "builtin_topology",
    "load_topology",
    "resolve_topology",
    "__version__",
]
