"""Quantum combs: CNOT circuits with single-qubit holes.

A comb is a circuit over "temporal" qubits together with a set of holes.
Each hole (q1, q2) marks the spot where a single-qubit gate was cut out:
wire q1 ends directly before the gate and wire q2 begins directly after it.
A plugging map assigns a concrete single-qubit gate to every hole; composing
a comb with a plugging map stitches the wires back together into an ordinary
circuit.

Cutting every single-qubit gate out of a circuit (`decompose`) leaves a pure
CNOT comb whose holes chain linearly along each logical wire, so the comb
can be resynthesised as one global linear operator instead of slice by
slice.  `compose` inverts the cut.  `validate` decides whether an arbitrary
circuit/hole pair is a genuine comb, i.e. whether composition succeeds no
matter which gates are plugged in.

Serialisation: a comb is the circuit text followed by a
``// holes: (a,b) (c,d)`` trailer line; a plugging map is one
``(a,b)=label(params)`` line per hole.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Set, Tuple, Union

from .circuit import (
    CNOT,
    Circuit,
    Gate,
    SingleQubit,
    parse_circuit,
    write_circuit,
)

__all__ = [
    "Hole",
    "TemporalMap",
    "CompositionError",
    "Comb",
    "PluggingMap",
    "decompose",
    "compose",
    "validate",
    "frontier",
    "write_comb",
    "parse_comb",
    "write_plugging",
    "parse_plugging",
]

Hole = Tuple[int, int]

# logical qubit -> the available temporal qubit currently ending its wire
TemporalMap = Dict[int, int]


class CompositionError(Exception):
    """Plugging the comb cannot produce a straight-line circuit."""


def _gate_qubits(g: Gate) -> Tuple[int, ...]:
    if isinstance(g, CNOT):
        return (g.control, g.target)
    return (g.qubit,)


def _touches(g: Gate, q: int) -> bool:
    return q in _gate_qubits(g)


def _rename_gate(g: Gate, old: int, new: int) -> Gate:
    if isinstance(g, CNOT):
        if old not in (g.control, g.target):
            return g
        return CNOT(
            new if g.control == old else g.control,
            new if g.target == old else g.target,
        )
    if g.qubit == old:
        return SingleQubit(g.label, g.params, new)
    return g


@dataclass(frozen=True)
class Comb:
    """Circuit over temporal qubits plus the holes cut into it.

    The constructor only checks that holes name existing wires and are not
    of the degenerate form (q, q); whether the pair is a genuine comb is
    decided by `validate`.
    """

    circuit: Circuit
    holes: FrozenSet[Hole]

    def __init__(self, circuit: Circuit, holes: Iterable[Hole]):
        normalised = frozenset((int(a), int(b)) for a, b in holes)
        n = circuit.n_qubits
        for a, b in normalised:
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"hole ({a},{b}) is out of range for {n} qubits")
            if a == b:
                raise ValueError(f"hole ({a},{a}) is not allowed")
        object.__setattr__(self, "circuit", circuit)
        object.__setattr__(self, "holes", normalised)


class PluggingMap:
    """Assignment of a single-qubit gate to each hole of a comb.

    Only the gate's label and parameters matter; the qubit recorded on the
    stored gate is a carrier value and is ignored by composition, which
    re-targets the gate onto the hole's wire.
    """

    def __init__(self, assignments: Mapping[Hole, SingleQubit]):
        out: Dict[Hole, SingleQubit] = {}
        for hole, gate in assignments.items():
            a, b = hole
            key = (int(a), int(b))
            if not isinstance(gate, SingleQubit):
                raise TypeError(f"plugging for {key} must be a SingleQubit gate")
            out[key] = gate
        self.assignments = out

    def __getitem__(self, hole: Hole) -> SingleQubit:
        return self.assignments[hole]

    def __contains__(self, hole: object) -> bool:
        return hole in self.assignments

    def __len__(self) -> int:
        return len(self.assignments)

    def __iter__(self):
        return iter(sorted(self.assignments))

    def items(self):
        return self.assignments.items()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PluggingMap):
            return NotImplemented
        mine = {h: (g.label, g.params) for h, g in self.assignments.items()}
        theirs = {h: (g.label, g.params) for h, g in other.assignments.items()}
        return mine == theirs

    def __repr__(self) -> str:
        body = ", ".join(
            f"({a},{b})↦{g.label}" for (a, b), g in sorted(self.assignments.items())
        )
        return f"PluggingMap({{{body}}})"


def decompose(c: Circuit) -> Tuple[Comb, PluggingMap]:
    """Cut every single-qubit gate of `c` out into a hole.

    Each cut ends the current temporal wire of its line and starts a fresh
    one.  Fresh wires are numbered n, n+1, ... with each line's
    continuation wires allocated as one consecutive block, lines taken in
    ascending order; the head of line q keeps the number q.
    """
    n = c.n_qubits
    counts = [0] * n
    for g in c.gates:
        if isinstance(g, SingleQubit):
            counts[g.qubit] += 1
        elif not isinstance(g, CNOT):
            raise TypeError(f"cannot decompose gate of type {type(g).__name__}")
    chain: List[List[int]] = []
    nxt = n
    for q in range(n):
        chain.append([q] + list(range(nxt, nxt + counts[q])))
        nxt += counts[q]
    cur = list(range(n))
    used = [0] * n
    gates: List[Gate] = []
    holes: List[Hole] = []
    assignments: Dict[Hole, SingleQubit] = {}
    for g in c.gates:
        if isinstance(g, CNOT):
            gates.append(CNOT(cur[g.control], cur[g.target]))
        else:
            q = g.qubit
            used[q] += 1
            fresh = chain[q][used[q]]
            hole = (cur[q], fresh)
            holes.append(hole)
            assignments[hole] = g
            cur[q] = fresh
    comb = Comb(Circuit(nxt, tuple(gates)), frozenset(holes))
    return comb, PluggingMap(assignments)


def _chain_conflict(holes: Iterable[Hole]) -> bool:
    firsts: Set[int] = set()
    seconds: Set[int] = set()
    for a, b in holes:
        if a in firsts or b in seconds:
            return True
        firsts.add(a)
        seconds.add(b)
    return False


def _stable_topological_order(
    gates: List[Gate], cross_src: int, cross_dst: int
) -> Optional[List[int]]:
    """Order gate indices so wire order holds and cross_src precedes cross_dst.

    Gates on disjoint wires may commute; ties resolve to the lowest original
    index.  Returns None when the constraints are cyclic.
    """
    m = len(gates)
    succ: List[List[int]] = [[] for _ in range(m)]
    indeg = [0] * m
    last_on: Dict[int, int] = {}
    for i, g in enumerate(gates):
        for q in _gate_qubits(g):
            if q in last_on:
                succ[last_on[q]].append(i)
                indeg[i] += 1
            last_on[q] = i
    succ[cross_src].append(cross_dst)
    indeg[cross_dst] += 1
    ready = [i for i in range(m) if indeg[i] == 0]
    heapq.heapify(ready)
    order: List[int] = []
    while ready:
        i = heapq.heappop(ready)
        order.append(i)
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(ready, j)
    if len(order) != m:
        return None
    return order


def compose(comb: Comb, p: Union[PluggingMap, Mapping[Hole, SingleQubit]]) -> Circuit:
    """Plug a gate into every hole and merge the wires back together.

    Holes are processed smallest-first; for each hole (q1, q2) the gates are
    reordered (commuting non-interacting gates only) so everything on q1
    precedes everything on q2, the plugged gate lands directly before the
    first q2 gate, and q2 is renamed to q1 everywhere.  Raises
    CompositionError when no such reorder exists, when renaming collapses a
    hole to (q, q), or when some gate spans both sides of a hole.
    """
    assignments = p.assignments if isinstance(p, PluggingMap) else dict(p)
    missing = sorted(comb.holes - set(assignments))
    if missing:
        raise ValueError(f"plugging map does not cover holes {missing}")
    if _chain_conflict(comb.holes):
        raise CompositionError("holes do not chain: some wire is cut twice")
    gates = list(comb.circuit.gates)
    remaining = list(comb.holes)
    plugs = {h: assignments[h] for h in comb.holes}
    while remaining:
        remaining.sort()
        q1, q2 = remaining.pop(0)
        if q1 == q2:
            raise CompositionError(f"hole collapsed to ({q1},{q1}) during renaming")
        idx1 = [i for i, g in enumerate(gates) if _touches(g, q1)]
        idx2 = [i for i, g in enumerate(gates) if _touches(g, q2)]
        for i in idx1:
            if i in idx2:
                raise CompositionError(
                    f"gate {gates[i]!r} spans both sides of hole ({q1},{q2})"
                )
        if idx1 and idx2 and idx1[-1] > idx2[0]:
            order = _stable_topological_order(gates, idx1[-1], idx2[0])
            if order is None:
                raise CompositionError(
                    f"cyclic dependency while closing hole ({q1},{q2})"
                )
            gates = [gates[i] for i in order]
        stored = plugs.pop((q1, q2))
        plug = SingleQubit(stored.label, stored.params, q2)
        pos = len(gates)
        for i, g in enumerate(gates):
            if _touches(g, q2):
                pos = i
                break
        gates.insert(pos, plug)
        gates = [_rename_gate(g, q2, q1) for g in gates]
        remaining = [
            (q1 if a == q2 else a, q1 if b == q2 else b) for a, b in remaining
        ]
        plugs = {
            (q1 if a == q2 else a, q1 if b == q2 else b): g
            for (a, b), g in plugs.items()
        }
    heads = sorted(set(range(comb.circuit.n_qubits)) - {b for _, b in comb.holes})
    relabel = {h: i for i, h in enumerate(heads)}
    out: List[Gate] = []
    for g in gates:
        if isinstance(g, CNOT):
            out.append(CNOT(relabel[g.control], relabel[g.target]))
        else:
            out.append(SingleQubit(g.label, g.params, relabel[g.qubit]))
    return Circuit(len(heads), tuple(out))


def validate(comb: Comb) -> bool:
    """Decide whether composition succeeds for every plugging map.

    Equivalent to acyclicity of the event graph in which each wire's gates
    run in circuit order, sandwiched between the hole that starts the wire
    and the hole that ends it.  Hole sets that cut some wire twice are
    rejected outright, mirroring `compose`.
    """
    if _chain_conflict(comb.holes):
        return False
    holes = sorted(comb.holes)
    gates = comb.circuit.gates
    m = len(gates)
    total = m + len(holes)
    starts: Dict[int, int] = {}
    ends: Dict[int, int] = {}
    for i, (a, b) in enumerate(holes):
        ends[a] = m + i
        starts[b] = m + i
    on_wire: Dict[int, List[int]] = {}
    for i, g in enumerate(gates):
        for q in _gate_qubits(g):
            on_wire.setdefault(q, []).append(i)
    succ: List[List[int]] = [[] for _ in range(total)]
    indeg = [0] * total
    for w in range(comb.circuit.n_qubits):
        events: List[int] = []
        if w in starts:
            events.append(starts[w])
        events.extend(on_wire.get(w, ()))
        if w in ends:
            events.append(ends[w])
        for a, b in zip(events, events[1:]):
            succ[a].append(b)
            indeg[b] += 1
    ready = [v for v in range(total) if indeg[v] == 0]
    seen = 0
    while ready:
        v = ready.pop()
        seen += 1
        for u in succ[v]:
            indeg[u] -= 1
            if indeg[u] == 0:
                ready.append(u)
    return seen == total


def frontier(comb: Comb, n_logical: int) -> Tuple[Set[int], TemporalMap]:
    """Available temporal qubits and the logical-to-temporal frontier map.

    A temporal qubit is available when it is not the first element of any
    hole; t(q) follows the hole chain from logical head q to its current
    end.  The chain heads must be exactly 0..n_logical-1.
    """
    if not validate(comb):
        raise ValueError("comb is not valid")
    n = comb.circuit.n_qubits
    firsts = {a: b for a, b in comb.holes}
    seconds = {b for _, b in comb.holes}
    heads = [w for w in range(n) if w not in seconds]
    if heads != list(range(n_logical)):
        raise ValueError(
            f"temporal chain heads {heads} are not 0..{n_logical - 1}"
        )
    t: TemporalMap = {}
    for q in range(n_logical):
        w = q
        while w in firsts:
            w = firsts[w]
        t[q] = w
    available = set(range(n)) - set(firsts)
    return available, t


_HOLES_PREFIX = "// holes:"
_HOLE_TOKEN_RE = re.compile(r"\((\d+),(\d+)\)")
_PLUG_LINE_RE = re.compile(
    r"\((\d+),(\d+)\)=([A-Za-z_][A-Za-z0-9_]*)(?:\(([^()]*)\))?"
)


def write_comb(comb: Comb) -> str:
    body = write_circuit(comb.circuit).rstrip("\n")
    pairs = " ".join(f"({a},{b})" for a, b in sorted(comb.holes))
    trailer = _HOLES_PREFIX + (" " + pairs if pairs else "")
    return body + "\n" + trailer + "\n"


def parse_comb(text: str) -> Comb:
    hole_lines = [
        line.strip()
        for line in text.splitlines()
        if line.strip().startswith(_HOLES_PREFIX)
    ]
    if len(hole_lines) > 1:
        raise ValueError("multiple '// holes:' trailer lines")
    holes: List[Hole] = []
    if hole_lines:
        rest = hole_lines[0][len(_HOLES_PREFIX):].strip()
        if rest:
            for token in rest.split():
                m = _HOLE_TOKEN_RE.fullmatch(token)
                if m is None:
                    raise ValueError(f"malformed hole token {token!r}")
                holes.append((int(m.group(1)), int(m.group(2))))
    return Comb(parse_circuit(text), frozenset(holes))


def write_plugging(p: PluggingMap) -> str:
    lines = []
    for (a, b), gate in sorted(p.assignments.items()):
        params = ""
        if gate.params:
            params = "(" + ",".join(repr(x) for x in gate.params) + ")"
        lines.append(f"({a},{b})={gate.label}{params}")
    return "".join(line + "\n" for line in lines)


def parse_plugging(text: str) -> PluggingMap:
    assignments: Dict[Hole, SingleQubit] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("//"):
            continue
        m = _PLUG_LINE_RE.fullmatch(line)
        if m is None:
            raise ValueError(f"line {lineno}: malformed plugging entry {line!r}")
        hole = (int(m.group(1)), int(m.group(2)))
        if hole in assignments:
            raise ValueError(f"line {lineno}: duplicate entry for hole {hole}")
        params: Tuple[float, ...] = ()
        if m.group(4) is not None:
            body = m.group(4).strip()
            if body:
                try:
                    params = tuple(float(tok) for tok in body.split(","))
                except ValueError:
                    raise ValueError(
                        f"line {lineno}: malformed parameters in {line!r}"
                    ) from None
        assignments[hole] = SingleQubit(m.group(3), params, hole[0])
    return PluggingMap(assignments)
