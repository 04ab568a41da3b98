"""Circuit intermediate representation, parity matrices, text I/O, simulation.

The gate alphabet is CNOT plus named single-qubit gates.  Single-qubit gates
are opaque labels with optional real parameters; a small set of well-known
labels (h, x, z, s, t, rz, rx, u) has built-in matrices so circuits can be
simulated without explicit bindings.

Text format, one statement per line:

    qreg q[N];
    cx q[a],q[b];
    label q[a];
    label(theta[,phi[,lambda]]) q[a];

`//` starts a comment.  `OPENQASM`/`include` preamble lines are tolerated on
input and never emitted.

The simulator uses little-endian basis ordering: qubit 0 is the least
significant bit of a computational basis index.
"""

from __future__ import annotations

import cmath
import hashlib
import math
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Set, Tuple, Union

import numpy as np

from .gf2 import BitMatrix, row_add

__all__ = [
    "CNOT",
    "SingleQubit",
    "Gate",
    "Circuit",
    "CircuitSyntaxError",
    "MAX_SIM_QUBITS",
    "parity_matrix",
    "simulate_unitary",
    "parse_circuit",
    "write_circuit",
    "trace_overlap",
    "opaque_labels",
    "deterministic_bindings",
]

MAX_SIM_QUBITS = 12


@dataclass(frozen=True)
class CNOT:
    control: int
    target: int

    def __post_init__(self):
        if self.control == self.target:
            raise ValueError("CNOT control and target must differ")


@dataclass(frozen=True)
class SingleQubit:
    label: str
    params: Tuple[float, ...] = ()
    qubit: int = 0

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))


Gate = Union[CNOT, SingleQubit]


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over qubits 0..n_qubits-1; leftmost gate runs first."""

    n_qubits: int
    gates: Tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.n_qubits < 0:
            raise ValueError("qubit count must be non-negative")
        for g in self.gates:
            if isinstance(g, CNOT):
                lo, hi = sorted((g.control, g.target))
                if lo < 0 or hi >= self.n_qubits:
                    raise ValueError(f"gate {g} out of range for {self.n_qubits} qubits")
            elif isinstance(g, SingleQubit):
                if not 0 <= g.qubit < self.n_qubits:
                    raise ValueError(f"gate {g} out of range for {self.n_qubits} qubits")
            else:
                raise TypeError(f"unsupported gate object {g!r}")

    @property
    def cnot_count(self) -> int:
        return sum(1 for g in self.gates if isinstance(g, CNOT))

    def __len__(self) -> int:
        return len(self.gates)


def parity_matrix(c: Circuit) -> BitMatrix:
    """Parity matrix of a CNOT-only circuit: identity, then one row op per gate."""
    m = BitMatrix.identity(c.n_qubits)
    for g in c.gates:
        if not isinstance(g, CNOT):
            raise ValueError(f"parity matrix is defined for CNOT-only circuits, found {g}")
        row_add(m, g.control, g.target)
    return m


class CircuitSyntaxError(ValueError):
    """Parse failure with 1-based line and column positions."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


_QREG_RE = re.compile(r"^qreg\s+([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]\s*;$")
_CX_RE = re.compile(
    r"^cx\s+([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]\s*,\s*([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]\s*;$"
)
_SINGLE_RE = re.compile(
    r"^([A-Za-z_]\w*)\s*(?:\(([^()]*)\))?\s+([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]\s*;$"
)
_MULTI_RE = re.compile(r"^([A-Za-z_]\w*)[^;]*\[[^;]*,")


def parse_circuit(text: str) -> Circuit:
    """Parse the text format into a Circuit; raises CircuitSyntaxError."""
    reg_name: Optional[str] = None
    n_qubits = 0
    gates: List[Gate] = []

    def err(msg: str, line_no: int, col: int):
        raise CircuitSyntaxError(msg, line_no, col)

    for line_no, raw in enumerate(text.splitlines(), start=1):
        stmt = raw.split("//", 1)[0].strip()
        if not stmt:
            continue
        col = raw.index(stmt[0]) + 1
        if stmt.startswith("OPENQASM") or stmt.startswith("include"):
            continue
        m = _QREG_RE.match(stmt)
        if m:
            if reg_name is not None:
                err("duplicate qreg declaration", line_no, col)
            reg_name = m.group(1)
            n_qubits = int(m.group(2))
            continue
        if reg_name is None:
            err("statement before qreg declaration", line_no, col)

        def check_index(name: str, idx: int):
            if name != reg_name:
                err(f"unknown register {name!r}", line_no, col)
            if idx >= n_qubits:
                err(f"qubit index {idx} out of range for {reg_name}[{n_qubits}]", line_no, col)

        m = _CX_RE.match(stmt)
        if m:
            check_index(m.group(1), int(m.group(2)))
            check_index(m.group(3), int(m.group(4)))
            a, b = int(m.group(2)), int(m.group(4))
            if a == b:
                err("cx control and target must differ", line_no, col)
            gates.append(CNOT(a, b))
            continue
        m = _SINGLE_RE.match(stmt)
        if m and m.group(1) not in ("cx", "qreg"):
            label, params_text, reg, idx = m.group(1), m.group(2), m.group(3), int(m.group(4))
            check_index(reg, idx)
            params: Tuple[float, ...] = ()
            if params_text is not None:
                parts = [p.strip() for p in params_text.split(",")]
                if parts == [""]:
                    parts = []
                try:
                    params = tuple(float(p) for p in parts)
                except ValueError:
                    err(f"malformed parameter list ({params_text!r})", line_no, col)
            gates.append(SingleQubit(label, params, idx))
            continue
        if _MULTI_RE.match(stmt):
            err(f"unknown multi-qubit gate {stmt.split()[0]!r}", line_no, col)
        err(f"cannot parse statement {stmt!r}", line_no, col)

    if reg_name is None:
        raise CircuitSyntaxError("missing qreg declaration", max(1, text.count("\n") + 1), 1)
    return Circuit(n_qubits, tuple(gates))


def write_circuit(c: Circuit) -> str:
    """Serialise a Circuit; parse_circuit(write_circuit(c)) == c."""
    lines = [f"qreg q[{c.n_qubits}];"]
    for g in c.gates:
        if isinstance(g, CNOT):
            lines.append(f"cx q[{g.control}],q[{g.target}];")
        else:
            if not re.fullmatch(r"[A-Za-z_]\w*", g.label) or g.label in ("cx", "qreg"):
                raise ValueError(f"label {g.label!r} is not serialisable")
            if g.params:
                args = ",".join(repr(p) for p in g.params)
                lines.append(f"{g.label}({args}) q[{g.qubit}];")
            else:
                lines.append(f"{g.label} q[{g.qubit}];")
    return "\n".join(lines) + "\n"


_SQRT2 = 1.0 / math.sqrt(2.0)
_KNOWN_FIXED: Dict[str, np.ndarray] = {
    "h": np.array([[_SQRT2, _SQRT2], [_SQRT2, -_SQRT2]], dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "s": np.array([[1, 0], [0, 1j]], dtype=complex),
    "t": np.array([[1, 0], [0, cmath.exp(1j * math.pi / 4)]], dtype=complex),
}


def _rz(theta: float) -> np.ndarray:
    return np.array(
        [[cmath.exp(-0.5j * theta), 0], [0, cmath.exp(0.5j * theta)]], dtype=complex
    )


def _rx(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _u3(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [
            [c, -cmath.exp(1j * lam) * s],
            [cmath.exp(1j * phi) * s, cmath.exp(1j * (phi + lam)) * c],
        ],
        dtype=complex,
    )


def _known_matrix(g: SingleQubit) -> Optional[np.ndarray]:
    if g.label in _KNOWN_FIXED and not g.params:
        return _KNOWN_FIXED[g.label]
    if g.label == "rz" and len(g.params) == 1:
        return _rz(g.params[0])
    if g.label == "rx" and len(g.params) == 1:
        return _rx(g.params[0])
    if g.label == "u" and len(g.params) == 3:
        return _u3(*g.params)
    return None


def _apply_single(u: np.ndarray, m: np.ndarray, q: int, n: int) -> np.ndarray:
    t = u.reshape((2,) * n + (u.shape[1],))
    axis = n - 1 - q
    t = np.tensordot(m, t, axes=([1], [axis]))
    t = np.moveaxis(t, 0, axis)
    return t.reshape(u.shape)

_CNOT_TENSOR = np.zeros((2, 2, 2, 2), dtype=complex)
for _c in (0, 1):
    for _t in (0, 1):
        _CNOT_TENSOR[_c, _t ^ _c, _c, _t] = 1.0


def _apply_cnot(u: np.ndarray, cq: int, tq: int, n: int) -> np.ndarray:
    t = u.reshape((2,) * n + (u.shape[1],))
    ax_c, ax_t = n - 1 - cq, n - 1 - tq
    t = np.tensordot(_CNOT_TENSOR, t, axes=([2, 3], [ax_c, ax_t]))
    t = np.moveaxis(t, [0, 1], [ax_c, ax_t])
    return t.reshape(u.shape)


def simulate_unitary(
    c: Circuit, bindings: Optional[Mapping[str, np.ndarray]] = None
) -> np.ndarray:
    """Full unitary of the circuit as a 2^n x 2^n complex matrix.

    Opaque labels must appear in `bindings` as 2x2 unitaries; known labels
    need no binding but an explicit binding takes precedence.  Capped at
    MAX_SIM_QUBITS qubits.
    """
    n = c.n_qubits
    if n > MAX_SIM_QUBITS:
        raise ValueError(f"simulation capped at {MAX_SIM_QUBITS} qubits, got {n}")
    bindings = dict(bindings or {})
    for label, m in bindings.items():
        m = np.asarray(m, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"binding for {label!r} is not 2x2")
        if not np.allclose(m @ m.conj().T, np.eye(2), atol=1e-8):
            raise ValueError(f"binding for {label!r} is not unitary")
        bindings[label] = m

    u = np.eye(2 ** n, dtype=complex)
    for g in c.gates:
        if isinstance(g, CNOT):
            u = _apply_cnot(u, g.control, g.target, n)
        else:
            m = bindings.get(g.label)
            if m is None:
                m = _known_matrix(g)
            if m is None:
                raise ValueError(f"no binding for opaque gate label {g.label!r}")
            u = _apply_single(u, m, g.qubit, n)
    return u


def trace_overlap(a: np.ndarray, b: np.ndarray) -> float:
    """Normalised |tr(a^dagger b)| / dim; 1.0 iff equal up to global phase."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError("trace overlap needs two square matrices of equal shape")
    return float(abs(np.trace(a.conj().T @ b)) / a.shape[0])


def opaque_labels(c: Circuit) -> Set[str]:
    """Labels of single-qubit gates the simulator has no built-in matrix for."""
    out: Set[str] = set()
    for g in c.gates:
        if isinstance(g, SingleQubit) and _known_matrix(g) is None:
            out.add(g.label)
    return out


def deterministic_bindings(labels: Iterable[str]) -> Dict[str, np.ndarray]:
    """A fixed Haar-random 2x2 unitary per label, keyed by the label text.

    The same label always maps to the same matrix, in any process, so two
    circuits sharing opaque labels can be compared for equivalence.
    """
    out: Dict[str, np.ndarray] = {}
    for label in sorted(set(labels)):
        digest = hashlib.sha1(label.encode("utf-8")).digest()
        rng = np.random.default_rng(int.from_bytes(digest[:8], "big"))
        z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        q, r = np.linalg.qr(z)
        phases = np.diag(r) / np.abs(np.diag(r))
        out[label] = q * phases
    return out

