"""Shared fixtures: the worked four-qubit example and small topologies."""

from types import SimpleNamespace
from typing import List, Tuple

import numpy as np
import pytest

from combroute.circuit import CNOT, Circuit, SingleQubit
from combroute.topology import Topology


def cuttable_circuit() -> Circuit:
    """Four-qubit circuit mixing thirteen CNOTs with four single-qubit gates."""
    return Circuit(
        4,
        [
            CNOT(1, 2),
            CNOT(0, 2),
            CNOT(1, 2),
            CNOT(0, 3),
            CNOT(1, 3),
            CNOT(1, 0),
            SingleQubit("v", (), 1),
            CNOT(0, 1),
            SingleQubit("u", (), 2),
            CNOT(2, 1),
            CNOT(3, 2),
            SingleQubit("w", (), 2),
            CNOT(1, 2),
            CNOT(3, 2),
            CNOT(0, 2),
            CNOT(2, 0),
            SingleQubit("h", (), 1),
        ],
    )


@pytest.fixture
def cut_example():
    """The circuit above plus its expected decomposition, frozen by hand.

    Cutting the four single-qubit gates opens holes (1,4), (2,6), (6,7) and
    (4,5): wire 1 continues as 4 then 5, wire 2 continues as 6 then 7.
    """
    comb_gates = (
        CNOT(1, 2),
        CNOT(0, 2),
        CNOT(1, 2),
        CNOT(0, 3),
        CNOT(1, 3),
        CNOT(1, 0),
        CNOT(0, 4),
        CNOT(6, 4),
        CNOT(3, 6),
        CNOT(4, 7),
        CNOT(3, 7),
        CNOT(0, 7),
        CNOT(7, 0),
    )
    return SimpleNamespace(
        circuit=cuttable_circuit(),
        comb_circuit=Circuit(8, comb_gates),
        holes=frozenset({(1, 4), (2, 6), (6, 7), (4, 5)}),
        plug_labels={(1, 4): "v", (4, 5): "h", (2, 6): "u", (6, 7): "w"},
        frontier_available={0, 3, 5, 7},
        frontier_t={0: 0, 1: 5, 2: 7, 3: 3},
    )


@pytest.fixture
def path5() -> Topology:
    return Topology("path5", 5, [(0, 1), (1, 2), (2, 3), (3, 4)])


@pytest.fixture
def grid3() -> Topology:
    return grid_topology(3, 3)


def grid_topology(rows: int, cols: int) -> Topology:
    edges: List[Tuple[int, int]] = []
    for r in range(rows):
        for c in range(cols):
            v = cols * r + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Topology(f"grid{rows}x{cols}", rows * cols, edges)


def random_connected_topology(n: int, rng: np.random.Generator, extra: float = 0.3) -> Topology:
    """Random spanning tree over a shuffled vertex order plus extra edges."""
    order = list(rng.permutation(n))
    edges = set()
    for i in range(1, n):
        a = order[int(rng.integers(0, i))]
        edges.add(tuple(sorted((a, order[i]))))
    for a in range(n):
        for b in range(a + 1, n):
            if (a, b) not in edges and rng.random() < extra:
                edges.add((a, b))
    return Topology(f"rand{n}", n, sorted(edges))
