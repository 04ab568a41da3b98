"""Hardware graphs, articulation points, and Steiner trees.

The articulation and Steiner routines are checked against exhaustive
oracles on every random graph up to 10 vertices.
"""

import itertools
import json

import numpy as np
import pytest

from combroute.topology import (
    BUILTIN_TOPOLOGY_NAMES,
    Topology,
    builtin_topology,
    load_topology,
    non_cutting_vertices,
    resolve_topology,
    steiner_tree,
)
from conftest import grid_topology, random_connected_topology


def test_construction_normalises_edges():
    g = Topology("t", 3, [(2, 0), (1, 2)])
    assert g.edges == ((0, 2), (1, 2))
    assert g.neighbors(2) == (0, 1)
    assert g.has_edge(0, 2) and g.has_edge(2, 0)
    assert not g.has_edge(0, 1)


def test_construction_rejects_bad_edges():
    with pytest.raises(ValueError):
        Topology("t", 2, [(0, 2)])
    with pytest.raises(ValueError):
        Topology("t", 2, [(1, 1)])
    with pytest.raises(ValueError):
        Topology("t", 2, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        Topology("t", -1, [])


def test_complete_graph():
    g = Topology.complete(4)
    assert len(g.edges) == 6
    assert all(g.has_edge(a, b) for a in range(4) for b in range(4) if a != b)


def test_is_connected_subsets(path5):
    assert path5.is_connected()
    assert path5.is_connected({0, 1, 2})
    assert not path5.is_connected({0, 2})
    assert not path5.is_connected(set())
    assert path5.is_connected({3})


def test_non_cutting_path(path5):
    # interior vertices of a path disconnect it
    assert non_cutting_vertices(path5, range(5)) == {0, 4}
    assert non_cutting_vertices(path5, {1, 2}) == {1, 2}
    assert non_cutting_vertices(path5, {3}) == {3}


def test_non_cutting_rejects_bad_active(path5):
    with pytest.raises(ValueError):
        non_cutting_vertices(path5, set())
    with pytest.raises(ValueError):
        non_cutting_vertices(path5, {0, 2})


def _non_cutting_brute(g, active):
    out = set()
    for v in active:
        rest = active - {v}
        if not rest or g.is_connected(rest):
            out.add(v)
    return out


def test_non_cutting_matches_brute_force():
    rng = np.random.default_rng(17)
    for _ in range(60):
        n = int(rng.integers(2, 11))
        g = random_connected_topology(n, rng, extra=float(rng.uniform(0.0, 0.5)))
        active = set(range(n))
        while active:
            assert non_cutting_vertices(g, active) == _non_cutting_brute(g, active)
            # peel one non-cutting vertex so every intermediate set stays connected
            active.remove(min(non_cutting_vertices(g, active)))


def _steiner_optimum_brute(g, active, terminals):
    # smallest connected vertex superset of the terminals; cost is its size - 1
    term = set(terminals)
    others = sorted(set(active) - term)
    for k in range(len(active) - len(term) + 1):
        for extra in itertools.combinations(others, k):
            verts = term | set(extra)
            if g.is_connected(verts):
                return len(verts) - 1
    raise AssertionError("terminals not connectable")


def _check_tree(g, active, terminals, edges):
    verts = set()
    for a, b in edges:
        assert g.has_edge(a, b)
        assert a in active and b in active
        verts |= {a, b}
    assert set(terminals) <= verts or len(set(terminals)) <= 1
    assert len(edges) == len(verts) - 1 if verts else edges == []
    if verts:
        sub = Topology("check", g.n_vertices, edges)
        assert sub.is_connected(verts)


def test_steiner_tree_exhaustive_optimality():
    rng = np.random.default_rng(29)
    for _ in range(40):
        n = int(rng.integers(3, 11))
        g = random_connected_topology(n, rng, extra=float(rng.uniform(0.0, 0.4)))
        active = set(range(n))
        k = int(rng.integers(2, min(5, n + 1)))
        terminals = list(rng.choice(n, size=k, replace=False))
        terminals = [int(t) for t in terminals]
        edges = steiner_tree(g, active, terminals)
        _check_tree(g, active, terminals, edges)
        assert len(edges) == _steiner_optimum_brute(g, active, terminals)


def test_steiner_tree_on_restricted_active_set(grid3):
    # active set excludes the centre, forcing the tree around the boundary
    active = set(range(9)) - {4}
    edges = steiner_tree(grid3, active, [1, 7])
    _check_tree(grid3, active, [1, 7], edges)
    assert len(edges) == 4
    assert _steiner_optimum_brute(grid3, active, [1, 7]) == 4


def test_steiner_tree_grid_cross(grid3):
    # edge midpoints of the 3x3 grid meet optimally through the centre
    edges = steiner_tree(grid3, range(9), [1, 3, 5, 7])
    assert len(edges) == 4
    assert set(edges) == {(1, 4), (3, 4), (4, 5), (4, 7)}


def test_steiner_tree_star_on_complete_graph():
    g = Topology.complete(6)
    edges = steiner_tree(g, range(6), [2, 0, 5, 3])
    # pivot 2 connects every other terminal directly
    assert sorted(edges) == [(0, 2), (2, 3), (2, 5)]


def test_steiner_tree_trivial_cases(path5):
    assert steiner_tree(path5, range(5), [2]) == []
    assert steiner_tree(path5, range(5), []) == []
    assert steiner_tree(path5, range(5), [2, 2]) == []
    assert steiner_tree(path5, range(5), [1, 3]) == [(1, 2), (2, 3)]
    with pytest.raises(ValueError):
        steiner_tree(path5, {0, 1}, [0, 3])


def test_steiner_heuristic_many_terminals():
    rng = np.random.default_rng(43)
    for _ in range(20):
        n = int(rng.integers(8, 14))
        g = random_connected_topology(n, rng, extra=0.2)
        k = int(rng.integers(6, min(n, 9)))
        terminals = [int(t) for t in rng.choice(n, size=k, replace=False)]
        edges = steiner_tree(g, range(n), terminals)
        _check_tree(g, range(n), terminals, edges)


def test_builtin_topologies():
    expected = {
        "9q-square": (9, 12),
        "16q-square": (16, 24),
        "rigetti-16q-aspen": (16, 18),
        "ibm-qx5": (16, 22),
        "ibm-q20-tokyo": (20, 43),
    }
    assert set(BUILTIN_TOPOLOGY_NAMES) == set(expected)
    for name, (nv, ne) in expected.items():
        g = builtin_topology(name)
        assert g.name == name
        assert g.n_vertices == nv
        assert len(g.edges) == ne
        assert g.is_connected()


def test_builtin_topology_unknown_name():
    with pytest.raises(ValueError):
        builtin_topology("no-such-device")


def test_load_topology_round_trip():
    payload = {"name": "pair", "num_qubits": 2, "edges": [[0, 1]]}
    g = load_topology(json.dumps(payload))
    assert g.name == "pair"
    assert g.edges == ((0, 1),)


def test_load_topology_errors():
    with pytest.raises(ValueError):
        load_topology("not json")
    with pytest.raises(ValueError):
        load_topology("[1, 2]")
    with pytest.raises(ValueError):
        load_topology(json.dumps({"name": "x", "edges": []}))
    with pytest.raises(ValueError):
        load_topology(json.dumps({"name": "x", "num_qubits": 2, "edges": [[0]]}))
    with pytest.raises(ValueError):
        # two components
        load_topology(json.dumps({"name": "x", "num_qubits": 3, "edges": [[0, 1]]}))


def test_resolve_topology(tmp_path):
    assert resolve_topology("9q-square").n_vertices == 9
    p = tmp_path / "line.json"
    p.write_text(json.dumps({"name": "line", "num_qubits": 3, "edges": [[0, 1], [1, 2]]}))
    assert resolve_topology(str(p)).name == "line"
    with pytest.raises(ValueError):
        resolve_topology("missing-thing")
