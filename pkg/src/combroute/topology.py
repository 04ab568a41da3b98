"""Connectivity graphs over logical qubits.

Provides articulation-point detection (as its complement, the non-cutting
vertices), Steiner-tree construction restricted to an active vertex subset,
and the five builtin device graphs shipped as JSON data files.

Steiner trees are exact for up to 5 terminals (Dreyfus-Wagner dynamic
programming over terminal subsets) and fall back to the Takahashi-Matsuyama
nearest-terminal heuristic beyond that.  The first terminal in the given
order seeds the construction, so callers that root the tree at a pivot pass
the pivot first; results are deterministic for a fixed input.
"""

from __future__ import annotations

import json
import os
from collections import deque
from importlib import resources
from typing import Dict, Iterable, List, Sequence, Set, Tuple

__all__ = [
    "Topology",
    "BUILTIN_TOPOLOGY_NAMES",
    "non_cutting_vertices",
    "steiner_tree",
    "builtin_topology",
    "load_topology",
    "resolve_topology",
]

BUILTIN_TOPOLOGY_NAMES = (
    "9q-square",
    "16q-square",
    "rigetti-16q-aspen",
    "ibm-qx5",
    "ibm-q20-tokyo",
)


class Topology:
    """Undirected simple graph; no self-loops, no duplicate edges."""

    __slots__ = ("name", "n_vertices", "edges", "_adj", "_edge_set")

    def __init__(self, name: str, n_vertices: int, edges: Iterable[Tuple[int, int]]):
        if n_vertices < 0:
            raise ValueError("vertex count must be non-negative")
        norm: List[Tuple[int, int]] = []
        seen: Set[Tuple[int, int]] = set()
        adj: Dict[int, Set[int]] = {v: set() for v in range(n_vertices)}
        for a, b in edges:
            if not (0 <= a < n_vertices and 0 <= b < n_vertices):
                raise ValueError(f"edge ({a},{b}) out of range for {n_vertices} vertices")
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            key = (min(a, b), max(a, b))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            norm.append(key)
            adj[a].add(b)
            adj[b].add(a)
        self.name = name
        self.n_vertices = n_vertices
        self.edges = tuple(sorted(norm))
        self._adj = {v: tuple(sorted(adj[v])) for v in range(n_vertices)}
        self._edge_set = frozenset(self.edges)

    @classmethod
    def complete(cls, n: int, name: str = "complete") -> "Topology":
        return cls(name, n, [(a, b) for a in range(n) for b in range(a + 1, n)])

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self._adj[v]

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self._edge_set

    def is_connected(self, active: Iterable[int] | None = None) -> bool:
        verts = set(range(self.n_vertices)) if active is None else set(active)
        if not verts:
            return False
        start = next(iter(verts))
        seen = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for u in self._adj[v]:
                if u in verts and u not in seen:
                    seen.add(u)
                    queue.append(u)
        return seen == verts

    def __repr__(self) -> str:
        return f"Topology({self.name!r}, {self.n_vertices} vertices, {len(self.edges)} edges)"


def non_cutting_vertices(g: Topology, active: Iterable[int]) -> Set[int]:
    """Vertices of `active` whose removal keeps the induced subgraph connected.

    A single remaining vertex counts as non-cutting (removal leaves nothing).
    Raises if the induced subgraph is empty or disconnected.
    """
    verts = set(active)
    if not verts:
        raise ValueError("active set is empty")
    if not g.is_connected(verts):
        raise ValueError("active set induces a disconnected subgraph")
    if len(verts) == 1:
        return set(verts)

    # Hopcroft-Tarjan articulation points on the induced subgraph
    index: Dict[int, int] = {}
    low: Dict[int, int] = {}
    articulation: Set[int] = set()
    counter = 0

    root = min(verts)
    # iterative DFS so deep path graphs cannot hit the recursion limit
    stack: List[Tuple[int, int | None, Iterable[int]]] = []
    children_of_root = 0
    stack.append((root, None, iter(g.neighbors(root))))
    index[root] = low[root] = counter
    counter += 1
    while stack:
        v, parent, it = stack[-1]
        advanced = False
        for u in it:
            if u not in verts:
                continue
            if u not in index:
                index[u] = low[u] = counter
                counter += 1
                if v == root:
                    children_of_root += 1
                stack.append((u, v, iter(g.neighbors(u))))
                advanced = True
                break
            elif u != parent:
                low[v] = min(low[v], index[u])
        if not advanced:
            stack.pop()
            if stack:
                pv = stack[-1][0]
                low[pv] = min(low[pv], low[v])
                if pv != root and low[v] >= index[pv]:
                    articulation.add(pv)
    if children_of_root > 1:
        articulation.add(root)
    return verts - articulation


def _induced_adj(g: Topology, verts: Set[int]) -> Dict[int, List[int]]:
    return {v: [u for u in g.neighbors(v) if u in verts] for v in verts}


def _bfs_all(adj: Dict[int, List[int]], source: int) -> Dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for u in adj[v]:
            if u not in dist:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def _walk_path(adj: Dict[int, List[int]], dist_to: Dict[int, int], start: int) -> List[int]:
    # shortest path start -> the source of dist_to, stepping to the lowest-index
    # neighbour that decreases the distance
    path = [start]
    cur = start
    while dist_to[cur] != 0:
        cur = min(u for u in adj[cur] if u in dist_to and dist_to[u] == dist_to[cur] - 1)
        path.append(cur)
    return path


def _path_edges(path: Sequence[int]) -> List[Tuple[int, int]]:
    return [(min(a, b), max(a, b)) for a, b in zip(path, path[1:])]


def _steiner_exact(
    adj: Dict[int, List[int]], terminals: Sequence[int]
) -> List[Tuple[int, int]]:
    """Dreyfus-Wagner DP, rooted at terminals[0]; split preferred on ties."""
    t0 = terminals[0]
    others = list(terminals[1:])
    k = len(others)
    dists = {t: _bfs_all(adj, t) for t in others}

    verts = sorted(adj)
    INF = float("inf")
    full = (1 << k) - 1
    dp: List[Dict[int, float]] = [dict() for _ in range(full + 1)]
    choice: List[Dict[int, Tuple]] = [dict() for _ in range(full + 1)]
    for i, t in enumerate(others):
        for v in verts:
            d = dists[t].get(v, INF)
            dp[1 << i][v] = d
            choice[1 << i][v] = ("leaf", i)

    for mask in range(1, full + 1):
        if mask & (mask - 1) == 0:
            continue
        for v in verts:
            best, how = INF, None
            sub = (mask - 1) & mask
            splits = []
            s = 1
            while s < mask:
                if s & mask == s and (mask ^ s) > s:
                    splits.append(s)
                s += 1
            for s in splits:
                cost = dp[s].get(v, INF) + dp[mask ^ s].get(v, INF)
                if cost < best:
                    best, how = cost, ("split", s)
            dp[mask][v] = best
            choice[mask][v] = how
        # relax walks to a fixpoint (unweighted Bellman-Ford; graphs are tiny)
        changed = True
        while changed:
            changed = False
            for v in verts:
                for u in adj[v]:
                    cand = dp[mask][u] + 1
                    if cand < dp[mask][v]:
                        dp[mask][v] = cand
                        choice[mask][v] = ("walk", u)
                        changed = True

    edges: Set[Tuple[int, int]] = set()

    def reconstruct(mask: int, v: int):
        how = choice[mask][v]
        if how is None:
            raise ValueError("terminals are not mutually reachable in the active set")
        kind = how[0]
        if kind == "leaf":
            t = others[how[1]]
            if dists[t].get(v, INF) == INF:
                raise ValueError("terminals are not mutually reachable in the active set")
            edges.update(_path_edges(_walk_path(adj, dists[t], v)))
        elif kind == "split":
            reconstruct(how[1], v)
            reconstruct(mask ^ how[1], v)
        else:
            edges.add((min(v, how[1]), max(v, how[1])))
            reconstruct(mask, how[1])

    reconstruct(full, t0)
    return _prune_to_tree(edges, set(terminals), t0)


def _steiner_heuristic(
    adj: Dict[int, List[int]], terminals: Sequence[int]
) -> List[Tuple[int, int]]:
    """Takahashi-Matsuyama: repeatedly attach the nearest remaining terminal."""
    tree_order = [terminals[0]]
    in_tree = {terminals[0]}
    edges: Set[Tuple[int, int]] = set()
    remaining = [t for t in terminals[1:] if t not in in_tree]
    while remaining:
        dist: Dict[int, int] = {v: 0 for v in tree_order}
        pred: Dict[int, int] = {}
        queue = deque(tree_order)
        while queue:
            v = queue.popleft()
            for u in adj[v]:
                if u not in dist:
                    dist[u] = dist[v] + 1
                    pred[u] = v
                    queue.append(u)
        reachable = [t for t in remaining if t in dist]
        if not reachable:
            raise ValueError("terminals are not mutually reachable in the active set")
        best = min(dist[t] for t in reachable)
        target = min(t for t in reachable if dist[t] == best)
        path = [target]
        while path[-1] not in in_tree:
            path.append(pred[path[-1]])
        for v in path:
            if v not in in_tree:
                in_tree.add(v)
                tree_order.append(v)
        edges.update(_path_edges(path))
        remaining.remove(target)
    return _prune_to_tree(edges, set(terminals), terminals[0])


def _prune_to_tree(
    edges: Set[Tuple[int, int]], terminals: Set[int], root: int
) -> List[Tuple[int, int]]:
    """Spanning tree of the edge set, with non-terminal dangling branches removed."""
    adj: Dict[int, Set[int]] = {}
    for a, b in edges:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    # BFS spanning tree from the root to drop any reconstruction cycles
    tree: Dict[int, Set[int]] = {root: set()}
    queue = deque([root])
    seen = {root}
    while queue:
        v = queue.popleft()
        for u in sorted(adj.get(v, ())):
            if u not in seen:
                seen.add(u)
                tree[v].add(u)
                tree.setdefault(u, set()).add(v)
                queue.append(u)
    changed = True
    while changed:
        changed = False
        for v in list(tree):
            if v not in terminals and len(tree[v]) == 1:
                (u,) = tree[v]
                tree[u].discard(v)
                del tree[v]
                changed = True
    missing = terminals - set(tree)
    if missing:
        raise RuntimeError(f"steiner construction failed to span terminals {sorted(missing)}")
    out: Set[Tuple[int, int]] = set()
    for v, nbrs in tree.items():
        for u in nbrs:
            out.add((min(v, u), max(v, u)))
    return sorted(out)


def steiner_tree(
    g: Topology, active: Iterable[int], terminals: Sequence[int]
) -> List[Tuple[int, int]]:
    """Edges of a tree inside the induced active subgraph spanning `terminals`.

    The tree may pass through non-terminal (Steiner) vertices of the active
    set.  Exact minimum for up to 5 terminals, Takahashi-Matsuyama heuristic
    beyond.  terminals[0] seeds the construction and acts as the root.
    """
    verts = set(active)
    term = list(dict.fromkeys(terminals))
    for t in term:
        if t not in verts:
            raise ValueError(f"terminal {t} outside the active set")
    if len(term) <= 1:
        return []
    adj = _induced_adj(g, verts)
    if len(term) <= 5:
        return _steiner_exact(adj, term)
    return _steiner_heuristic(adj, term)


def _topology_from_payload(payload: dict, origin: str) -> Topology:
    for key in ("name", "num_qubits", "edges"):
        if key not in payload:
            raise ValueError(f"{origin}: missing key {key!r}")
    name = payload["name"]
    n = payload["num_qubits"]
    edges = payload["edges"]
    if not isinstance(name, str) or not isinstance(n, int):
        raise ValueError(f"{origin}: malformed name or num_qubits")
    if not isinstance(edges, list) or not all(
        isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) for x in e)
        for e in edges
    ):
        raise ValueError(f"{origin}: edges must be a list of [a, b] pairs")
    topo = Topology(name, n, [tuple(e) for e in edges])
    if not topo.is_connected():
        raise ValueError(f"{origin}: topology {name!r} is disconnected")
    return topo


def load_topology(text: str) -> Topology:
    """Parse the JSON topology format; rejects duplicates and disconnection."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed topology JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ValueError("topology JSON must be an object")
    return _topology_from_payload(payload, "topology JSON")


def builtin_topology(name: str) -> Topology:
    """One of the five shipped device graphs, by name."""
    if name not in BUILTIN_TOPOLOGY_NAMES:
        raise ValueError(
            f"unknown topology {name!r}; known: {', '.join(BUILTIN_TOPOLOGY_NAMES)}"
        )
    text = resources.files("combroute").joinpath("data").joinpath(f"{name}.json").read_text()
    return load_topology(text)


def resolve_topology(spec: str) -> Topology:
    """A builtin name, or else a path to a topology JSON file."""
    if spec in BUILTIN_TOPOLOGY_NAMES:
        return builtin_topology(spec)
    if os.path.exists(spec):
        with open(spec, "r", encoding="utf-8") as fh:
            return load_topology(fh.read())
    raise ValueError(
        f"unknown topology {spec!r}: not a builtin name and not an existing file"
    )
