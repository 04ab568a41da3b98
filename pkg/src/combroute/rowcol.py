"""Topology-constrained CNOT resynthesis by iterated row/column elimination.

The core loop picks a non-cutting vertex, reduces its parity-matrix column to
a unit vector and then its row, and removes the vertex from the connectivity
graph.  Row operations are restricted to graph edges by sweeping Steiner
trees rooted at the pivot:

* column elimination runs two bottom-up sweeps over the tree: a fill sweep
  that adds any 1-carrying child into a 0-carrying parent, after which every
  tree vertex carries a 1, and a clear sweep that adds each parent into its
  child, leaving a single 1 at the root;
* row elimination first solves for the row subset S whose XOR corrects the
  pivot row, then sweeps the tree spanning S and the pivot: a top-down pass
  pre-loads every non-S child into its parent (so non-S rows cancel out of
  the final sum), and a bottom-up pass adds every child into its parent.

The primitives mutate the matrix in the order the operations are emitted.
The emitted operation list reduces the matrix, so the synthesised circuit is
the reversed list; replaying it from identity reproduces the input matrix.

Both primitives take a `row_of` map from participating matrix rows to graph
vertices, so a caller may run them on rectangular frontier sub-matrices where
row indices and vertices disagree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Tuple

from .circuit import CNOT, Circuit
from .gf2 import BitMatrix, is_invertible, row_add, solve_xor_subset
from .topology import Topology, non_cutting_vertices, steiner_tree

__all__ = ["RowOp", "eliminate_column", "eliminate_row", "rowcol"]


@dataclass(frozen=True)
class RowOp:
    """Row operation: row dst ^= row src.  Emitted as CNOT(src, dst)."""

    src: int
    dst: int

    def __post_init__(self):
        if self.src == self.dst:
            raise ValueError("row op source and destination must differ")


def _rooted_preorder(
    edges: Iterable[Tuple[int, int]], root: int
) -> List[Tuple[int, int]]:
    """Tree edges as (parent, child), in DFS preorder with sorted neighbours."""
    adj: Dict[int, List[int]] = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    for v in adj:
        adj[v].sort()
    out: List[Tuple[int, int]] = []
    seen = {root}
    stack = [(root, iter(adj.get(root, ())))]
    while stack:
        v, it = stack[-1]
        for u in it:
            if u not in seen:
                seen.add(u)
                out.append((v, u))
                stack.append((u, iter(adj[u])))
                break
        else:
            stack.pop()
    return out


def _apply(p: BitMatrix, ops: List[RowOp], src_row: int, dst_row: int) -> None:
    row_add(p, src_row, dst_row)
    ops.append(RowOp(src_row, dst_row))


def eliminate_column(
    p: BitMatrix,
    g: Topology,
    active: Iterable[int],
    pivot_row: int,
    pivot_col: int,
    row_of: Mapping[int, int],
) -> List[RowOp]:
    """Reduce column pivot_col to a unit vector at pivot_row.

    `row_of` maps each participating row to its graph vertex; operations are
    only emitted between rows whose vertices share an edge of `g`.
    """
    active = set(active)
    row_for = {v: r for r, v in row_of.items()}
    pivot_vertex = row_of[pivot_row]
    bit = 1 << pivot_col
    support = [v for r, v in row_of.items() if p.row(r) & bit]
    if not support:
        raise ValueError("pivot column has no support among participating rows")
    if support == [pivot_vertex]:
        return []
    terminals = [pivot_vertex] + sorted(v for v in support if v != pivot_vertex)
    tree = steiner_tree(g, active, terminals)
    preorder = _rooted_preorder(tree, pivot_vertex)
    ops: List[RowOp] = []
    # fill: every vertex of the tree ends up carrying a 1
    for parent, child in reversed(preorder):
        pr, cr = row_for[parent], row_for[child]
        if (p.row(cr) & bit) and not (p.row(pr) & bit):
            _apply(p, ops, cr, pr)
    # clear: children absorb their parents bottom-up, leaving the root
    for parent, child in reversed(preorder):
        _apply(p, ops, row_for[parent], row_for[child])
    return ops


def eliminate_row(
    p: BitMatrix,
    g: Topology,
    active: Iterable[int],
    pivot_row: int,
    pivot_col: int,
    row_of: Mapping[int, int],
) -> List[RowOp]:
    """Reduce row pivot_row to the unit vector at pivot_col.

    Requires column pivot_col to already be a unit vector at pivot_row; the
    column stays unit because every emitted operation writes onto a tree
    parent and the pivot is the root.
    """
    active = set(active)
    row_for = {v: r for r, v in row_of.items()}
    pivot_vertex = row_of[pivot_row]
    bit = 1 << pivot_col
    for r in row_of:
        has = bool(p.row(r) & bit)
        if has != (r == pivot_row):
            raise ValueError("pivot column is not a unit vector at the pivot row")
    target = p.row(pivot_row) ^ bit
    if target == 0:
        return []
    others = sorted(v for v in row_of.values() if v != pivot_vertex)
    subset = solve_xor_subset([p.row(row_for[v]) for v in others], target)
    if subset is None:
        raise ValueError("row elimination system has no solution; matrix is singular")
    chosen = [others[i] for i in subset]
    terminals = [pivot_vertex] + chosen
    tree = steiner_tree(g, active, terminals)
    preorder = _rooted_preorder(tree, pivot_vertex)
    in_subset = set(chosen)
    ops: List[RowOp] = []
    # pre-load non-chosen rows top-down so their content cancels mod 2
    for parent, child in preorder:
        if child not in in_subset:
            _apply(p, ops, row_for[child], row_for[parent])
    # accumulate bottom-up into the pivot
    for parent, child in reversed(preorder):
        _apply(p, ops, row_for[child], row_for[parent])
    if p.row(pivot_row) != bit:
        raise AssertionError("row elimination sweep failed to reach the unit row")
    return ops


def rowcol(p: BitMatrix, g: Topology) -> Circuit:
    """Resynthesise an invertible parity matrix into a CNOT circuit on `g`.

    Replaying the returned circuit from identity reproduces `p`, and every
    CNOT lies on an edge of the topology.
    """
    if p.n_rows != p.n_cols:
        raise ValueError("parity matrix must be square")
    if p.n_rows != g.n_vertices:
        raise ValueError("matrix size must match the number of vertices")
    if not g.is_connected():
        raise ValueError("topology must be connected")
    if not is_invertible(p):
        raise ValueError("parity matrix is singular")
    m = p.copy()
    active = set(range(g.n_vertices))
    ops: List[RowOp] = []
    while active:
        v = min(non_cutting_vertices(g, active))
        row_of = {u: u for u in active}
        ops.extend(eliminate_column(m, g, active, v, v, row_of))
        ops.extend(eliminate_row(m, g, active, v, v, row_of))
        active.remove(v)
    if m != BitMatrix.identity(p.n_rows):
        raise AssertionError("elimination did not reach the identity matrix")
    return Circuit(p.n_rows, tuple(CNOT(op.src, op.dst) for op in reversed(ops)))
