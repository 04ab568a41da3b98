"""Dense linear algebra over F2 with bit-packed rows.

Rows are stored as Python ints; bit j of row i is the matrix entry (i, j).
XOR on ints gives constant-factor-fast row operations, which the resynthesis
passes lean on for 1000+ CNOT inputs.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence

__all__ = ["BitMatrix", "row_add", "solve_xor_subset", "is_invertible"]


class BitMatrix:
    """Matrix over F2 with immutable dimensions and mutable entries."""

    __slots__ = ("n_rows", "n_cols", "_rows")

    def __init__(self, n_rows: int, n_cols: int, rows: Optional[Sequence[int]] = None):
        if n_rows < 0 or n_cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        object.__setattr__(self, "n_rows", n_rows)
        object.__setattr__(self, "n_cols", n_cols)
        if rows is None:
            object.__setattr__(self, "_rows", [0] * n_rows)
        else:
            if len(rows) != n_rows:
                raise ValueError(f"expected {n_rows} rows, got {len(rows)}")
            mask = (1 << n_cols) - 1
            for i, r in enumerate(rows):
                if r & ~mask:
                    raise ValueError(f"row {i} has bits outside {n_cols} columns")
            object.__setattr__(self, "_rows", list(rows))

    def __setattr__(self, name, value):
        # dimensions are fixed after construction
        raise AttributeError("BitMatrix attributes are read-only; mutate via row ops")

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def from_rows(cls, entries: Iterable[Iterable[int]]) -> "BitMatrix":
        """Build from nested 0/1 entries, row-major."""
        rows: List[int] = []
        width = None
        for entry in entries:
            entry = list(entry)
            if width is None:
                width = len(entry)
            elif len(entry) != width:
                raise ValueError("rows have inconsistent lengths")
            bits = 0
            for j, v in enumerate(entry):
                if v not in (0, 1):
                    raise ValueError(f"entry {v!r} is not 0 or 1")
                bits |= v << j
            rows.append(bits)
        return cls(len(rows), width or 0, rows)

    def get(self, i: int, j: int) -> int:
        self._check_row(i)
        if not 0 <= j < self.n_cols:
            raise IndexError(f"column {j} out of range")
        return (self._rows[i] >> j) & 1

    def row(self, i: int) -> int:
        """Row i as a bitmask (bit j = entry (i, j))."""
        self._check_row(i)
        return self._rows[i]

    def set_row(self, i: int, bits: int) -> None:
        self._check_row(i)
        if bits & ~((1 << self.n_cols) - 1):
            raise ValueError("row value has bits outside the column range")
        self._rows[i] = bits

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.n_rows, self.n_cols, self._rows)

    def to_lists(self) -> List[List[int]]:
        return [[(r >> j) & 1 for j in range(self.n_cols)] for r in self._rows]

    def _check_row(self, i: int) -> None:
        if not 0 <= i < self.n_rows:
            raise IndexError(f"row {i} out of range")

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (
            self.n_rows == other.n_rows
            and self.n_cols == other.n_cols
            and self._rows == other._rows
        )

    def __repr__(self) -> str:
        return f"BitMatrix({self.n_rows}x{self.n_cols}, {self.to_lists()!r})"


def row_add(m: BitMatrix, src: int, dst: int) -> None:
    """In place, set row dst to the XOR of rows src and dst.

    Mirrors the parity action of CNOT(src, dst); self-inverse.
    """
    if src == dst:
        raise ValueError("source and destination rows must differ")
    m._check_row(src)
    m._check_row(dst)
    m._rows[dst] ^= m._rows[src]


def solve_xor_subset(rows: Sequence[int], target: int) -> Optional[List[int]]:
    """Find indices of rows whose XOR equals target, or None if out of span.

    Rows and the target are bitmasks.  Gauss-Jordan with lowest-index pivot
    preference: rows are folded into the basis in input order, and columns
    are consumed lowest first, so the answer is deterministic.
    """
    # basis: pivot column -> (reduced row, combination mask over input indices)
    basis: dict = {}
    for i, r in enumerate(rows):
        v, c = r, 1 << i
        while v:
            low = (v & -v).bit_length() - 1
            if low in basis:
                bv, bc = basis[low]
                v ^= bv
                c ^= bc
            else:
                basis[low] = (v, c)
                break
    v, c = target, 0
    while v:
        low = (v & -v).bit_length() - 1
        if low not in basis:
            return None
        bv, bc = basis[low]
        v ^= bv
        c ^= bc
    return [i for i in range(len(rows)) if (c >> i) & 1]


def is_invertible(m: BitMatrix) -> bool:
    """True iff the square matrix reduces to identity over F2."""
    if m.n_rows != m.n_cols:
        raise ValueError("invertibility is defined for square matrices only")
    basis: dict = {}
    rank = 0
    for r in m._rows:
        v = r
        while v:
            low = (v & -v).bit_length() - 1
            if low in basis:
                v ^= basis[low]
            else:
                basis[low] = v
                rank += 1
                break
    return rank == m.n_rows
