"""Grid value type and the toroidal permutation operators built on it.

All indexing is 0-based. Shift conventions: a positive row shift moves rows
downward (row r of the output is row (r - s) mod n of the input); a positive
column shift moves columns to the left (column c of the output is column
(c + s) mod n of the input). Both accept any integer shift.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

import numpy as np

from .errors import CapExceededError, OrderMismatchError, ShapeError

# Side-length cap: row sums and construction values stay comfortably inside
# int64 for n up to 2**16.
MAX_N = 1 << 16


class Grid:
    """Immutable n-by-n grid of non-negative 64-bit integers."""

    __slots__ = ("_values",)

    def __init__(self, values):
        arr = np.asarray(values)
        if arr.dtype.kind == "f":
            if not np.all(arr == np.trunc(arr)):
                raise ValueError("grid entries must be integers")
            arr = arr.astype(np.int64)
        elif arr.dtype.kind in "iu":
            arr = arr.astype(np.int64)
        elif arr.dtype.kind == "O":
            # Python ints; overflow of int64 surfaces here.
            try:
                arr = arr.astype(np.int64)
            except OverflowError as exc:
                raise ValueError("grid entries must fit in 64-bit integers") from exc
        else:
            raise ValueError(f"grid entries must be integers, got dtype {arr.dtype}")
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ShapeError(f"expected a square 2-D array, got shape {arr.shape}")
        n = arr.shape[0]
        if n < 1:
            raise ShapeError("grid order must be at least 1")
        if n > MAX_N:
            raise CapExceededError(f"grid order {n} exceeds the cap {MAX_N}")
        if arr.min() < 0:
            raise ValueError("grid entries must be non-negative")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        self._values = arr

    @property
    def n(self) -> int:
        return self._values.shape[0]

    @property
    def values(self) -> np.ndarray:
        """Read-only backing array."""
        return self._values

    def __getitem__(self, rc) -> int:
        return int(self._values[rc])

    def row(self, i: int) -> list[int]:
        return self._values[i].tolist()

    def tolist(self) -> list[list[int]]:
        return self._values.tolist()

    def transpose(self) -> "Grid":
        return Grid(self._values.T)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Grid):
            return NotImplemented
        return self._values.shape == other._values.shape and bool(
            np.array_equal(self._values, other._values)
        )

    def __hash__(self) -> int:
        return hash((self.n, self._values.tobytes()))

    def __repr__(self) -> str:
        if self.n <= 8:
            return f"Grid({self.tolist()})"
        return f"Grid(n={self.n})"


@dataclass(frozen=True)
class SquareOrder:
    """Order n with its optional sudoku factorization n = k*k.

    Carries the two closed-form line-sum indices: ``index_m`` for squares
    over symbols 0..n-1 and ``natural_index`` for squares over 0..n*n-1.
    """

    n: int
    k: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ShapeError("order must be at least 1")
        if self.k is not None and self.k * self.k != self.n:
            raise OrderMismatchError(f"k={self.k} is not a square root of n={self.n}")

    @staticmethod
    def of(n: int) -> "SquareOrder":
        """Build for n, detecting the sudoku factorization when n is square."""
        r = isqrt(n)
        return SquareOrder(n, r if r * r == n else None)

    @property
    def index_m(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def natural_index(self) -> int:
        return self.n * (self.n * self.n - 1) // 2


@dataclass(frozen=True)
class BlockAddress:
    """Address of one order-k subsquare; broken allows wraparound offsets."""

    block_row: int
    block_col: int
    broken: bool = False


def row_shift(g: Grid, s: int) -> Grid:
    """Shift rows down by s (mod n): output row r is input row (r - s) mod n."""
    return Grid(np.roll(g.values, s % g.n, axis=0))


def col_shift(g: Grid, s: int) -> Grid:
    """Shift columns left by s (mod n): output column c is input column (c + s) mod n."""
    return Grid(np.roll(g.values, -(s % g.n), axis=1))


def reflect_rows(g: Grid) -> Grid:
    """Mirror about the horizontal centerline; involution."""
    return Grid(g.values[::-1, :])


def reflect_cols(g: Grid) -> Grid:
    """Mirror about the vertical centerline; involution."""
    return Grid(g.values[:, ::-1])


def block_at(g: Grid, k: int, addr: BlockAddress, row_off: int = 0, col_off: int = 0) -> Grid:
    """Extract the k-by-k subsquare at addr, offset by (row_off, col_off).

    Offsets wrap around toroidally and are only allowed when addr.broken is
    set; aligned blocks take zero offsets.
    """
    n = g.n
    if k * k != n:
        raise OrderMismatchError(f"k={k} does not tile an order-{n} grid")
    if not (0 <= addr.block_row < k and 0 <= addr.block_col < k):
        raise OrderMismatchError(f"block address {addr} out of range for k={k}")
    if not addr.broken and (row_off % n or col_off % n):
        raise ValueError("offsets require a broken block address")
    top = (k * addr.block_row + row_off) % n
    left = (k * addr.block_col + col_off) % n
    rows = (top + np.arange(k)) % n
    cols = (left + np.arange(k)) % n
    return Grid(g.values[np.ix_(rows, cols)])


def permutation_matrix(kind: str, n: int, k: int | None = None) -> Grid:
    """Build a named 0/1 permutation matrix of order n.

    kind "shifter": ones at (0, n-1) and on the subdiagonal, so that
    multiplying on the left shifts rows down and on the right shifts columns
    left. kind "reflection": ones on the cross diagonal. kind
    "block_shifter": block-diagonal with k copies of the order-k shifter
    (requires k*k = n).
    """
    if kind == "shifter":
        m = np.zeros((n, n), dtype=np.int64)
        m[np.arange(n), (np.arange(n) - 1) % n] = 1
        return Grid(m)
    if kind == "reflection":
        m = np.zeros((n, n), dtype=np.int64)
        m[np.arange(n), n - 1 - np.arange(n)] = 1
        return Grid(m)
    if kind == "block_shifter":
        if k is None or k * k != n:
            raise OrderMismatchError(f"block_shifter requires k*k = n, got k={k}, n={n}")
        m = np.zeros((n, n), dtype=np.int64)
        for b in range(k):
            idx = b * k + np.arange(k)
            m[idx, b * k + (np.arange(k) - 1) % k] = 1
        return Grid(m)
    raise ValueError(f"unknown permutation matrix kind {kind!r}")
