"""Constructors for pandiagonal super-sudoku, Knut Vik sudoku, and panmagic squares.

Every formula here is written for 0-based row i and column j of an order-n
grid with n = k*k where applicable. Entries of the Latin-type squares are
0..n-1; the panmagic lift produces entries up to n*n-1.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .errors import (
    CapExceededError,
    EntryRangeError,
    InvalidLambdaError,
    InvalidOrderError,
)
from .grid import MAX_N, Grid

# Constructors refuse k beyond this; n = k*k then stays within MAX_N.
MAX_K = 256


def _check_k(k: int) -> int:
    if k < 1:
        raise InvalidOrderError(f"k must be positive, got {k}")
    if k > MAX_K:
        raise CapExceededError(f"k={k} exceeds the constructor cap {MAX_K} (n <= {MAX_N})")
    return k * k


def _check_knut_vik_order(k: int):
    if k % 2 == 0 or k % 3 == 0:
        raise InvalidOrderError(
            f"k={k}: k must not be divisible by 2 or 3 (no Knut Vik square of order {k * k})"
        )
    if k < 5:
        raise InvalidOrderError(f"k must be at least 5, got {k}")
    _check_k(k)


def pansudoku_quotient(k: int) -> Grid:
    """Quotient layer of the pandiagonal super-sudoku square.

    Entry (i, j) = (i + j//k) mod k: each row is constant on k-wide bands and
    successive rows advance the band values by one, cycling.
    """
    n = _check_k(k)
    i = np.arange(n).reshape(n, 1)
    j = np.arange(n).reshape(1, n)
    return Grid((i + j // k) % k)


def pan_super_sudoku(k: int) -> Grid:
    """Pandiagonal super-sudoku square of order k*k.

    Base-k combination of the quotient layer with its own transpose:
    S = k*Q + Q^T. Latin, pandiagonal, and sudoku with every broken k-by-k
    block summing to the index, for every k >= 1.
    """
    n = _check_k(k)
    i = np.arange(n).reshape(n, 1)
    j = np.arange(n).reshape(1, n)
    q = (i + j // k) % k
    return Grid(k * q + q.T)


def panmagic_lift(s: Grid) -> Grid:
    """Combine a square with its column reflection: n*s(i, j) + s(i, n-1-j).

    Lifts a Latin-type square over 0..n-1 to one over 0..n*n-1 when the
    square and its reflection are orthogonal; preserves all line-sum
    properties either way.
    """
    n = s.n
    return Grid(n * s.values + s.values[:, ::-1])


def knut_vik_sudoku(k: int) -> Grid:
    """Knut Vik sudoku square of order k*k, for k coprime to 6.

    Entry (i, j) = k*((2i - j) mod k) + (2i - 2j + 2*(i//k) + j//k) mod k.
    The k*k aligned blocks repeat in a knight's-move pattern of left
    two/down one.
    """
    _check_knut_vik_order(k)
    n = k * k
    i = np.arange(n).reshape(n, 1)
    j = np.arange(n).reshape(1, n)
    quot = (2 * i - j) % k
    rem = (2 * i - 2 * j + 2 * (i // k) + j // k) % k
    return Grid(k * quot + rem)


def knight_block(k: int) -> Grid:
    """Order-k Latin block with 0..k-1 on the main diagonal, replicated by
    chess knight moves of right two/down one (with wraparound)."""
    if k % 2 == 0 or k % 3 == 0:
        raise InvalidOrderError(f"k={k}: k must not be divisible by 2 or 3")
    r = np.arange(k).reshape(k, 1)
    c = np.arange(k).reshape(1, k)
    return Grid((2 * r - c) % k)


def knut_vik_block(k: int, i: int) -> Grid:
    """The distinct order-k sudoku block of knut_vik_sudoku(k) whose top-left
    remainder digit is i; equals block (0, i) of the full square."""
    _check_knut_vik_order(k)
    if not 0 <= i < k:
        raise EntryRangeError(f"block index {i} out of range 0..{k - 1}")
    r = np.arange(k).reshape(k, 1)
    c = np.arange(k).reshape(1, k)
    return Grid(k * ((2 * r - c) % k) + (i + 2 * r - 2 * c) % k)


def knut_vik_from_blocks(k: int) -> Grid:
    """Assemble knut_vik_sudoku(k) by tiling its distinct blocks.

    Block position (R, C) holds the block of index (2R + C) mod k, which is
    the left two/down one knight pattern on block indices.
    """
    _check_knut_vik_order(k)
    n = k * k
    out = np.zeros((n, n), dtype=np.int64)
    blocks = [knut_vik_block(k, i).values for i in range(k)]
    for br in range(k):
        for bc in range(k):
            out[br * k:(br + 1) * k, bc * k:(bc + 1) * k] = blocks[(2 * br + bc) % k]
    return Grid(out)


def euler_knut_vik(n: int, lam: int) -> Grid:
    """Cyclic Knut Vik square (lam*i + j) mod n.

    Rows, columns, and the two broken-diagonal families advance by lam,
    lam - 1, and lam + 1 per step respectively, so the square is Knut Vik
    exactly when gcd(lam, n) = gcd(lam - 1, n) = gcd(lam + 1, n) = 1. Every
    row is a cyclic shift of the first.
    """
    if n < 5 or n % 2 == 0 or n % 3 == 0:
        raise InvalidOrderError(
            f"n={n}: no Knut Vik square exists for orders divisible by 2 or 3"
        )
    if n > MAX_N:
        raise CapExceededError(f"n={n} exceeds the cap {MAX_N}")
    lam %= n
    if lam in (0, 1, n - 1) or any(gcd(x, n) != 1 for x in (lam - 1, lam, lam + 1)):
        raise InvalidLambdaError(
            f"lambda={lam}: need lambda, lambda-1, lambda+1 all coprime to n={n} "
            "(in particular lambda != 0, 1, n-1)"
        )
    i = np.arange(n).reshape(n, 1)
    j = np.arange(n).reshape(1, n)
    return Grid((lam * i + j) % n)


def valid_euler_lambdas(n: int) -> list[int]:
    """All slopes lam in 1..n-1 accepted by euler_knut_vik for this n."""
    if n < 5 or n % 2 == 0 or n % 3 == 0:
        return []
    return [
        lam
        for lam in range(2, n - 1)
        if all(gcd(x, n) == 1 for x in (lam - 1, lam, lam + 1))
    ]


def decompose(g: Grid, k: int) -> tuple[Grid, Grid]:
    """Split g into (quotient, remainder) with g = k*quotient + remainder and
    every remainder entry in 0..k-1. Entries of g must be below k*k."""
    if k < 1:
        raise InvalidOrderError(f"k must be positive, got {k}")
    top = int(g.values.max())
    if top >= k * k:
        raise EntryRangeError(f"entry {top} is not below k*k = {k * k}")
    return Grid(g.values // k), Grid(g.values % k)


KINDS = (
    "quotient",
    "pansudoku",
    "panmagic",
    "knutvik",
    "euler",
    "knight-block",
    "kv-block",
)


@dataclass(frozen=True)
class ConstructionSpec:
    """Which constructor to run and with what parameters."""

    kind: str
    k: int | None = None
    n: int | None = None
    lam: int | None = None
    block_index: int | None = None
    base: str = "pansudoku"  # panmagic only: which square to lift

    def build(self) -> Grid:
        if self.kind not in KINDS:
            raise ValueError(f"unknown construction kind {self.kind!r}")
        if self.kind == "euler":
            if self.n is None or self.lam is None:
                raise ValueError("euler requires n and lambda")
            return euler_knut_vik(self.n, self.lam)
        if self.k is None:
            raise ValueError(f"{self.kind} requires k")
        if self.kind == "quotient":
            return pansudoku_quotient(self.k)
        if self.kind == "pansudoku":
            return pan_super_sudoku(self.k)
        if self.kind == "knutvik":
            return knut_vik_sudoku(self.k)
        if self.kind == "knight-block":
            return knight_block(self.k)
        if self.kind == "kv-block":
            if self.block_index is None:
                raise ValueError("kv-block requires a block index")
            return knut_vik_block(self.k, self.block_index)
        # panmagic: lift of the requested base square
        if self.base == "knutvik":
            return panmagic_lift(knut_vik_sudoku(self.k))
        if self.base == "pansudoku":
            return panmagic_lift(pan_super_sudoku(self.k))
        raise ValueError(f"unknown panmagic base {self.base!r}")
