"""Classification predicates for square grids, each in two independent forms.

Direct mode checks sums and sorted lines. Identity mode evaluates the
equivalent permutation-matrix identities (shift products, reflection traces,
difference grids with no zero entry) using actual integer matrix products.
The two routes must always agree; mode "both" runs them side by side and
raises if they ever differ.

The matrix identities test distinctness of entries along lines; to make them
total predicates on arbitrary integer grids they are combined with the entry
range check (0..n-1, or 0..n*n-1 for the natural property) that the sorted
form gets for free.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal

import numpy as np

from .errors import InconsistencyError, OrderMismatchError
from .grid import Grid, SquareOrder

VerifyMode = Literal["direct", "identity", "both"]

FLAGS = (
    "semi_magic",
    "magic",
    "pandiagonal",
    "latin",
    "knut_vik",
    "natural",
    "sudoku",
    "super_sudoku",
)


@dataclass(frozen=True)
class Failure:
    """Concrete witness for a failed property: which line/block/value breaks it."""

    property: str
    kind: str
    index: int


@dataclass
class ClassificationReport:
    n: int
    k: int | None
    is_semi_magic: bool
    is_magic: bool
    is_pandiagonal: bool
    is_latin: bool
    is_knut_vik: bool
    is_natural: bool
    is_sudoku: bool
    is_super_sudoku: bool
    measured_index: int | None
    failures: list[Failure] = field(default_factory=list)

    def flag(self, name: str) -> bool:
        return getattr(self, f"is_{name}")


# ---------------------------------------------------------------------------
# shared machinery


def _check_mode(mode: str):
    if mode not in ("direct", "identity", "both"):
        raise ValueError(f"unknown verify mode {mode!r}")


def _dispatch(g: Grid, mode: str, name: str, direct_fn, identity_fn):
    _check_mode(mode)
    if mode == "direct":
        return direct_fn(g)
    if mode == "identity":
        return identity_fn(g)
    d, i = direct_fn(g), identity_fn(g)
    if d != i:
        raise InconsistencyError(
            f"{name}: direct mode says {d} but identity mode says {i}"
        )
    return d


@lru_cache(maxsize=64)
def _shifter_powers(n: int) -> tuple[np.ndarray, ...]:
    """(K^0, K^1, ..., K^n) for the order-n shifter; K^n is the identity."""
    k = np.zeros((n, n), dtype=np.int64)
    k[np.arange(n), (np.arange(n) - 1) % n] = 1
    powers = [np.eye(n, dtype=np.int64)]
    for _ in range(n):
        powers.append(powers[-1] @ k)
    return tuple(p.copy() for p in powers)


@lru_cache(maxsize=64)
def _block_shifter_powers(n: int, k: int) -> tuple[np.ndarray, ...]:
    """(H^0, ..., H^k) for the block-diagonal shifter; H^k is the identity."""
    h = np.zeros((n, n), dtype=np.int64)
    for b in range(k):
        idx = b * k + np.arange(k)
        h[idx, b * k + (np.arange(k) - 1) % k] = 1
    powers = [np.eye(n, dtype=np.int64)]
    for _ in range(k):
        powers.append(powers[-1] @ h)
    return tuple(p.copy() for p in powers)


@lru_cache(maxsize=64)
def _reflection(n: int) -> np.ndarray:
    r = np.zeros((n, n), dtype=np.int64)
    r[np.arange(n), n - 1 - np.arange(n)] = 1
    return r


def _line_sums(v: np.ndarray):
    """Row sums and column sums, exact (falls back to Python ints if the
    int64 accumulator could overflow)."""
    n = v.shape[0]
    if v.size and int(v.max()) > (1 << 62) // max(n, 1):
        o = v.astype(object)
        return o.sum(axis=1), o.sum(axis=0)
    return v.sum(axis=1), v.sum(axis=0)


def _diagonal_values(v: np.ndarray) -> np.ndarray:
    """Matrix D with D[d, r] = v[r, (r - d) mod n]: row d lists one broken
    diagonal in the down-right direction."""
    n = v.shape[0]
    r = np.arange(n).reshape(1, n)
    d = np.arange(n).reshape(n, 1)
    return v[r, (r - d) % n]


def _antidiagonal_values(v: np.ndarray) -> np.ndarray:
    """Matrix A with A[a, r] = v[r, (a - r) mod n]: row a lists one broken
    diagonal in the down-left direction."""
    n = v.shape[0]
    r = np.arange(n).reshape(1, n)
    a = np.arange(n).reshape(n, 1)
    return v[r, (a - r) % n]


def _rows_are_permutations(v: np.ndarray) -> np.ndarray:
    """Boolean per row: row is a permutation of 0..n-1."""
    n = v.shape[1]
    return (np.sort(v, axis=1) == np.arange(n)).all(axis=1)


def _sudoku_root(n: int) -> int | None:
    from math import isqrt

    r = isqrt(n)
    return r if r * r == n else None


def _aligned_blocks(v: np.ndarray, k: int) -> np.ndarray:
    """Flatten the k*k aligned blocks into rows of a (k*k, n) array, block
    (R, C) at row R*k + C."""
    n = v.shape[0]
    return v.reshape(k, k, k, k).transpose(0, 2, 1, 3).reshape(n, n)


def _broken_block_sums(v: np.ndarray, k: int) -> np.ndarray:
    """S[r, c] = sum of the k-by-k block with top-left corner (r, c), toroidal."""
    acc = v.copy()
    for a in range(1, k):
        acc = acc + np.roll(v, -a, axis=0)
    out = acc.copy()
    for b in range(1, k):
        out = out + np.roll(acc, -b, axis=1)
    return out


def _no_zero(v: np.ndarray) -> bool:
    return bool(np.all(v != 0))


# ---------------------------------------------------------------------------
# semi-magic


def _semi_magic_direct(g: Grid) -> tuple[bool, int | None]:
    rows, cols = _line_sums(g.values)
    m = int(rows[0])
    if np.all(rows == m) and np.all(cols == m):
        return True, m
    return False, None


def _semi_magic_identity(g: Grid) -> tuple[bool, int | None]:
    v = g.values
    u = np.ones((g.n, g.n), dtype=np.int64)
    mu, um = v @ u, u @ v
    m = int(mu[0, 0])
    if np.all(mu == m) and np.all(um == m):
        return True, m
    return False, None


def is_semi_magic(g: Grid, mode: VerifyMode = "direct") -> tuple[bool, int | None]:
    """All 2n row and column sums equal; returns (True, common index) or (False, None)."""
    return _dispatch(g, mode, "is_semi_magic", _semi_magic_direct, _semi_magic_identity)


# ---------------------------------------------------------------------------
# magic


def _magic_direct(g: Grid) -> bool:
    ok, m = _semi_magic_direct(g)
    if not ok:
        return False
    v = g.values
    return int(np.trace(v)) == m and int(np.trace(v[::-1, :])) == m


def _magic_identity(g: Grid) -> bool:
    ok, m = _semi_magic_identity(g)
    if not ok:
        return False
    v = g.values
    return int(np.trace(v)) == m and int(np.trace(_reflection(g.n) @ v)) == m


def is_magic(g: Grid, mode: VerifyMode = "direct") -> bool:
    """Semi-magic with both unbroken diagonals summing to the same index."""
    return _dispatch(g, mode, "is_magic", _magic_direct, _magic_identity)


# ---------------------------------------------------------------------------
# pandiagonal


def _pandiagonal_direct(g: Grid) -> bool:
    ok, m = _semi_magic_direct(g)
    if not ok:
        return False
    v = g.values
    if v.size and int(v.max()) > (1 << 62) // g.n:
        v = v.astype(object)
    return bool(
        np.all(_diagonal_values(v).sum(axis=1) == m)
        and np.all(_antidiagonal_values(v).sum(axis=1) == m)
    )


def _pandiagonal_identity(g: Grid) -> bool:
    ok, m = _semi_magic_identity(g)
    if not ok:
        return False
    v, n = g.values, g.n
    kp = _shifter_powers(n)
    down = sum(kp[i] @ v @ kp[i] for i in range(1, n + 1))
    up = sum(kp[i] @ v @ kp[n - i] for i in range(1, n + 1))
    return bool(np.all(down == m) and np.all(up == m))


def is_pandiagonal(g: Grid, mode: VerifyMode = "direct") -> bool:
    """Semi-magic with all 2n broken diagonals summing to the same index."""
    return _dispatch(g, mode, "is_pandiagonal", _pandiagonal_direct, _pandiagonal_identity)


# ---------------------------------------------------------------------------
# latin


def _in_range(v: np.ndarray, top: int) -> bool:
    return bool(v.max() < top)  # entries are already known non-negative


def _latin_direct(g: Grid) -> bool:
    v = g.values
    return bool(
        _rows_are_permutations(v).all() and _rows_are_permutations(v.T).all()
    )


def _latin_identity(g: Grid) -> bool:
    v, n = g.values, g.n
    if not _in_range(v, n):
        return False
    kp = _shifter_powers(n)
    for i in range(1, n):
        if not _no_zero(v - kp[i] @ v):
            return False
        if not _no_zero(v - v @ kp[i]):
            return False
    return True


def is_latin(g: Grid, mode: VerifyMode = "direct") -> bool:
    """Every row and every column is a permutation of 0..n-1."""
    return _dispatch(g, mode, "is_latin", _latin_direct, _latin_identity)


# ---------------------------------------------------------------------------
# Knut Vik


def _knut_vik_direct(g: Grid) -> bool:
    if not _latin_direct(g):
        return False
    v = g.values
    return bool(
        _rows_are_permutations(_diagonal_values(v)).all()
        and _rows_are_permutations(_antidiagonal_values(v)).all()
    )


def _knut_vik_identity(g: Grid) -> bool:
    if not _latin_identity(g):
        return False
    v, n = g.values, g.n
    kp = _shifter_powers(n)
    for i in range(1, n):
        if not _no_zero(v - kp[i] @ v @ kp[i]):
            return False
        if not _no_zero(v - kp[i] @ v @ kp[n - i]):
            return False
    return True


def is_knut_vik(g: Grid, mode: VerifyMode = "direct") -> bool:
    """Latin square whose every broken diagonal is also a permutation of 0..n-1."""
    return _dispatch(g, mode, "is_knut_vik", _knut_vik_direct, _knut_vik_identity)


# ---------------------------------------------------------------------------
# natural


def _natural_direct(g: Grid) -> bool:
    v, n = g.values, g.n
    return bool(np.array_equal(np.sort(v, axis=None), np.arange(n * n)))


def _natural_identity(g: Grid) -> bool:
    v, n = g.values, g.n
    if not _in_range(v, n * n):
        return False
    kp = _shifter_powers(n)
    for i in range(1, n + 1):
        left = kp[i] @ v
        for j in range(1, n + 1):
            if i == n and j == n:
                continue  # identity translation is the excluded case
            if not _no_zero(v - left @ kp[j]):
                return False
    return True


def is_natural(g: Grid, mode: VerifyMode = "direct") -> bool:
    """Entries are exactly the integers 0..n*n-1, each once."""
    return _dispatch(g, mode, "is_natural", _natural_direct, _natural_identity)


# ---------------------------------------------------------------------------
# sudoku


def _sudoku_direct(g: Grid) -> bool:
    k = _sudoku_root(g.n)
    if k is None:
        return False
    if not _latin_direct(g):
        return False
    return bool(_rows_are_permutations(_aligned_blocks(g.values, k)).all())


def _sudoku_identity(g: Grid) -> bool:
    k = _sudoku_root(g.n)
    if k is None:
        return False
    if not _latin_identity(g):
        return False
    v = g.values
    hp = _block_shifter_powers(g.n, k)
    for i in range(1, k + 1):
        left = hp[i] @ v
        for j in range(1, k + 1):
            if i == k and j == k:
                continue
            if not _no_zero(v - left @ hp[j]):
                return False
    return True


def is_sudoku(g: Grid, mode: VerifyMode = "direct") -> bool:
    """Latin square of order k*k whose aligned k-by-k blocks each hold 0..n-1.

    False (not an error) when n is not a perfect square.
    """
    return _dispatch(g, mode, "is_sudoku", _sudoku_direct, _sudoku_identity)


# ---------------------------------------------------------------------------
# super-sudoku


def _super_sudoku_direct(g: Grid) -> bool:
    if not _sudoku_direct(g):
        return False
    k = _sudoku_root(g.n)
    _, m = _semi_magic_direct(g)  # sudoku implies Latin implies semi-magic
    return bool(np.all(_broken_block_sums(g.values, k) == m))


def _super_sudoku_identity(g: Grid) -> bool:
    if not _sudoku_identity(g):
        return False
    k = _sudoku_root(g.n)
    _, m = _semi_magic_identity(g)
    kp = _shifter_powers(g.n)
    p = sum(kp[a] for a in range(k))
    return bool(np.all(p @ g.values @ p == m))


def is_super_sudoku(g: Grid, mode: VerifyMode = "direct") -> bool:
    """Sudoku square in which every broken k-by-k block also sums to the index."""
    return _dispatch(g, mode, "is_super_sudoku", _super_sudoku_direct, _super_sudoku_identity)


# ---------------------------------------------------------------------------
# orthogonality


def is_orthogonal(a: Grid, b: Grid) -> bool:
    """True when the n*n positionwise ordered pairs (a(i,j), b(i,j)) are all
    distinct (the Graeco-Latin sense)."""
    if a.n != b.n:
        raise OrderMismatchError(f"orders differ: {a.n} vs {b.n}")
    pairs = np.stack([a.values.ravel(), b.values.ravel()], axis=1)
    return bool(np.unique(pairs, axis=0).shape[0] == a.n * a.n)


# ---------------------------------------------------------------------------
# witnesses


def _line_sum_witness(prop: str, g: Grid) -> Failure:
    rows, cols = _line_sums(g.values)
    sums = [int(x) for x in rows] + [int(x) for x in cols]
    modal = Counter(sums).most_common(1)[0][0]
    for i, s in enumerate(rows):
        if int(s) != modal:
            return Failure(prop, "row", i)
    for j, s in enumerate(cols):
        if int(s) != modal:
            return Failure(prop, "column", j)
    raise AssertionError("no line-sum witness in a non-semi-magic grid")


def _magic_witness(g: Grid, m: int) -> Failure:
    if int(np.trace(g.values)) != m:
        return Failure("magic", "main_diagonal", 0)
    return Failure("magic", "cross_diagonal", 0)


def _pandiagonal_witness(g: Grid, semi: bool, m: int | None) -> Failure:
    if not semi:
        w = _line_sum_witness("pandiagonal", g)
        return w
    v = g.values
    for d, s in enumerate(_diagonal_values(v).sum(axis=1)):
        if int(s) != m:
            return Failure("pandiagonal", "diagonal", d)
    for a, s in enumerate(_antidiagonal_values(v).sum(axis=1)):
        if int(s) != m:
            return Failure("pandiagonal", "antidiagonal", a)
    raise AssertionError("no diagonal witness in a non-pandiagonal grid")


def _latin_witness(prop: str, g: Grid) -> Failure:
    v = g.values
    for i, ok in enumerate(_rows_are_permutations(v)):
        if not ok:
            return Failure(prop, "row", i)
    for j, ok in enumerate(_rows_are_permutations(v.T)):
        if not ok:
            return Failure(prop, "column", j)
    raise AssertionError("no Latin witness in a non-Latin grid")


def _knut_vik_witness(g: Grid) -> Failure:
    if not _latin_direct(g):
        return _latin_witness("knut_vik", g)
    v = g.values
    for d, ok in enumerate(_rows_are_permutations(_diagonal_values(v))):
        if not ok:
            return Failure("knut_vik", "diagonal", d)
    for a, ok in enumerate(_rows_are_permutations(_antidiagonal_values(v))):
        if not ok:
            return Failure("knut_vik", "antidiagonal", a)
    raise AssertionError("no diagonal witness in a non-Knut-Vik grid")


def _natural_witness(g: Grid) -> Failure:
    counts = Counter(g.values.ravel().tolist())
    for v in range(g.n * g.n):
        if counts[v] != 1:
            return Failure("natural", "value", v)
    raise AssertionError("no value witness in a non-natural grid")


def _sudoku_witness(g: Grid) -> Failure:
    k = _sudoku_root(g.n)
    if k is None:
        return Failure("sudoku", "order", g.n)
    if not _latin_direct(g):
        return _latin_witness("sudoku", g)
    for b, ok in enumerate(_rows_are_permutations(_aligned_blocks(g.values, k))):
        if not ok:
            return Failure("sudoku", "block", b)
    raise AssertionError("no block witness in a non-sudoku grid")


def _super_sudoku_witness(g: Grid) -> Failure:
    if not _sudoku_direct(g):
        w = _sudoku_witness(g)
        return Failure("super_sudoku", w.kind, w.index)
    k = _sudoku_root(g.n)
    _, m = _semi_magic_direct(g)
    sums = _broken_block_sums(g.values, k)
    bad = np.argwhere(sums != m)
    r, c = (int(x) for x in bad[0])
    return Failure("super_sudoku", "broken_block", r * g.n + c)


# ---------------------------------------------------------------------------
# classification


def classify(g: Grid, mode: VerifyMode = "direct") -> ClassificationReport:
    """Evaluate all eight class flags and collect witnesses for the false ones.

    Flags honor the requested mode; witnesses always come from direct scans.
    """
    _check_mode(mode)
    semi, m = is_semi_magic(g, mode)
    magic = is_magic(g, mode)
    pandiag = is_pandiagonal(g, mode)
    latin = is_latin(g, mode)
    knut = is_knut_vik(g, mode)
    natural = is_natural(g, mode)
    sudoku = is_sudoku(g, mode)
    sup = is_super_sudoku(g, mode)

    failures: list[Failure] = []
    if not semi:
        failures.append(_line_sum_witness("semi_magic", g))
    if not magic:
        if semi:
            failures.append(_magic_witness(g, m))
        else:
            w = _line_sum_witness("semi_magic", g)
            failures.append(Failure("magic", w.kind, w.index))
    if not pandiag:
        failures.append(_pandiagonal_witness(g, semi, m))
    if not latin:
        failures.append(_latin_witness("latin", g))
    if not knut:
        failures.append(_knut_vik_witness(g))
    if not natural:
        failures.append(_natural_witness(g))
    if not sudoku:
        failures.append(_sudoku_witness(g))
    if not sup:
        failures.append(_super_sudoku_witness(g))

    return ClassificationReport(
        n=g.n,
        k=SquareOrder.of(g.n).k,
        is_semi_magic=semi,
        is_magic=magic,
        is_pandiagonal=pandiag,
        is_latin=latin,
        is_knut_vik=knut,
        is_natural=natural,
        is_sudoku=sudoku,
        is_super_sudoku=sup,
        measured_index=m if semi else None,
        failures=failures,
    )
