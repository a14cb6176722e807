"""Bit-packed linear algebra over GF(2).

A square 0/1 matrix is stored as a list of Python ints, one per row, with
bit ``j`` of ``rows[i]`` holding the entry in row ``i``, column ``j``.
Row operations are single word-wise XORs, which keeps Gaussian elimination
fast enough for matrices with a few thousand rows.

All public functions are pure: they never mutate their arguments and
return fresh values.  The synthesis engines mutate private copies through
``GF2Matrix.rows`` directly.
"""

from __future__ import annotations

import random

import numpy as np


class SingularMatrixError(ValueError):
    """Raised when an operation requires an invertible matrix."""


class GF2Matrix:
    """Square matrix over GF(2) with rows packed into integers."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, rows: list[int]):
        if n < 1:
            raise ValueError(f"dimension must be >= 1, got {n}")
        if len(rows) != n:
            raise ValueError(f"expected {n} rows, got {len(rows)}")
        mask = (1 << n) - 1
        if any(r & ~mask for r in rows):
            raise ValueError("row has bits set beyond the matrix dimension")
        self.n = n
        self.rows = list(rows)

    @classmethod
    def identity(cls, n: int) -> "GF2Matrix":
        return cls(n, [1 << i for i in range(n)])

    @classmethod
    def from_rows(cls, entries) -> "GF2Matrix":
        """Build a matrix from nested 0/1 sequences (row-major)."""
        n = len(entries)
        rows = []
        for row in entries:
            if len(row) != n:
                raise ValueError("matrix must be square")
            packed = 0
            for j, bit in enumerate(row):
                if bit not in (0, 1):
                    raise ValueError(f"entries must be 0 or 1, got {bit!r}")
                packed |= bit << j
            rows.append(packed)
        return cls(n, rows)

    @classmethod
    def from_array(cls, array) -> "GF2Matrix":
        a = np.asarray(array)
        return cls.from_rows([[int(x) & 1 for x in row] for row in a])

    def bit(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def column(self, j: int) -> int:
        """Column ``j`` packed into an int (bit ``i`` = entry in row ``i``)."""
        col = 0
        for i, r in enumerate(self.rows):
            col |= ((r >> j) & 1) << i
        return col

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.n)] for r in self.rows]

    def to_array(self) -> np.ndarray:
        return np.array(self.to_lists(), dtype=np.uint8)

    def copy(self) -> "GF2Matrix":
        return GF2Matrix(self.n, self.rows)

    def is_identity(self) -> bool:
        return all(r == 1 << i for i, r in enumerate(self.rows))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GF2Matrix)
            and self.n == other.n
            and self.rows == other.rows
        )

    def __repr__(self) -> str:
        body = ",".join(format(r, f"0{self.n}b")[::-1] for r in self.rows)
        return f"GF2Matrix({self.n}, [{body}])"


def row_add(m: GF2Matrix, i: int, j: int) -> GF2Matrix:
    """Return a copy of ``m`` with row ``i`` XOR-added into row ``j``."""
    if i == j:
        raise ValueError("source and destination rows must differ")
    if not (0 <= i < m.n and 0 <= j < m.n):
        raise IndexError(f"row index out of range for dimension {m.n}")
    out = m.copy()
    out.rows[j] ^= out.rows[i]
    return out


def rank(m: GF2Matrix) -> int:
    """GF(2) rank by plain forward elimination on a scratch copy."""
    rows = list(m.rows)
    r = 0
    for col in range(m.n):
        pivot = next(
            (k for k in range(r, m.n) if (rows[k] >> col) & 1), None
        )
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for k in range(m.n):
            if k != r and (rows[k] >> col) & 1:
                rows[k] ^= rows[r]
        r += 1
    return r


def is_invertible(m: GF2Matrix) -> bool:
    return rank(m) == m.n


def inverse(m: GF2Matrix) -> GF2Matrix:
    """Invert via Gauss-Jordan on an augmented [M | I] block.

    Pivots are chosen at the lowest available row index, which makes the
    elimination order deterministic (any 1 is a valid pivot over GF(2)).

    Raises:
        SingularMatrixError: if ``m`` has no inverse.
    """
    n = m.n
    left = list(m.rows)
    right = [1 << i for i in range(n)]
    for col in range(n):
        pivot = next(
            (k for k in range(col, n) if (left[k] >> col) & 1), None
        )
        if pivot is None:
            raise SingularMatrixError(f"matrix of dimension {n} is singular")
        left[col], left[pivot] = left[pivot], left[col]
        right[col], right[pivot] = right[pivot], right[col]
        for k in range(n):
            if k != col and (left[k] >> col) & 1:
                left[k] ^= left[col]
                right[k] ^= right[col]
    return GF2Matrix(n, right)


def multiply(a: GF2Matrix, b: GF2Matrix) -> GF2Matrix:
    """Matrix product ``a @ b`` over GF(2)."""
    if a.n != b.n:
        raise ValueError("dimension mismatch")
    rows = []
    for r in a.rows:
        acc = 0
        j = 0
        while r:
            if r & 1:
                acc ^= b.rows[j]
            r >>= 1
            j += 1
        rows.append(acc)
    return GF2Matrix(a.n, rows)


def transpose(m: GF2Matrix) -> GF2Matrix:
    return GF2Matrix(m.n, [m.column(j) for j in range(m.n)])


def apply_to_vector(m: GF2Matrix, x: int) -> int:
    """Compute ``m @ x`` with ``x`` packed into an int (bit i = x_i)."""
    out = 0
    for i, r in enumerate(m.rows):
        out |= (bin(r & x).count("1") & 1) << i
    return out


def random_invertible(n: int, rng: random.Random) -> GF2Matrix:
    """Sample a uniform 0/1 matrix, rejecting until it is invertible.

    The fraction of invertible matrices is bounded below by ~0.288, so a
    handful of rejections suffice in expectation.  Deterministic for a
    given ``rng`` state.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    while True:
        m = GF2Matrix(n, [rng.getrandbits(n) for _ in range(n)])
        if is_invertible(m):
            return m


def solve_row_combination(m: GF2Matrix, i: int) -> set[int]:
    """Rows (other than ``i``) whose XOR-sum equals row ``i`` plus e_i.

    The characteristic vector of the set is row ``i`` of the inverse: the
    unique x with x^T M = M_i + e_i^T is e_i^T (I + M^{-1}).  A solution
    excluding ``i`` itself exists precisely when M^{-1}[i][i] = 1, which
    always holds once column ``i`` has been reduced to e_i.

    Raises:
        SingularMatrixError: if ``m`` is singular.
        ValueError: if no solution excluding row ``i`` exists.
    """
    if not (0 <= i < m.n):
        raise IndexError(f"row index {i} out of range")
    inv_row = inverse(m).rows[i]
    if not (inv_row >> i) & 1:
        raise ValueError(
            f"no combination excluding row {i} exists; "
            "column i must equal e_i first"
        )
    return {j for j in range(m.n) if j != i and (inv_row >> j) & 1}


def parse_matrix_text(text: str) -> GF2Matrix:
    """Parse the matrix text format: a dimension line, then n rows of 0/1.

    Rejects ragged lines, bad characters, and wrong row counts.
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    try:
        n = int(lines[0])
    except ValueError:
        raise ValueError(f"first line must be the dimension, got {lines[0]!r}")
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if len(lines) != n + 1:
        raise ValueError(f"expected {n} rows after the header, got {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        if len(ln) != n:
            raise ValueError(f"ragged row: expected {n} characters, got {len(ln)}")
        if set(ln) - {"0", "1"}:
            raise ValueError(f"rows must contain only 0/1, got {ln!r}")
        rows.append(int(ln[::-1], 2))
    return GF2Matrix(n, rows)


def format_matrix_text(m: GF2Matrix) -> str:
    lines = [str(m.n)]
    for r in m.rows:
        lines.append("".join(str((r >> j) & 1) for j in range(m.n)))
    return "\n".join(lines) + "\n"
