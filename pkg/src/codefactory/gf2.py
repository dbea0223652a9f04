"""Bit-packed linear algebra over GF(2).

Rows are packed little-endian into 64-bit words: column ``j`` of a row lives in
word ``j // 64`` at bit ``j % 64``.  Every elimination uses the same pivot rule
(leftmost column first, topmost available row), so identical inputs always
produce identical bases.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

WORD = 64


def _num_words(cols: int) -> int:
    return max(1, (cols + WORD - 1) // WORD)


def _pack(dense: np.ndarray) -> np.ndarray:
    """Pack a 0/1 array of shape (rows, cols) into uint64 words."""
    rows, cols = dense.shape
    nw = _num_words(cols)
    padded = np.zeros((rows, nw * WORD), dtype=np.uint8)
    padded[:, :cols] = dense & 1
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").reshape(rows, nw).astype(np.uint64)


def _unpack(words: np.ndarray, cols: int) -> np.ndarray:
    rows = words.shape[0]
    if rows == 0:
        return np.zeros((0, cols), dtype=np.uint8)
    as_bytes = np.ascontiguousarray(words.astype("<u8")).view(np.uint8).reshape(rows, -1)
    return np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :cols].copy()


class Gf2Matrix:
    """Immutable binary matrix with a packed row representation."""

    __slots__ = ("_rows", "_cols", "_words", "_dense")

    def __init__(self, rows: int, cols: int, words: np.ndarray):
        if words.shape != (rows, _num_words(cols)):
            raise ValueError(f"packed storage has shape {words.shape}, expected {(rows, _num_words(cols))}")
        self._rows = int(rows)
        self._cols = int(cols)
        words = words.astype(np.uint64, copy=True)
        words.flags.writeable = False
        self._words = words
        self._dense: np.ndarray | None = None

    # -- construction -------------------------------------------------------
    @classmethod
    def from_dense(cls, array) -> Gf2Matrix:
        dense = np.asarray(array)
        if dense.ndim != 2:
            raise ValueError("expected a 2D array")
        dense = (dense.astype(np.int64) % 2).astype(np.uint8)
        return cls(dense.shape[0], dense.shape[1], _pack(dense))

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[tuple[int, int]]) -> Gf2Matrix:
        dense = np.zeros((rows, cols), dtype=np.uint8)
        seen = set()
        for r, c in entries:
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"entry {(r, c)} out of range for a {rows}x{cols} matrix")
            if (r, c) in seen:
                raise ValueError(f"duplicate entry {(r, c)}")
            seen.add((r, c))
            dense[r, c] = 1
        return cls(rows, cols, _pack(dense))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Gf2Matrix:
        return cls(rows, cols, np.zeros((rows, _num_words(cols)), dtype=np.uint64))

    @classmethod
    def identity(cls, n: int) -> Gf2Matrix:
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    # -- views --------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self._rows, self._cols)

    @property
    def rows(self) -> int:
        return self._rows

    @property
    def cols(self) -> int:
        return self._cols

    @property
    def words(self) -> np.ndarray:
        return self._words

    @property
    def dense(self) -> np.ndarray:
        """Read-only uint8 array view of the matrix."""
        if self._dense is None:
            dense = _unpack(self._words, self._cols)
            dense.flags.writeable = False
            self._dense = dense
        return self._dense

    def entries(self) -> list[tuple[int, int]]:
        r, c = np.nonzero(self.dense)
        return list(zip(r.tolist(), c.tolist()))

    @property
    def nnz(self) -> int:
        return int(self.dense.sum())

    def column(self, j: int) -> np.ndarray:
        return self.dense[:, j].copy()

    def row(self, i: int) -> np.ndarray:
        return self.dense[i].copy()

    def column_support(self, j: int) -> list[int]:
        return np.flatnonzero(self.dense[:, j]).tolist()

    def row_support(self, i: int) -> list[int]:
        return np.flatnonzero(self.dense[i]).tolist()

    def row_ints(self) -> list[int]:
        """Rows as Python integers (bit j = column j)."""
        return [int.from_bytes(self._words[i].astype("<u8").tobytes(), "little") for i in range(self._rows)]

    def column_ints(self) -> list[int]:
        return self.T.row_ints()

    def col_weights(self) -> np.ndarray:
        return self.dense.sum(axis=0).astype(np.int64)

    def row_weights(self) -> np.ndarray:
        return self.dense.sum(axis=1).astype(np.int64)

    def is_zero(self) -> bool:
        return not bool(self._words.any())

    # -- algebra ------------------------------------------------------------
    @property
    def T(self) -> Gf2Matrix:
        return Gf2Matrix.from_dense(self.dense.T)

    def __matmul__(self, other: Gf2Matrix) -> Gf2Matrix:
        if self._cols != other._rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self._cols == 0:
            return Gf2Matrix.zeros(self._rows, other._cols)
        # float32 products are exact while the inner dimension stays below 2^24
        prod = self.dense.astype(np.float32) @ other.dense.astype(np.float32)
        return Gf2Matrix.from_dense(np.rint(prod).astype(np.int64) % 2)

    def dot_vector(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64) % 2
        if v.shape != (self._cols,):
            raise ValueError(f"vector of length {v.shape} for matrix {self.shape}")
        return (self.dense.astype(np.int64) @ v % 2).astype(np.uint8)

    def __add__(self, other: Gf2Matrix) -> Gf2Matrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return Gf2Matrix(self._rows, self._cols, self._words ^ other._words)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Gf2Matrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._words, other._words))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Gf2Matrix({self._rows}x{self._cols}, nnz={self.nnz})"

    def take_rows(self, idx: Sequence[int]) -> Gf2Matrix:
        return Gf2Matrix(len(idx), self._cols, self._words[np.asarray(idx, dtype=np.int64)])

    def take_cols(self, idx: Sequence[int]) -> Gf2Matrix:
        return Gf2Matrix.from_dense(self.dense[:, np.asarray(idx, dtype=np.int64)])

    def permute(self, row_perm: Sequence[int] | None = None, col_perm: Sequence[int] | None = None) -> Gf2Matrix:
        """Return P such that P[row_perm[i], col_perm[j]] = self[i, j]."""
        out = np.zeros(self.shape, dtype=np.uint8)
        rp = np.arange(self._rows) if row_perm is None else np.asarray(row_perm)
        cp = np.arange(self._cols) if col_perm is None else np.asarray(col_perm)
        out[np.ix_(rp, cp)] = self.dense
        return Gf2Matrix.from_dense(out)


def hstack(mats: Sequence[Gf2Matrix], rows: int | None = None) -> Gf2Matrix:
    if not mats:
        return Gf2Matrix.zeros(rows or 0, 0)
    return Gf2Matrix.from_dense(np.hstack([m.dense for m in mats]))


def vstack(mats: Sequence[Gf2Matrix], cols: int | None = None) -> Gf2Matrix:
    if not mats:
        return Gf2Matrix.zeros(0, cols or 0)
    return Gf2Matrix.from_dense(np.vstack([m.dense for m in mats]))


def as_matrix(m) -> Gf2Matrix:
    return m if isinstance(m, Gf2Matrix) else Gf2Matrix.from_dense(m)


# -- elimination -------------------------------------------------------------
def _rref_words(words: np.ndarray, ncols: int, stop_col: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of packed rows; returns (rows, pivot columns)."""
    M = words.astype(np.uint64, copy=True)
    nrows = M.shape[0]
    pivots: list[int] = []
    r = 0
    last = ncols if stop_col is None else stop_col
    for col in range(last):
        if r == nrows:
            break
        w, b = divmod(col, WORD)
        bit = np.uint64(b)
        colbits = (M[:, w] >> bit) & np.uint64(1)
        below = np.flatnonzero(colbits[r:])
        if below.size == 0:
            continue
        p = r + int(below[0])
        if p != r:
            M[[r, p]] = M[[p, r]]
            colbits[[r, p]] = colbits[[p, r]]
        hits = np.flatnonzero(colbits)
        hits = hits[hits != r]
        if hits.size:
            M[hits, w:] ^= M[r, w:]
        pivots.append(col)
        r += 1
    return M, pivots


def rref(M: Gf2Matrix) -> tuple[Gf2Matrix, list[int]]:
    """Reduced row echelon form with the leftmost-column, topmost-row pivot rule."""
    words, pivots = _rref_words(M.words, M.cols)
    return Gf2Matrix(M.rows, M.cols, words), pivots


def rank(M: Gf2Matrix) -> int:
    """Rank over GF(2)."""
    if M.rows == 0 or M.cols == 0:
        return 0
    if M.cols > M.rows:
        M = M.T
    _, pivots = _rref_words(M.words, M.cols)
    return len(pivots)


@dataclass(frozen=True)
class Gf2Basis:
    """A list of linearly independent vectors, stored as the rows of a matrix."""

    ambient_dim: int
    vectors: Gf2Matrix

    def __post_init__(self):
        if self.vectors.cols != self.ambient_dim:
            raise ValueError("basis vectors do not match the ambient dimension")

    def __len__(self) -> int:
        return self.vectors.rows

    @property
    def size(self) -> int:
        return self.vectors.rows

    def as_columns(self) -> Gf2Matrix:
        return self.vectors.T

    def to_list(self) -> list[np.ndarray]:
        return [self.vectors.row(i) for i in range(len(self))]

    @classmethod
    def from_rows(cls, ambient_dim: int, rows) -> Gf2Basis:
        rows = list(rows)
        if not rows:
            return cls(ambient_dim, Gf2Matrix.zeros(0, ambient_dim))
        return cls(ambient_dim, Gf2Matrix.from_dense(np.array(rows, dtype=np.uint8).reshape(len(rows), ambient_dim)))

    @classmethod
    def span_of_columns(cls, M: Gf2Matrix) -> Gf2Basis:
        """An independent spanning set of the column space of M (chosen from its columns)."""
        ech = Echelon(M.rows)
        keep = [j for j, v in enumerate(M.column_ints()) if ech.add(v)]
        return cls(M.rows, M.take_cols(keep).T if keep else Gf2Matrix.zeros(0, M.rows))


def nullspace_basis(M: Gf2Matrix) -> Gf2Basis:
    """Basis of {v : M v = 0}, one vector per free column of the RREF."""
    R, pivots = rref(M)
    pset = set(pivots)
    free = [j for j in range(M.cols) if j not in pset]
    basis = np.zeros((len(free), M.cols), dtype=np.uint8)
    if free:
        basis[np.arange(len(free)), free] = 1
        if pivots:
            basis[:, pivots] = R.dense[: len(pivots)][:, free].T
    return Gf2Basis(M.cols, Gf2Matrix.from_dense(basis) if free else Gf2Matrix.zeros(0, M.cols))


def solve(M: Gf2Matrix, b) -> np.ndarray | None:
    """Some x with M x = b, or None when the system is inconsistent."""
    b = np.asarray(b, dtype=np.uint8) % 2
    if b.shape != (M.rows,):
        raise ValueError("right-hand side has the wrong length")
    aug = Gf2Matrix.from_dense(np.hstack([M.dense, b.reshape(-1, 1)]))
    words, pivots = _rref_words(aug.words, aug.cols)
    if pivots and pivots[-1] == M.cols:
        return None
    R = _unpack(words, aug.cols)
    x = np.zeros(M.cols, dtype=np.uint8)
    for i, p in enumerate(pivots):
        x[p] = R[i, M.cols]
    if not np.array_equal(M.dot_vector(x), b):  # pragma: no cover - guards the kernel
        raise AssertionError("solve produced an invalid solution")
    return x


def inverse(M: Gf2Matrix) -> Gf2Matrix:
    n = M.rows
    if M.cols != n:
        raise ValueError("only square matrices can be inverted")
    aug = Gf2Matrix.from_dense(np.hstack([M.dense, np.eye(n, dtype=np.uint8)]))
    words, pivots = _rref_words(aug.words, aug.cols, stop_col=n)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return Gf2Matrix.from_dense(_unpack(words, 2 * n)[:, n:])


class Echelon:
    """Incremental echelon form over Python-int bitsets (pivot = lowest set bit)."""

    __slots__ = ("dim", "_pivots")

    def __init__(self, dim: int, vectors: Iterable[int] = ()):
        self.dim = dim
        self._pivots: dict[int, int] = {}
        for v in vectors:
            self.add(v)

    def reduce(self, v: int) -> int:
        piv = self._pivots
        while v:
            low = v & -v
            p = piv.get(low)
            if p is None:
                return v
            v ^= p
        return 0

    def add(self, v: int) -> bool:
        """Insert v; return True if it enlarged the span."""
        r = self.reduce(v)
        if r:
            self._pivots[r & -r] = r
            return True
        return False

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def __len__(self) -> int:
        return len(self._pivots)


def int_to_vector(v: int, dim: int) -> np.ndarray:
    out = np.zeros(dim, dtype=np.uint8)
    j = 0
    while v:
        if v & 1:
            out[j] = 1
        v >>= 1
        j += 1
    return out


def vector_to_int(v) -> int:
    bits = np.flatnonzero(np.asarray(v) % 2)
    out = 0
    for j in bits.tolist():
        out |= 1 << j
    return out


def quotient_basis(K: Gf2Basis, I: Gf2Basis) -> Gf2Basis:
    """Coset representatives (taken from K) completing span(I) to span(K)."""
    if K.ambient_dim != I.ambient_dim:
        raise ValueError("bases live in different spaces")
    kspan = Echelon(K.ambient_dim, K.vectors.row_ints())
    ivecs = I.vectors.row_ints()
    for v in ivecs:
        if not kspan.contains(v):
            raise ValueError("span(I) is not contained in span(K)")
    ech = Echelon(K.ambient_dim, ivecs)
    keep = [i for i, v in enumerate(K.vectors.row_ints()) if ech.add(v)]
    if not keep:
        return Gf2Basis(K.ambient_dim, Gf2Matrix.zeros(0, K.ambient_dim))
    return Gf2Basis(K.ambient_dim, K.vectors.take_rows(keep))


def in_column_space(M: Gf2Matrix, v) -> bool:
    return solve(M, v) is not None
