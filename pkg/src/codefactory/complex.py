"""Chain complexes over GF(2)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .gf2 import Gf2Matrix, rank


class ComplexError(ValueError):
    """A boundary map has the wrong shape or two consecutive maps do not compose to zero."""

    def __init__(self, message: str, p: int, witness: int | None = None):
        super().__init__(message)
        self.p = p
        self.witness = witness


@dataclass(frozen=True)
class ChainComplex:
    """Levels V_0..V_D with boundaries[p-1] = delta_p : V_p -> V_{p-1}."""

    dims: tuple[int, ...]
    boundaries: tuple[Gf2Matrix, ...]
    level_labels: tuple[str, ...] | None = None

    def __init__(self, dims: Sequence[int], boundaries: Sequence[Gf2Matrix], level_labels=None):
        object.__setattr__(self, "dims", tuple(int(d) for d in dims))
        object.__setattr__(self, "boundaries", tuple(boundaries))
        object.__setattr__(self, "level_labels", tuple(level_labels) if level_labels is not None else None)
        if len(self.boundaries) != max(len(self.dims) - 1, 0):
            raise ComplexError("need exactly one boundary map between consecutive levels", 0)

    @property
    def depth(self) -> int:
        """Number of boundary maps (the complex dimension D_c)."""
        return len(self.boundaries)

    def boundary(self, p: int) -> Gf2Matrix:
        """delta_p : V_p -> V_{p-1}; zero map outside 1..D_c."""
        if 1 <= p <= self.depth:
            return self.boundaries[p - 1]
        rows = self.dims[p - 1] if 0 <= p - 1 < len(self.dims) else 0
        cols = self.dims[p] if 0 <= p < len(self.dims) else 0
        return Gf2Matrix.zeros(rows, cols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChainComplex):
            return NotImplemented
        return self.dims == other.dims and all(a == b for a, b in zip(self.boundaries, other.boundaries))

    __hash__ = None  # type: ignore[assignment]


def validate(c: ChainComplex) -> bool:
    """Raise ComplexError at the first shape or composition failure; return True otherwise."""
    for p in range(1, c.depth + 1):
        d = c.boundaries[p - 1]
        if d.shape != (c.dims[p - 1], c.dims[p]):
            raise ComplexError(f"delta_{p} has shape {d.shape}, expected {(c.dims[p - 1], c.dims[p])}", p)
    for p in range(1, c.depth):
        prod = c.boundaries[p - 1] @ c.boundaries[p]
        if not prod.is_zero():
            col = int(np.flatnonzero(prod.dense.any(axis=0))[0])
            raise ComplexError(f"delta_{p} delta_{p + 1} != 0 (witness column {col} of V_{p + 1})", p, col)
    return True


def dual(c: ChainComplex) -> ChainComplex:
    """Reverse the levels and transpose every boundary map."""
    D = c.depth
    dims = c.dims[::-1]
    bounds = [c.boundaries[D - p].T for p in range(1, D + 1)]
    labels = c.level_labels[::-1] if c.level_labels else None
    return ChainComplex(dims, bounds, labels)


def tensor_blocks(da: Sequence[int], db: Sequence[int], p: int) -> list[tuple[int, int, int]]:
    """Blocks (p', p'', offset) making up level p of a tensor complex, ascending in p'."""
    out = []
    off = 0
    for pa in range(max(0, p - (len(db) - 1)), min(len(da) - 1, p) + 1):
        pb = p - pa
        out.append((pa, pb, off))
        off += da[pa] * db[pb]
    return out


def tensor(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    """Tensor product complex; level p is spanned by (v_A, v_B) with p' + p'' = p."""
    da, db = a.dims, b.dims
    D = a.depth + b.depth
    dims = [sum(da[pa] * db[pb] for pa, pb, _ in tensor_blocks(da, db, p)) for p in range(D + 1)]
    bounds = []
    for p in range(1, D + 1):
        out = np.zeros((dims[p - 1], dims[p]), dtype=np.uint8)
        lower = {(pa, pb): off for pa, pb, off in tensor_blocks(da, db, p - 1)}
        for pa, pb, off in tensor_blocks(da, db, p):
            size = da[pa] * db[pb]
            if pa >= 1:
                blk = np.kron(a.boundary(pa).dense, np.eye(db[pb], dtype=np.uint8))
                lo = lower[(pa - 1, pb)]
                out[lo : lo + blk.shape[0], off : off + size] ^= blk
            if pb >= 1:
                blk = np.kron(np.eye(da[pa], dtype=np.uint8), b.boundary(pb).dense)
                lo = lower[(pa, pb - 1)]
                out[lo : lo + blk.shape[0], off : off + size] ^= blk
        bounds.append(Gf2Matrix.from_dense(out))
    return ChainComplex(dims, bounds)


def betti(c: ChainComplex, p: int) -> int:
    """dim ker(delta_p) - rank(delta_{p+1})."""
    if not 0 <= p <= c.depth:
        raise ValueError(f"level {p} out of range 0..{c.depth}")
    if c.dims[p] == 0:
        return 0
    return c.dims[p] - rank(c.boundary(p)) - rank(c.boundary(p + 1))


def euler_characteristic(c: ChainComplex) -> int:
    return sum((-1) ** p * d for p, d in enumerate(c.dims))


def single_level(dim: int) -> ChainComplex:
    return ChainComplex([dim], [])
