"""Finite permutation groups and their actions on the labels of a code."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np


def _as_perm(p) -> np.ndarray:
    arr = np.asarray(p, dtype=np.int64)
    if arr.ndim != 1 or sorted(arr.tolist()) != list(range(arr.size)):
        raise ValueError(f"not a permutation: {list(np.asarray(p).ravel())}")
    return arr


def compose(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """(p . q)[x] = p[q[x]]: apply q first, then p."""
    return p[q]


def invert(p: np.ndarray) -> np.ndarray:
    inv = np.empty_like(p)
    inv[p] = np.arange(p.size)
    return inv


class PermGroup:
    """A finite group given by the closure of permutation generators.

    Element 0 is the identity.  ``mul(i, j)`` is the index of elements[i] . elements[j].
    """

    def __init__(self, elements: np.ndarray):
        self.elements = np.asarray(elements, dtype=np.int64)
        self.elements.flags.writeable = False
        self._index = {e.tobytes(): i for i, e in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise ValueError("duplicate group elements")
        if not np.array_equal(self.elements[0], np.arange(self.degree)):
            raise ValueError("element 0 must be the identity")
        self._mul: np.ndarray | None = None

    @classmethod
    def generated_by(cls, generators: Sequence, degree: int | None = None) -> PermGroup:
        gens = [_as_perm(g) for g in generators]
        if degree is None:
            if not gens:
                raise ValueError("cannot infer the degree of a group without generators")
            degree = gens[0].size
        if any(g.size != degree for g in gens):
            raise ValueError("generators act on sets of different sizes")
        ident = np.arange(degree)
        elements = [ident]
        seen = {ident.tobytes()}
        queue = deque([ident])
        while queue:
            g = queue.popleft()
            for s in gens:
                h = compose(g, s)
                key = h.tobytes()
                if key not in seen:
                    seen.add(key)
                    elements.append(h)
                    queue.append(h)
        return cls(np.array(elements))

    @classmethod
    def cyclic(cls, L: int) -> PermGroup:
        """Z_L in its regular representation; element t is translation by t."""
        return cls(np.array([(np.arange(L) + t) % L for t in range(L)]))

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def degree(self) -> int:
        return self.elements.shape[1]

    def index(self, perm) -> int:
        key = np.asarray(perm, dtype=np.int64).tobytes()
        if key not in self._index:
            raise ValueError("permutation is not an element of the group")
        return self._index[key]

    def mul_table(self) -> np.ndarray:
        if self._mul is None:
            n = self.order
            tab = np.empty((n, n), dtype=np.int64)
            for i in range(n):
                for j in range(n):
                    tab[i, j] = self._index[compose(self.elements[i], self.elements[j]).tobytes()]
            self._mul = tab
        return self._mul

    def mul(self, i: int, j: int) -> int:
        return int(self.mul_table()[i, j])

    def inv(self, i: int) -> int:
        return self._index[invert(self.elements[i]).tobytes()]

    def is_abelian(self) -> bool:
        t = self.mul_table()
        return bool(np.array_equal(t, t.T))


@dataclass(frozen=True)
class PermGroupAction:
    """A group acting on a ground set of ``size`` points; row g is the permutation of element g."""

    perms: np.ndarray

    def __post_init__(self):
        perms = np.asarray(self.perms, dtype=np.int64)
        if perms.ndim != 2:
            raise ValueError("perms must be a 2D array (elements x points)")
        for p in perms:
            _as_perm(p)
        if perms.shape[0] == 0 or not np.array_equal(perms[0], np.arange(perms.shape[1])):
            raise ValueError("element 0 of an action must be the identity")
        perms.flags.writeable = False
        object.__setattr__(self, "perms", perms)

    @property
    def order(self) -> int:
        return self.perms.shape[0]

    @property
    def size(self) -> int:
        return self.perms.shape[1]

    @classmethod
    def trivial(cls, size: int) -> PermGroupAction:
        return cls(np.arange(size).reshape(1, size))

    def is_closed(self) -> bool:
        keys = {p.tobytes() for p in self.perms}
        return all(compose(p, q).tobytes() in keys for p in self.perms for q in self.perms)

    def is_free(self) -> bool:
        """No non-identity element fixes a point."""
        idx = np.arange(self.size)
        return not any((p == idx).any() for p in self.perms[1:])

    def orbits(self) -> np.ndarray:
        """Orbit id of every point; orbits numbered by their smallest member."""
        parent = np.arange(self.size)

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for p in self.perms[1:]:
            for x, y in enumerate(p.tolist()):
                rx, ry = find(x), find(y)
                if rx != ry:
                    parent[max(rx, ry)] = min(rx, ry)
        roots = np.array([find(x) for x in range(self.size)], dtype=np.int64)
        _, ids = np.unique(roots, return_inverse=True)
        return ids.astype(np.int64)


@dataclass(frozen=True)
class CodeAction:
    """Aligned actions of one abstract group on the bits, checks and (optionally) redundancies of a code."""

    bits: PermGroupAction
    checks: PermGroupAction | None = None
    redundancies: PermGroupAction | None = None

    @property
    def order(self) -> int:
        return self.bits.order
