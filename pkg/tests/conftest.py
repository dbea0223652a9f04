from __future__ import annotations

import numpy as np
import pytest

from codefactory.code import ClassicalCode, ising_cycle
from codefactory.gf2 import Gf2Matrix
from codefactory.products import tensor_product


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


def ising_2d(L: int) -> ClassicalCode:
    """2D Ising model on the L x L torus with its plaquette redundancies."""
    return tensor_product(ising_cycle(L), ising_cycle(L)).code


def toric_complex(L: int):
    return ising_2d(L).complex()


def brute_kernel(H: np.ndarray) -> list[np.ndarray]:
    """All v with H v = 0, by enumeration (small n only)."""
    n = H.shape[1]
    out = []
    for x in range(1 << n):
        v = np.array([(x >> j) & 1 for j in range(n)], dtype=np.uint8)
        if not ((H.astype(np.int64) @ v) % 2).any():
            out.append(v)
    return out


def random_matrix(rng, rows: int, cols: int, p: float = 0.3) -> Gf2Matrix:
    return Gf2Matrix.from_dense((rng.random((rows, cols)) < p).astype(np.uint8))
