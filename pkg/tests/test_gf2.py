from __future__ import annotations

import numpy as np
import pytest

from codefactory.code import ising_cycle
from codefactory.gf2 import Gf2Basis, Gf2Matrix, inverse, nullspace_basis, quotient_basis, rank, solve
from conftest import brute_kernel, random_matrix, toric_complex


def test_rank_examples():
    assert rank(Gf2Matrix.identity(3)) == 3
    assert rank(Gf2Matrix.zeros(4, 5)) == 0
    # vertex-edge incidence of the 3-cycle: brute force over the 8 row combinations
    inc = np.array([[1, 0, 1], [1, 1, 0], [0, 1, 1]], dtype=np.uint8)
    nonzero_combos = {tuple((np.array(c) @ inc) % 2) for c in np.ndindex(2, 2, 2)}
    assert len(nonzero_combos) == 2 ** 2
    assert rank(Gf2Matrix.from_dense(inc)) == 2


def test_rank_transpose_and_nullity(rng):
    for _ in range(200):
        r, c = rng.integers(1, 25, size=2)
        M = random_matrix(rng, int(r), int(c))
        assert rank(M) == rank(M.T)
        ns = nullspace_basis(M)
        assert M.cols == rank(M) + len(ns)
        if len(ns):
            assert (M @ ns.vectors.T).is_zero()


def test_nullspace_examples():
    assert len(nullspace_basis(Gf2Matrix.identity(4))) == 0
    ns = nullspace_basis(Gf2Matrix.from_dense([[1, 1]]))
    assert ns.vectors.dense.tolist() == [[1, 1]]
    H = ising_cycle(4).H
    ns = nullspace_basis(H)
    brute = brute_kernel(H.dense)
    assert len(brute) == 2 ** len(ns) == 2
    assert ns.vectors.dense.tolist() == [[1, 1, 1, 1]]


def test_nullspace_deterministic(rng):
    M = random_matrix(rng, 10, 16)
    assert nullspace_basis(M).vectors == nullspace_basis(Gf2Matrix.from_dense(M.dense.copy())).vectors


def test_matrix_algebra(rng):
    for _ in range(30):
        A, B, C = random_matrix(rng, 5, 6), random_matrix(rng, 6, 7), random_matrix(rng, 7, 4)
        assert (A @ B) @ C == A @ (B @ C)
        B2 = random_matrix(rng, 6, 7)
        assert A @ (B + B2) == A @ B + A @ B2
        assert A.T.T == A


def test_entries_validation():
    with pytest.raises(ValueError):
        Gf2Matrix.from_entries(2, 2, [(0, 0), (0, 0)])
    with pytest.raises(ValueError):
        Gf2Matrix.from_entries(2, 2, [(2, 0)])


def test_quotient_basis_examples():
    K = Gf2Basis.from_rows(2, [[1, 0], [0, 1]])
    I = Gf2Basis.from_rows(2, [[1, 1]])
    Q = quotient_basis(K, I)
    assert len(Q) == 1
    assert rank(Gf2Matrix.from_dense(np.vstack([Q.vectors.dense, I.vectors.dense]))) == 2
    assert len(quotient_basis(K, K)) == 0
    with pytest.raises(ValueError):
        quotient_basis(Gf2Basis.from_rows(2, [[1, 0]]), Gf2Basis.from_rows(2, [[0, 1]]))


def test_quotient_basis_toric():
    cx = toric_complex(3)
    d1, d2 = cx.boundaries
    K = nullspace_basis(d1)
    I = Gf2Basis.span_of_columns(d2)
    Q = quotient_basis(K, I)
    assert len(Q) == 2
    for v in Q.vectors.dense:
        assert not d1.dot_vector(v).any()
        assert solve(d2, v) is None


def test_solve_examples(rng):
    b = rng.integers(0, 2, size=5)
    assert solve(Gf2Matrix.identity(5), b).tolist() == b.tolist()
    assert solve(Gf2Matrix.zeros(3, 3), [1, 0, 0]) is None
    # the boundary of one plaquette is solved by that plaquette alone
    d2 = toric_complex(3).boundaries[1]
    target = d2.column(4)
    x = solve(d2, target)
    assert np.array_equal(d2.dot_vector(x), target)
    sols = [s for s in range(1 << 9) if np.array_equal((d2.dense.astype(int) @ [(s >> j) & 1 for j in range(9)]) % 2, target)]
    assert min(bin(s).count("1") for s in sols) == 1


def test_inverse(rng):
    while True:
        M = random_matrix(rng, 6, 6, 0.5)
        if rank(M) == 6:
            break
    assert M @ inverse(M) == Gf2Matrix.identity(6)
    with pytest.raises(ValueError):
        inverse(Gf2Matrix.zeros(3, 3))
