from __future__ import annotations

import numpy as np
import pytest

from codefactory.code import code_from_checks, ising_cycle, kw_dual, random_ldpc, redundancy_basis, repetition_code
from codefactory.complex import ComplexError
from codefactory.gauge import (
    CssCode,
    LayerSystem,
    coupled_layer_check,
    css_logicals,
    css_params,
    css_permutation_equivalent,
    gauge,
    gxc,
    hgp,
    higgs,
    layer_system,
    reduce_mod_stabilizers,
)
from codefactory.gf2 import Gf2Matrix, rank
from codefactory.poly import instantiate, newman_moore_matrix

from conftest import ising_2d


def test_toric_code_from_2d_ising():
    q = gauge(ising_2d(3))
    p = css_params(q)
    assert (p.n, p.k, p.d_X, p.d_Z) == (18, 2, 3, 3)
    assert p.status == "exact"
    assert q.m_X == 9 and q.m_Z == 9


def test_gauge_needs_redundancies():
    with pytest.raises(ValueError, match="redundancy"):
        gauge(code_from_checks(3, [[0, 1], [1, 2]]))


def test_gauge_k_identity(rng):
    for _ in range(10):
        c = random_ldpc(8, 6, rng)
        c = c.with_redundancies(redundancy_basis(c).vectors.T)
        q = gauge(c)
        assert c.k + kw_dual(c).k - q.k == c.n - c.m + c.r


def test_kw_dual_gauge_is_swap():
    c = ising_2d(3)
    a, b = gauge(kw_dual(c)), gauge(c).swap()
    assert css_permutation_equivalent(a, b)


def test_commutation_failure_raises():
    X = Gf2Matrix.from_dense(np.array([[1], [0]], dtype=np.uint8))
    Z = Gf2Matrix.from_dense(np.array([[1], [1]], dtype=np.uint8))
    with pytest.raises(ComplexError):
        CssCode(X, Z)


def test_hgp_newman_moore_ising():
    nm = instantiate(newman_moore_matrix(), (3, 3))
    q = hgp(nm, ising_cycle(3))
    assert nm.k == 2 and q.k == 2 * 1 + 2 * 1
    h = hgp(ising_cycle(3), ising_cycle(3))
    assert css_params(h).as_dict()["k"] == 2


def test_hgp_k_formula(rng):
    for _ in range(8):
        A = random_ldpc(6, 4, rng)
        B = random_ldpc(5, 7, rng)  # non-square, so k_B and k_B^T differ
        q = hgp(A, B)
        kA, kB = A.k, B.k
        kAt, kBt = A.m - rank(A.delta), B.m - rank(B.delta)
        assert q.k == kA * kBt + kAt * kB


def test_hgp_warns_on_extra_redundancies():
    with pytest.warns(UserWarning, match="not product-generated"):
        hgp(ising_2d(3), repetition_code(2), check_redundancies=4)


def test_gxc_x_cube():
    for L in (2, 3):
        c = ising_cycle(L)
        q = gxc(c, c, c)
        assert q.n == 3 * L**3
        assert q.k == 6 * L - 3
    p = css_params(gxc(ising_cycle(3), ising_cycle(3), ising_cycle(3)))
    assert p.d_X == p.d_Z == 3  # both logical types include straight strings


def test_higgs_rank_and_commutation(rng):
    for _ in range(5):
        c = random_ldpc(7, 5, rng)
        s = higgs(c)
        assert s.anticommuting_pair() is None
        assert s.n == c.n + c.m and s.rank == s.n and s.k == 0


def test_css_logicals_pairing(rng):
    for q in (gauge(ising_2d(3)), hgp(random_ldpc(6, 4, rng), random_ldpc(5, 4, rng))):
        lg = css_logicals(q)
        assert len(lg.X) == len(lg.Z) == q.k
        if q.k:
            assert lg.pairing == Gf2Matrix.identity(q.k)
            for i in range(q.k):
                v = lg.X.vectors.dense[i]
                assert q.delta_Z.T.dot_vector(v).sum() == 0
                cls = reduce_mod_stabilizers(v, q.delta_X, lg.Z)
                assert cls.tolist() == [int(j == i) for j in range(q.k)]


def test_coupled_layers():
    for A, B, C in ((ising_cycle(3),) * 3, (ising_cycle(2), repetition_code(3), ising_cycle(3))):
        assert coupled_layer_check(A, B, C)


def test_coupled_layers_detects_corruption():
    c = ising_cycle(3)
    system, _ = layer_system(c, c, c)
    LZ = system.layer_Z.dense.copy()
    j = next(iter(system.z_check_index.values()))
    i = int(np.flatnonzero(LZ[:, j])[0])
    LZ[i, j] ^= 1
    bad = LayerSystem(Gf2Matrix.from_dense(LZ), system.edge_of, system.z_check_index)
    with pytest.raises(ComplexError):
        coupled_layer_check(c, c, c, system=bad)
