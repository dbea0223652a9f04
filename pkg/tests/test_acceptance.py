"""Acceptance suite: one printed PASS/FAIL line per criterion, then the assertion.

Every criterion is checked at its stated tolerance (zero tolerance for the exact
integer claims).  Run with ``pytest -v tests/test_acceptance.py``; the verdict lines
are written straight to the terminal.
"""

from __future__ import annotations

import time

import numpy as np
import pytest

from codefactory.code import ClassicalCode, ising_cycle, kw_dual, logical_basis, random_ldpc, repetition_code
from codefactory.complex import validate
from codefactory.diagnostics import cycles_up_to, energy_barrier, locally_minimal_distance, strip_config
from codefactory.gauge import (
    CssCode,
    css_logicals,
    css_params,
    css_permutation_equivalent,
    gauge,
    gxc,
    hgp,
    higgs,
    reduce_mod_stabilizers,
)
from codefactory.gf2 import Echelon, Gf2Matrix, inverse, rank
from codefactory.goodcodes import lr_cayley, pk_coarse_grained, quantum_tanner, rotated_toric_code
from codefactory.groups import PermGroup
from codefactory.poly import (
    Poly,
    PolyStabilizerMatrix,
    instantiate,
    ising_matrix,
    mod_translations,
    newman_moore_matrix,
    parse_poly,
    poly_check,
    poly_cubic,
    poly_tensor,
    product_bijection,
    translation_action,
)
from codefactory.products import balanced_product, check_product, cubic_product, tensor_product

from conftest import ising_2d, toric_complex


@pytest.fixture
def report(capsys):
    def emit(number: int, title: str, ok: bool, detail: str = "") -> bool:
        with capsys.disabled():
            print(f"\n[criterion {number:2d}] {'PASS' if ok else 'FAIL'}  {title}" + (f"  ({detail})" if detail else ""))
        return ok

    return emit


def kT(c: ClassicalCode) -> int:
    """Number of logicals of the transpose code."""
    return c.m - c.rank


def _span_contains(basis_cols: np.ndarray, v: np.ndarray) -> bool:
    return rank(Gf2Matrix.from_dense(np.column_stack([basis_cols, v]))) == rank(Gf2Matrix.from_dense(basis_cols))


# -- 1 -------------------------------------------------------------------------------
def test_c01_toric_code(report):
    t0 = time.perf_counter()
    rows, ok = [], True
    for L in (3, 4, 5):
        p = css_params(hgp(ising_cycle(L), ising_cycle(L)))
        got = (p.n, p.k, p.d_X, p.d_Z)
        ok &= got == (2 * L * L, 2, L, L) and p.status == "exact"
        rows.append(f"L={L}: {list(got)}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 10
    assert report(1, "toric code [[2L^2, 2, L, L]] for L in 3..5", ok, "; ".join(rows) + f"; {elapsed:.2f}s")


# -- 2 -------------------------------------------------------------------------------
def test_c02_x_cube(report):
    rows, ok = [], True
    for L in (2, 3, 4):
        c = ising_cycle(L)
        q = gxc(c, c, c)
        ok &= q.n == 3 * L**3 and q.k == 6 * L - 3
        rows.append(f"L={L}: n={q.n} k={q.k}")
    p = css_params(gxc(*[ising_cycle(3)] * 3), distance_budget=3)
    ok &= p.d_X == p.d_Z == 3 and p.status == "exact"
    rows.append(f"L=3: d_X={p.d_X} d_Z={p.d_Z} ({p.status})")
    assert report(2, "X-cube n = 3L^3, k = 6L-3, d = L", ok, "; ".join(rows))


# -- 3 -------------------------------------------------------------------------------
def _ie_cubic(kA, kB, kC, nA, nB, nC):
    return kA * kB * nC + kA * nB * kC + nA * kB * kC - kA * kB - kA * kC - kB * kC + kA * kB * kC


def _block_cubic(kA, kB, kC, nA, nB, nC):
    return kA * kB * nC + kA * nB * kC + nA * kB * kC - 2 * kA * kB * kC


def test_c03_product_formulas(report):
    rng = np.random.default_rng(3)
    bad = {"tensor": 0, "check": 0, "hgp": 0}
    for _ in range(50):
        A = random_ldpc(int(rng.integers(3, 11)), int(rng.integers(2, 9)), rng)
        B = random_ldpc(int(rng.integers(3, 11)), int(rng.integers(2, 9)), rng)
        bad["tensor"] += tensor_product(A, B).code.k != A.k * B.k
        bad["check"] += check_product(A, B).code.k != A.n * B.k + A.k * B.n - A.k * B.k
        bad["hgp"] += hgp(A, B).k != A.k * kT(B) + kT(A) * B.k
    cub_bad = blk_bad = gxc_bad = 0
    for _ in range(10):
        A, B, C = (random_ldpc(int(rng.integers(3, 6)), int(rng.integers(2, 6)), rng) for _ in range(3))
        k, n = (A.k, B.k, C.k), (A.n, B.n, C.n)
        actual = cubic_product(A, B, C).code.k
        cub_bad += actual != _ie_cubic(*k, *n)
        blk_bad += actual != _block_cubic(*k, *n)

        def cp(X, Y):
            return X.n * Y.k + X.k * Y.n - X.k * Y.k

        gxc_bad += gxc(A, B, C).k != cp(A, B) * kT(C) + cp(A, C) * kT(B) + cp(B, C) * kT(A)
    detail = (f"mismatches out of 50: tensor {bad['tensor']}, check {bad['check']}, hgp {bad['hgp']}; out of 10: "
              f"cubic (stated formula) {cub_bad}, cubic (block formula) {blk_bad}, gxc {gxc_bad}")
    ok = not any(bad.values()) and cub_bad == 0 and gxc_bad == 0
    assert report(3, "product k formulas match rank", ok, detail)


# -- 4 -------------------------------------------------------------------------------
def _set_matrix() -> PolyStabilizerMatrix:
    ising_z = PolyStabilizerMatrix.from_strings([["1 + z"]], ("z",))
    return mod_translations(poly_tensor(newman_moore_matrix(), ising_z), "x*y*z", "z")


def _set_flat(L: int) -> ClassicalCode:
    nm = instantiate(newman_moore_matrix(), (L, L))
    actA = translation_action(newman_moore_matrix(), (L, L), (1, 1))
    actB = translation_action(ising_matrix(), (L,), (1,))
    return balanced_product(nm, ising_cycle(L), actA, actB).code


def _logical_action(q: CssCode, perm: np.ndarray) -> np.ndarray:
    """Matrix (columns = images) of a qubit permutation on the X-logical classes."""
    lg = css_logicals(q)
    cols = []
    for v in lg.X.vectors.dense:
        w = np.zeros_like(v)
        w[perm] = v
        cols.append(reduce_mod_stabilizers(w, q.delta_X, lg.Z))
    return np.array(cols, dtype=np.int64).T % 2


def _block_form(T: np.ndarray) -> np.ndarray | None:
    """Conjugate T into diag(P, P, ...) with P = [[0,1],[1,1]] using bases (v, Tv); None if impossible."""
    k = T.shape[0]
    basis: list[np.ndarray] = []
    ech = Echelon(k)
    for e in np.eye(k, dtype=np.int64):
        if len(basis) == k:
            break
        if ech.contains(int(sum(int(b) << i for i, b in enumerate(e)))):
            continue
        pair = [e, (T @ e) % 2]
        for v in pair:
            ech.add(int(sum(int(b) << i for i, b in enumerate(v))))
        basis += pair
    B = np.array(basis, dtype=np.int64).T
    if rank(Gf2Matrix.from_dense(B.astype(np.uint8))) != k:
        return None
    Binv = inverse(Gf2Matrix.from_dense(B.astype(np.uint8))).dense.astype(np.int64)
    return (Binv @ T @ B) % 2


def test_c04_set_code(report):
    S = _set_matrix()
    ks, ok = {}, True
    for L in (3, 4, 5, 6):
        flat = gauge(_set_flat(L))
        ks[L] = flat.k
        ok &= flat.k == gauge(instantiate(S, (L, L))).k
    expected = {3: 4, 4: 1, 5: 1, 6: 4}
    k_ok = ks == expected
    P = np.array([[0, 1], [1, 1]])
    perm_ok = True
    for L in (3, 6):
        q = gauge(instantiate(S, (L, L)))
        Tx = _logical_action(q, translation_action(S, (L, L), (1, 0)).checks.perms[1])
        Tyinv = _logical_action(q, translation_action(S, (L, L), (0, -1)).checks.perms[1])
        blocks = _block_form(Tx)
        perm_ok &= blocks is not None and np.array_equal(blocks, np.kron(np.eye(2, dtype=np.int64), P))
        perm_ok &= np.array_equal(Tx, Tyinv)
    detail = f"k_q by L: {ks} (expected {expected}); translation = SWAP.CNOT on both blocks: {perm_ok}"
    assert report(4, "SET code k_q and translation permutation", ok and k_ok and perm_ok, detail)


# -- 5 -------------------------------------------------------------------------------
XYZ = ("x", "y", "z")
S_X = [["1 + x", "0", "1 + x"], ["0", "1 + y", "1 + y"], ["1 + z + y*z", "1 + z + x*z", "(x + y)*z"]]
S_Z = [["(1 + ybar)*(1 + zbar + zbar*ybar)"], ["(1 + xbar)*(1 + zbar + zbar*xbar)"], ["(1 + xbar)*(1 + ybar)"]]


def _cubic_nm_classical(L: int) -> ClassicalCode:
    S = PolyStabilizerMatrix.from_strings(
        [["(1 + x)*(1 + y)", "(1 + x)*(1 + z + x*z)", "(1 + y)*(1 + z + y*z)"]],
        XYZ,
        redundancies=[["1 + z + x*z", "1 + z + y*z"], ["1 + y", "0"], ["0", "1 + x"]],
    )
    return instantiate(S, (L, L, L))


def _nm_kernel(plane: tuple[str, str], L: int) -> list[Poly]:
    """Polynomials W in the two plane variables with (1 + z + u z) W = 0 on the L x L torus (u the other variable)."""
    u = plane[0]
    code = instantiate(PolyStabilizerMatrix.from_strings([[f"1 + zbar + {u}bar*zbar"]], plane), (L, L))
    where = [XYZ.index(v) for v in plane]
    out = []
    for w in logical_basis(code).vectors.dense:
        terms = []
        for cell in np.flatnonzero(w):
            a, b = divmod(int(cell), L)
            e = [0, 0, 0]
            e[where[0]], e[where[1]] = a, b
            terms.append(tuple(e))
        out.append(Poly(terms, 3))
    return out


def test_c05_cubic_nm_fixture(report):
    ks, ok = {}, True
    for L in (3, 4, 6, 7):
        k_nm = instantiate(newman_moore_matrix(), (L, L)).k
        kq = gauge(_cubic_nm_classical(L)).k
        ks[L] = (kq, 2 * L + 4 * k_nm)
        ok &= kq == 2 * L + 4 * k_nm
    cross = instantiate(newman_moore_matrix(), (3, 3)).k == 2 and instantiate(newman_moore_matrix(), (7, 7)).k == 6
    L = 7
    dX = instantiate(PolyStabilizerMatrix.from_strings(S_X, XYZ), (L, L, L)).delta
    dZ = instantiate(PolyStabilizerMatrix.from_strings(S_Z, XYZ), (L, L, L)).delta
    q = CssCode(dX, dZ)
    same = q.k == ks[7][0]

    def vec(polys):
        return instantiate(PolyStabilizerMatrix(tuple((p,) for p in polys), XYZ), (L, L, L)).delta.dense[:, 0]

    def line(var, bar=False):
        return parse_poly(" + ".join(f"{var}{'bar' if bar else ''}^{i}" for i in range(L)), XYZ)

    zero = Poly.zero(3)
    f_yz, f_xz = _nm_kernel(("y", "z"), L), _nm_kernel(("x", "z"), L)
    X_logicals = {
        "X1": [line("y"), zero, zero], "X2": [f_yz[0], zero, zero], "X3": [zero, line("x"), zero],
        "X4": [zero, f_xz[0], zero], "X5": [zero, zero, line("x")], "X6": [zero, zero, line("y")],
    }
    Z_logicals = {"Z1": [line("x", True), zero, zero], "Z2": [zero, line("y", True), zero]}
    for i, fa in enumerate(f_xz):
        for j, fb in enumerate(f_yz):
            Z_logicals[f"Z3[{i},{j}]"] = [zero, zero, fa.conj() * fb.conj()]
    verdicts = {}
    for name, polys in X_logicals.items():
        v = vec(polys)
        verdicts[name] = not dZ.T.dot_vector(v).any() and not _span_contains(dX.dense, v)
    for name, polys in Z_logicals.items():
        v = vec(polys)
        verdicts[name] = not dX.T.dot_vector(v).any() and not _span_contains(dZ.dense, v)
    failed = sorted(n for n, good in verdicts.items() if not good)
    detail = f"(k_q, 2L+4k_NM) by L: {ks}; explicit stabilizer matrices give k={q.k}; failing logicals: {failed[:4]}{'...' if len(failed) > 4 else ''} ({len(failed)}/{len(verdicts)})"
    assert report(5, "3D cubic NM fixture k_q and listed logicals", ok and cross and same and not failed, detail)


# -- 6 -------------------------------------------------------------------------------
def test_c06_gauge_kw_consistency(report):
    L = 3
    fixtures = {
        "2D Ising": ising_2d(L),
        "3D Ising": tensor_product(ising_2d(L), ising_cycle(L)).code,
        "Cub(I,I,I)": cubic_product(*[ising_cycle(L)] * 3).code,
        "Cub(I,I,NM)": cubic_product(ising_cycle(L), ising_cycle(L), instantiate(newman_moore_matrix(), (L, L))).code,
        "SET balanced": _set_flat(L),
        "NNN balanced": _nnn_code(4),
        "3D cubic NM (2 gens)": _cubic_nm_classical(L),
    }
    rows, ok = [], True
    for name, c in fixtures.items():
        lhs, rhs = gauge(c).k, c.k + kw_dual(c).k
        ok &= lhs == rhs
        rows.append(f"{name}: {lhs} vs {rhs}")
    c = ising_2d(L)
    equiv = css_permutation_equivalent(gauge(c), gauge(kw_dual(c)))
    assert report(6, "k_q == k + k_KW; gauge(c) ~ gauge(kw_dual(c))", ok and equiv, "; ".join(rows) + f"; 2D Ising equivalence {equiv}")


# -- 7 -------------------------------------------------------------------------------
def test_c07_higgs(report):
    ranks = {L: higgs(ising_cycle(L)).rank for L in range(2, 9)}
    rank_ok = all(r == 2 * L for L, r in ranks.items())
    rng = np.random.default_rng(7)
    commuting = sum(higgs(random_ldpc(int(rng.integers(2, 12)), int(rng.integers(1, 10)), rng)).anticommuting_pair() is None
                    for _ in range(100))
    assert report(7, "Higgs map rank 2L and commutation", rank_ok and commuting == 100,
                  f"ranks {ranks}; commuting {commuting}/100")


# -- 8 -------------------------------------------------------------------------------
def test_c08_energy_barriers(report):
    L = 4
    prof = energy_barrier(ising_2d(L))
    E = prof.E_min
    positive = all(E[F] >= 1 for F in range(1, 16))
    monotone = all(E[F] <= E[F + 1] for F in range(8))
    peak = max(E) == 2 * L
    one_d = all(energy_barrier(ising_cycle(n)).E_min[1:n] == (2,) * (n - 1) for n in range(3, 13))
    strip_ok = True
    for A, B in ((ising_cycle(3), ising_cycle(3)), (ising_cycle(4), ising_cycle(4)), (ising_cycle(4), ising_cycle(5)), (ising_cycle(3), ising_cycle(8))):
        full = energy_barrier(tensor_product(A, B).code).E_min
        ones = np.ones(B.n, dtype=np.uint8)
        for FA in range(1, A.n + 1):
            flips = np.zeros(A.n, dtype=np.uint8)
            flips[:FA] = 1
            s = strip_config(A, B, flips, ones)
            strip_ok &= full[s.F] <= s.E_A * B.n
    detail = (f"2D Ising 4x4 profile {list(E)}; >=1: {positive}, monotone to F=8: {monotone}, max={max(E)} (want {2 * L}); "
              f"1D Ising L<=12: {one_d}; strip inequality: {strip_ok}")
    assert report(8, "energy barrier profiles", positive and monotone and peak and one_d and strip_ok, detail)


# -- 9 -------------------------------------------------------------------------------
def test_c09_quantum_tanner_chain(report):
    rows, ok = [], True
    for L in (4, 6):
        G, S = PermGroup.cyclic(L), [1, L - 1]
        with pytest.warns(UserWarning):
            cx = lr_cayley(G, S, S)
        qt = quantum_tanner(cx, repetition_code(2), repetition_code(2))
        cg = pk_coarse_grained(G, S, S, repetition_code(2), repetition_code(2)).code
        equiv = css_permutation_equivalent(qt, cg)
        rot = rotated_toric_code(L)
        ok &= equiv and qt.k == cx.components() * rot.k
        rows.append(f"L={L}: QT k={qt.k}, coarse-grained k={cg.k}, equivalent={equiv}, rotated toric k={rot.k} x {cx.components()} sheets")
    assert report(9, "quantum Tanner == coarse-grained balanced Tanner product", ok, "; ".join(rows))


# -- 10 ------------------------------------------------------------------------------
def _square(flat: ClassicalCode, poly: ClassicalCode, bits, checks, reds=None) -> bool:
    D = np.zeros_like(poly.delta.dense)
    D[np.ix_(bits, checks)] = flat.delta.dense
    ok = np.array_equal(D, poly.delta.dense)
    if reds is not None:
        R = np.zeros_like(poly.redundancy_gens.dense)
        R[np.ix_(checks, reds)] = flat.redundancy_gens.dense
        ok &= np.array_equal(R, poly.redundancy_gens.dense)
    return ok


def test_c10_polynomial_formalism(report):
    inputs = {"Ising": (ising_matrix("x"), (3,)), "NM": (newman_moore_matrix(), (3, 3))}
    results = {}
    for a, b in (("Ising", "Ising"), ("NM", "Ising"), ("Ising", "NM")):
        (SA, pA), (SB, pB) = inputs[a], inputs[b]
        A, B = instantiate(SA, pA), instantiate(SB, pB)
        cells = [int(np.prod(pA)), int(np.prod(pB))]
        T = poly_tensor(SA, SB)
        bits = product_bijection(cells, [SA.N, SB.N])
        chk = np.concatenate([
            product_bijection(cells, [SA.N, SB.M], poly_offset=0, poly_stride=T.M),
            product_bijection(cells, [SA.M, SB.N], poly_offset=SA.N * SB.M, poly_stride=T.M),
        ])
        results[f"tensor {a}x{b}"] = _square(tensor_product(A, B).code, instantiate(T, pA + pB), bits, chk,
                                              product_bijection(cells, [SA.M, SB.M]))
        results[f"check {a}x{b}"] = _square(check_product(A, B).code, instantiate(poly_check(SA, SB), pA + pB), bits,
                                             product_bijection(cells, [SA.M, SB.M]))
    for names in (("Ising", "Ising", "Ising"), ("Ising", "Ising", "NM")):
        facs = [inputs[n] for n in names]
        S = [f[0] for f in facs]
        cells = [int(np.prod(p)) for _, p in facs]
        N, M = [s.N for s in S], [s.M for s in S]
        P = poly_cubic(*S)
        off_ac = M[0] * M[1] * N[2]
        off_bc = off_ac + M[0] * N[1] * M[2]
        chk = np.concatenate([
            product_bijection(cells, [M[0], M[1], N[2]], poly_offset=0, poly_stride=P.M),
            product_bijection(cells, [M[0], N[1], M[2]], poly_offset=off_ac, poly_stride=P.M),
            product_bijection(cells, [N[0], M[1], M[2]], poly_offset=off_bc, poly_stride=P.M),
        ])
        reds = (product_bijection(cells, M)[:, None] * 3 + np.arange(3)).ravel()
        flat = cubic_product(*[instantiate(s, p) for s, p in facs]).code
        results["cubic " + "x".join(names)] = _square(flat, instantiate(P, sum((p for _, p in facs), ())),
                                                     product_bijection(cells, N), chk, reds)
    S = _set_matrix()
    f1, f2 = S.entries[0]
    xy = ("x", "y")
    results["SET pair (1+xy, 1+x+y)"] = f1.equal_up_to_unit(parse_poly("1 + x*y", xy)) and f2 == parse_poly("1 + x + y", xy)
    H = poly_tensor(PolyStabilizerMatrix.from_strings([["1 + x + y + z"]], XYZ),
                    PolyStabilizerMatrix.from_strings([["1 + u + v + w"]], ("u", "v", "w")))
    for rel, var in (("xbar*ybar*u", "u"), ("xbar*zbar*v", "v"), ("ybar*zbar*w", "w")):
        H = mod_translations(H, rel, var)
    results["Haah pair"] = sorted(p.to_str(XYZ) for p in H.entries[0]) == ["1 + x + y + z", "1 + x*y + x*z + y*z"]
    failed = [k for k, v in results.items() if not v]
    assert report(10, "instantiate commutes with products; symbolic reductions", not failed,
                  f"{len(results) - len(failed)}/{len(results)} checks hold" + (f"; failed {failed}" if failed else ""))


# -- 11 ------------------------------------------------------------------------------
def _nnn_code(L: int) -> ClassicalCode:
    A, B = ising_cycle(2 * L), ising_cycle(L)
    actA = translation_action(ising_matrix(), [2 * L], [2])
    actB = translation_action(ising_matrix(), [L], [1])
    return balanced_product(A, B, actA, actB).code


def test_c11_locally_minimal(report):
    res = locally_minimal_distance(toric_complex(3), wmax=4)
    toric_ok = res.d_LM == 3 and res.exact
    c = _nnn_code(4)
    cx = c.complex()
    validate(cx)
    R = c.redundancy_gens.dense
    cycles = cycles_up_to(cx, 4)
    outside = [cyc for cyc in cycles if not _span_contains(R, cyc)]
    weights = sorted({int(cyc.sum()) for cyc in outside})
    detail = (f"toric d_LM={res.d_LM} ({res.status}); NNN balanced complex: {len(cycles)} cycles of weight <= 4, "
              f"{len(outside)} outside the declared redundancies (weights {weights})")
    assert report(11, "locally minimal distance and local redundancies", toric_ok and not outside, detail)
