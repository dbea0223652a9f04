from __future__ import annotations


import numpy as np
import pytest

from codefactory.code import ising_cycle, mod_out_with_maps, transpose_code
from codefactory.gauge import gauge
from codefactory.poly import (
    Poly,
    PolyStabilizerMatrix,
    ca_product,
    instantiate,
    ising_matrix,
    mod_translations,
    newman_moore_matrix,
    parse_poly,
    poly_check,
    poly_cubic,
    poly_tensor,
    poly_transpose,
    product_bijection,
    quotient_cell_map,
    translation_action,
)
from codefactory.products import check_product, cubic_product, tensor_product

XY = ("x", "y")


def P(text, variables=XY):
    return parse_poly(text, variables)


def M(text, variables):
    return PolyStabilizerMatrix.from_strings([[text]], variables)


def test_parse_and_print():
    assert P("1 + x + x") == P("1")
    assert P("x^2*y") == P("x x y") == P("(x)^2 y")
    assert P("xbar") * P("x") == P("1")
    assert P("x^-2") == P("xbar^2")
    assert P("(1 + x)(1 + y)") == P("1 + x + y + x*y")
    assert P("0") == Poly.zero(2) and P("3") == P("1")
    assert P("1 + xbar*y").to_str(XY) == "1 + xbar*y"
    with pytest.raises(ValueError):
        P("1 + q")


def test_arithmetic_properties(rng):
    for _ in range(30):
        terms = [tuple(int(e) for e in rng.integers(-3, 4, size=2)) for _ in range(int(rng.integers(1, 6)))]
        f = Poly(terms, 2)
        assert not (f + f)
        sq = Poly([tuple(2 * e for e in t) for t in f.terms], 2)
        assert f * f == sq  # Frobenius
        assert f.conj().conj() == f


def test_instantiate_examples():
    c = instantiate(ising_matrix(), [5])
    assert c.delta == ising_cycle(5).delta
    plaq = instantiate(M("1 + x + y + x*y", XY), [3, 3])
    assert plaq.delta == check_product(ising_cycle(3), ising_cycle(3)).code.delta
    one = instantiate(M("1", XY), [3, 4])
    assert one.k == 0 and one.n == 12
    with pytest.raises(ValueError):
        instantiate(ising_matrix(), [0])


def test_poly_transpose():
    S = ising_matrix()
    St = poly_transpose(S)
    assert St.entries[0][0] == P("1 + xbar", ("x",))
    assert poly_transpose(St) == S
    assert instantiate(St, [5]).delta == transpose_code(instantiate(S, [5])).delta
    nm = M("1 + x + x*y", XY)
    assert instantiate(poly_transpose(nm), [3, 3]).k == instantiate(nm, [3, 3]).k == 2


def test_ca_product_examples():
    X = M("1 + x", ("x",))
    assert ca_product(X, M("1 + y", ("y",))).entries[0][0] == P("1 + x + x*y")
    out = ca_product(X, M("1 + y + z", ("y", "z")))
    assert out.entries[0][0] == parse_poly("1 + x + x*y + x*z", ("x", "y", "z"))
    shift = ca_product(M("x", ("x",)), M("1 + y", ("y",)))
    assert shift.entries[0][0].equal_up_to_unit(P("1 + y"))
    assert instantiate(shift, [3, 3]).k == 3
    with pytest.raises(ValueError):
        ca_product(X, PolyStabilizerMatrix.from_strings([["1", "y"]], ("y",)))


def test_mod_translations_examples():
    ising2d = poly_tensor(M("1 + x", ("x",)), M("1 + y", ("y",)))
    doubled = mod_translations(ising2d, "x*y", "y")
    assert doubled.to_strings() == [["1 + xbar", "1 + x"]]
    with pytest.raises(ValueError, match="exponent"):
        mod_translations(ising2d, "x^2*y^2", "y")


def test_mod_translations_set_pair():
    T = poly_tensor(newman_moore_matrix(), M("1 + z", ("z",)))
    S = mod_translations(T, "x*y*z", "z")
    f1, f2 = S.entries[0]
    assert f2 == P("1 + x + y")
    assert f1.equal_up_to_unit(P("1 + x*y"))
    assert S.Q == 1


def test_mod_translations_haah_pair():
    A = M("1 + x + y + z", ("x", "y", "z"))
    B = M("1 + u + v + w", ("u", "v", "w"))
    S = poly_tensor(A, B)
    for rel, var in (("xbar*ybar*u", "u"), ("xbar*zbar*v", "v"), ("ybar*zbar*w", "w")):
        S = mod_translations(S, rel, var)
    XYZ = ("x", "y", "z")
    assert sorted(p.to_str(XYZ) for p in S.entries[0]) == ["1 + x + y + z", "1 + x*y + x*z + y*z"]


def test_period_validation():
    T = poly_tensor(newman_moore_matrix(), M("1 + z", ("z",)))
    T = PolyStabilizerMatrix(T.entries, T.variables, (3, 3, 3), T.redundancies)
    assert mod_translations(T, "x*y*z", "z").periods == (3, 3)
    with pytest.raises(ValueError, match="inconsistent"):
        mod_translations(T, "x*y*z", "z", new_periods=(3, 1))


def _check_square(flat, poly, row_perm, col_perm, red_perm=None):
    D = np.zeros_like(poly.delta.dense)
    D[np.ix_(row_perm, col_perm)] = flat.delta.dense
    assert np.array_equal(D, poly.delta.dense)
    if red_perm is not None:
        R = np.zeros_like(poly.redundancy_gens.dense)
        R[np.ix_(col_perm, red_perm)] = flat.redundancy_gens.dense
        assert np.array_equal(R, poly.redundancy_gens.dense)


FACTORS = {
    "ising": (ising_matrix("x"), (3,)),
    "nm": (newman_moore_matrix(), (3, 3)),
}


@pytest.mark.parametrize("a,b", [("ising", "ising"), ("nm", "ising"), ("ising", "nm")])
def test_commutation_tensor_and_check(a, b):
    (SA, pA), (SB, pB) = FACTORS[a], FACTORS[b]
    A, B = instantiate(SA, pA), instantiate(SB, pB)
    cA, cB = int(np.prod(pA)), int(np.prod(pB))
    periods = pA + pB
    T = poly_tensor(SA, SB)
    pt = instantiate(T, periods)
    ft = tensor_product(A, B).code
    bits = product_bijection([cA, cB], [SA.N, SB.N])
    Mt = T.M
    chk = np.concatenate([
        product_bijection([cA, cB], [SA.N, SB.M], poly_offset=0, poly_stride=Mt),
        product_bijection([cA, cB], [SA.M, SB.N], poly_offset=SA.N * SB.M, poly_stride=Mt),
    ])
    red = product_bijection([cA, cB], [SA.M, SB.M])
    _check_square(ft, pt, bits, chk, red)
    C = instantiate(poly_check(SA, SB), periods)
    fc = check_product(A, B).code
    _check_square(fc, C, bits, product_bijection([cA, cB], [SA.M, SB.M]))


@pytest.mark.parametrize("names", [("ising", "ising", "ising"), ("ising", "ising", "nm"), ("nm", "ising", "ising")])
def test_commutation_cubic(names):
    facs = [FACTORS[n] for n in names]
    S = [f[0] for f in facs]
    codes = [instantiate(s, p) for s, p in facs]
    cells = [int(np.prod(p)) for _, p in facs]
    periods = sum((p for _, p in facs), ())
    pc = poly_cubic(*S)
    inst = instantiate(pc, periods)
    flat = cubic_product(*codes).code
    N = [s.N for s in S]
    Mc = [s.M for s in S]
    Mt = pc.M
    bits = product_bijection(cells, N)
    off_ac = Mc[0] * Mc[1] * N[2]
    off_bc = off_ac + Mc[0] * N[1] * Mc[2]
    chk = np.concatenate([
        product_bijection(cells, [Mc[0], Mc[1], N[2]], poly_offset=0, poly_stride=Mt),
        product_bijection(cells, [Mc[0], N[1], Mc[2]], poly_offset=off_ac, poly_stride=Mt),
        product_bijection(cells, [N[0], Mc[1], Mc[2]], poly_offset=off_bc, poly_stride=Mt),
    ])
    triples = product_bijection(cells, Mc)
    red = (triples[:, None] * 3 + np.arange(3)[None, :]).ravel()
    _check_square(flat, inst, bits, chk, red)


def test_mod_translations_matches_mod_out():
    L = 3
    T = poly_tensor(newman_moore_matrix(), M("1 + z", ("z",)))
    rel = (1, 1, 1)
    S = mod_translations(T, rel, 2)
    reduced = instantiate(S, (L, L))
    big = instantiate(T, (L, L, L))
    q = mod_out_with_maps(big, translation_action(T, (L, L, L), rel))
    cell = quotient_cell_map((L, L, L), rel, 2, (L, L))

    def relabel(orbits, per_cell):
        out = np.empty(int(orbits.max()) + 1, dtype=np.int64)
        for idx, orb in enumerate(orbits):
            out[orb] = cell[idx // per_cell] * per_cell + idx % per_cell
        return out

    _check_square(q.code, reduced, relabel(q.bit_orbits, T.N), relabel(q.check_orbits, T.M), relabel(q.redundancy_orbits, T.Q))
    assert gauge(reduced).k == 4
