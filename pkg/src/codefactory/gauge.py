"""Classical-to-quantum maps: gauging, Higgsing, hypergraph and generalized X-cube products."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import product as iproduct

import networkx as nx
import numpy as np

from .code import ClassicalCode, search_low_weight_redundancies, transpose_code
from .complex import ComplexError
from .gf2 import Gf2Basis, Gf2Matrix, as_matrix, inverse, nullspace_basis, quotient_basis, rank
from .products import cubic_product, tensor_product


@dataclass(frozen=True, eq=False)
class CssCode:
    """Qubits are rows; column j of delta_X (delta_Z) is the support of X-check (Z-check) j."""

    delta_X: Gf2Matrix
    delta_Z: Gf2Matrix
    name: str = ""
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        dX, dZ = as_matrix(self.delta_X), as_matrix(self.delta_Z)
        object.__setattr__(self, "delta_X", dX)
        object.__setattr__(self, "delta_Z", dZ)
        if dX.rows != dZ.rows:
            raise ValueError(f"delta_X has {dX.rows} qubits but delta_Z has {dZ.rows}")
        prod = dX.T @ dZ
        if not prod.is_zero():
            x, z = prod.entries()[0]
            raise ComplexError(f"X-check {x} and Z-check {z} overlap on an odd number of qubits", 1, (x, z))

    @property
    def n(self) -> int:
        return self.delta_X.rows

    @property
    def m_X(self) -> int:
        return self.delta_X.cols

    @property
    def m_Z(self) -> int:
        return self.delta_Z.cols

    @property
    def k(self) -> int:
        return self.n - rank(self.delta_X) - rank(self.delta_Z)

    def swap(self) -> CssCode:
        """Hadamard on every qubit: X and Z checks exchanged."""
        return CssCode(self.delta_Z, self.delta_X, self.name, dict(self.provenance, hadamard=True))

    def stabilizer(self) -> StabilizerCode:
        n = self.n
        gens = np.zeros((self.m_X + self.m_Z, 2 * n), dtype=np.uint8)
        gens[: self.m_X, :n] = self.delta_X.dense.T
        gens[self.m_X :, n:] = self.delta_Z.dense.T
        return StabilizerCode(n, gens)

    def __repr__(self) -> str:
        return f"CssCode(n={self.n}, m_X={self.m_X}, m_Z={self.m_Z}{', ' + self.name if self.name else ''})"


@dataclass(frozen=True, eq=False)
class StabilizerCode:
    """Pauli generators as symplectic rows (x | z), all with sign +1."""

    n: int
    generators: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.generators, dtype=np.uint8) % 2
        if g.ndim != 2 or g.shape[1] != 2 * self.n:
            raise ValueError("generators must be an array of shape (count, 2n)")
        g.flags.writeable = False
        object.__setattr__(self, "generators", g)
        bad = self.anticommuting_pair()
        if bad is not None:
            raise ComplexError(f"generators {bad[0]} and {bad[1]} anticommute", 0, bad)

    def symplectic_form(self) -> np.ndarray:
        g = self.generators.astype(np.int64)
        x, z = g[:, : self.n], g[:, self.n :]
        return (x @ z.T + z @ x.T) % 2

    def anticommuting_pair(self) -> tuple[int, int] | None:
        bad = np.argwhere(self.symplectic_form())
        return None if bad.size == 0 else (int(bad[0, 0]), int(bad[0, 1]))

    @property
    def rank(self) -> int:
        return rank(Gf2Matrix.from_dense(self.generators))

    @property
    def k(self) -> int:
        return self.n - self.rank


def gauge(c: ClassicalCode) -> CssCode:
    """Qubits on checks, X-checks from bits (rows of delta), Z-checks from redundancy generators."""
    if c.redundancy_gens is None:
        raise ValueError("gauging needs explicit redundancy generators (use with_redundancies)")
    return CssCode(c.delta.T, c.redundancy_gens, name=f"G[{c.name}]" if c.name else "", provenance={"op": "gauge"})


def higgs(c: ClassicalCode) -> StabilizerCode:
    """Cluster state on the Tanner graph: qubits 0..n-1 are bits, n..n+m-1 are checks.

    Check a gives Z_a prod_{i in delta(a)} Z_i; bit i gives X_i prod_{a in delta^T(i)} X_a.
    """
    n, m = c.n, c.m
    N = n + m
    d = c.delta.dense
    gens = np.zeros((m + n, 2 * N), dtype=np.uint8)
    for a in range(m):
        gens[a, N : N + n] = d[:, a]
        gens[a, N + n + a] = 1
    for i in range(n):
        gens[m + i, i] = 1
        gens[m + i, n : n + m] = d[i, :]
    return StabilizerCode(N, gens)


def hgp(A: ClassicalCode, B: ClassicalCode, check_redundancies: int | None = None) -> CssCode:
    """Gauge of the tensor product, using exactly one redundancy per check pair (a, b).

    With ``check_redundancies=w`` a warning is issued when the tensor code has independent
    redundancies of weight <= w beyond the product-generated ones.
    """
    tp = tensor_product(A, B)
    cols = sorted(tp.index_maps["redundancies"].values())
    R = tp.code.redundancy_gens.take_cols(cols)
    code = ClassicalCode(tp.code.delta, R, name=tp.code.name)
    if check_redundancies:
        found = search_low_weight_redundancies(code, check_redundancies)
        extra = rank(_hcat(R, found.gens)) - rank(R)
        if extra:
            warnings.warn(f"hgp: {extra} low-weight redundancies are not product-generated", stacklevel=2)
    q = gauge(code)
    return CssCode(q.delta_X, q.delta_Z, f"HGP({A.name},{B.name})", {"op": "hgp", "index_maps": tp.index_maps})


def _hcat(a: Gf2Matrix, b: Gf2Matrix) -> Gf2Matrix:
    from .gf2 import hstack

    return hstack([a, b], rows=a.rows)


def gxc(A: ClassicalCode, B: ClassicalCode, C: ClassicalCode) -> CssCode:
    """Generalized X-cube: gauge of Cub(A^T, B^T, C^T) followed by a Hadamard (X <-> Z).

    Qubits: C-edges (i,j,c), then B-edges (i,b,k), then A-edges (a,j,k).  Z-checks on
    cubes (a,b,c); X-checks AB, AC, BC interleaved per site (i,j,k).
    """
    cp = cubic_product(transpose_code(A), transpose_code(B), transpose_code(C))
    q = gauge(cp.code).swap()
    return CssCode(q.delta_X, q.delta_Z, f"GXC({A.name},{B.name},{C.name})", {"op": "gxc", "index_maps": cp.index_maps})


# -- parameters and logicals ---------------------------------------------------
@dataclass(frozen=True)
class CssParams:
    n: int
    k: int
    d_X: int | None
    d_Z: int | None
    status_X: str
    status_Z: str

    @property
    def d(self) -> int | None:
        ds = [d for d in (self.d_X, self.d_Z) if d is not None]
        return min(ds) if ds else None

    @property
    def status(self) -> str:
        if self.status_X == self.status_Z == "exact":
            return "exact"
        return "partial"

    def as_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "d_X": self.d_X, "d_Z": self.d_Z, "status": self.status,
                "status_X": self.status_X, "status_Z": self.status_Z}


def _side_distance(H: Gf2Matrix, stab: Gf2Matrix, k: int, wmax, time_budget_ms):
    from .diagnostics import min_weight_vector

    if k == 0:
        return None, "exact"
    res = min_weight_vector(H, stab, wmax=wmax, time_budget_ms=time_budget_ms)
    if res.exact:
        return res.weight, "exact"
    if res.weight is not None:
        return res.weight, "upper_bound"
    return res.lower_bound, "lower_bound_only"


def css_params(q: CssCode, distance_budget: int | None = None, time_budget_ms: float | None = None) -> CssParams:
    """[[n, k, d_X, d_Z]]; d_X is the lightest v with delta_Z^T v = 0 outside colspace(delta_X)."""
    k = q.k
    dX, sX = _side_distance(q.delta_Z.T, q.delta_X, k, distance_budget, time_budget_ms)
    dZ, sZ = _side_distance(q.delta_X.T, q.delta_Z, k, distance_budget, time_budget_ms)
    return CssParams(q.n, k, dX, dZ, sX, sZ)


@dataclass(frozen=True)
class CssLogicals:
    X: Gf2Basis
    Z: Gf2Basis
    pairing: Gf2Matrix


def css_logicals(q: CssCode) -> CssLogicals:
    """Symplectically paired bases: X[i] overlaps Z[j] oddly iff i == j."""
    kx = nullspace_basis(q.delta_Z.T)
    kz = nullspace_basis(q.delta_X.T)
    X = quotient_basis(kx, Gf2Basis.span_of_columns(q.delta_X))
    Z = quotient_basis(kz, Gf2Basis.span_of_columns(q.delta_Z))
    if len(X) != len(Z):
        raise ComplexError("X and Z logical counts differ", 1, (len(X), len(Z)))
    if len(X) == 0:
        return CssLogicals(X, Z, Gf2Matrix.zeros(0, 0))
    P = X.vectors @ Z.vectors.T
    Z2 = inverse(P).T @ Z.vectors
    Zb = Gf2Basis(q.n, Z2)
    pairing = X.vectors @ Zb.vectors.T
    return CssLogicals(X, Zb, pairing)


def reduce_mod_stabilizers(v, stab: Gf2Matrix, logical_Z: Gf2Basis) -> np.ndarray:
    """Logical class of an X-type vector, read off as its overlaps with the paired Z basis."""
    v = np.asarray(v, dtype=np.int64) % 2
    return (logical_Z.vectors.dense.astype(np.int64) @ v) % 2


# -- coupled layers --------------------------------------------------------------
@dataclass(frozen=True)
class LayerSystem:
    """Three families of HGP layers with a map from every layer qubit to a GXC edge."""

    layer_Z: Gf2Matrix  # layer qubits x layer Z-checks
    edge_of: np.ndarray  # layer qubit -> GXC qubit
    z_check_index: dict  # ("AB", k, a, b) etc. -> layer Z-check column


def layer_system(A: ClassicalCode, B: ClassicalCode, C: ClassicalCode) -> tuple[LayerSystem, CssCode]:
    g = gxc(A, B, C)
    maps = g.provenance["index_maps"]
    # gxc qubit labels: checks of Cub(A^T,B^T,C^T)
    c_edge = maps["checks_AB"]  # (i, j, c)
    b_edge = maps["checks_AC"]  # (i, b, k)
    a_edge = maps["checks_BC"]  # (a, j, k)
    blocks = []
    edge_of: list[int] = []
    zidx: dict = {}
    qoff = zoff = 0

    def add_layers(X, Y, count, tag, edge_first, edge_second):
        nonlocal qoff, zoff
        h = hgp(X, Y)
        tm = h.provenance["index_maps"]
        for layer in range(count):
            edge_local = np.empty(h.n, dtype=np.int64)
            for (x, yb), col in tm["checks_B"].items():
                edge_local[col] = edge_second(layer, x, yb)
            for (xa, y), col in tm["checks_A"].items():
                edge_local[col] = edge_first(layer, xa, y)
            edge_of.extend(edge_local.tolist())
            blocks.append((qoff, zoff, h.delta_Z))
            for (xa, yb), col in tm["redundancies"].items():
                zidx[(tag, layer, xa, yb)] = zoff + (col - min(tm["redundancies"].values()))
            qoff += h.n
            zoff += h.m_Z

    # AB plane k: A-edge (a,j,k), B-edge (i,b,k)
    add_layers(A, B, C.n, "AB", lambda k, a, j: a_edge[(a, j, k)], lambda k, i, b: b_edge[(i, b, k)])
    # AC plane j: A-edge (a,j,k), C-edge (i,j,c)
    add_layers(A, C, B.n, "AC", lambda j, a, k: a_edge[(a, j, k)], lambda j, i, c: c_edge[(i, j, c)])
    # BC plane i: B-edge (i,b,k), C-edge (i,j,c)
    add_layers(B, C, A.n, "BC", lambda i, b, k: b_edge[(i, b, k)], lambda i, j, c: c_edge[(i, j, c)])
    dense = np.zeros((qoff, zoff), dtype=np.uint8)
    for q0, z0, dz in blocks:
        dense[q0 : q0 + dz.rows, z0 : z0 + dz.cols] = dz.dense
    return LayerSystem(Gf2Matrix.from_dense(dense), np.array(edge_of, dtype=np.int64), zidx), g


def coupled_layer_check(A: ClassicalCode, B: ClassicalCode, C: ClassicalCode, system: LayerSystem | None = None) -> bool:
    """Products of layer Z-checks around each cube project to the GXC cube check.

    For cube (a,b,c) multiply B^BC_{i,b,c} (i in delta_A(a)), B^AC_{a,j,c} (j in delta_B(b))
    and B^AB_{a,b,k} (k in delta_C(c)).  The product must act identically on both layer
    qubits of every edge, and its image on the edges must be the GXC Z-check.
    """
    sys_, g = layer_system(A, B, C)
    if system is not None:
        sys_ = system
    cube_of = g.provenance["index_maps"]["bits"]  # (a, b, c) -> Z-check column
    LZ = sys_.layer_Z.dense
    for a, b, c in iproduct(range(A.m), range(B.m), range(C.m)):
        cols = [sys_.z_check_index[("BC", i, b, c)] for i in A.delta.column_support(a)]
        cols += [sys_.z_check_index[("AC", j, a, c)] for j in B.delta.column_support(b)]
        cols += [sys_.z_check_index[("AB", k, a, b)] for k in C.delta.column_support(c)]
        v = np.bitwise_xor.reduce(LZ[:, cols], axis=1) if cols else np.zeros(LZ.shape[0], dtype=np.uint8)
        counts = np.zeros(g.n, dtype=np.int64)
        np.add.at(counts, sys_.edge_of, v.astype(np.int64))
        if np.any(counts % 2):
            # a lone Z on one of the two layer qubits anticommutes with the X'X'' coupling
            raise ComplexError(f"cube {(a, b, c)}: product violates the edge constraint", 1, (a, b, c))
        projected = (counts // 2) % 2
        target = g.delta_Z.column(cube_of[(a, b, c)])
        if not np.array_equal(projected.astype(np.uint8), target):
            raise ComplexError(f"cube {(a, b, c)}: projected product differs from the GXC Z-check", 1, (a, b, c))
    return True


# -- equivalence -----------------------------------------------------------------
def _tanner_graph(q: CssCode) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from((("q", i) for i in range(q.n)), kind="q")
    g.add_nodes_from((("x", j) for j in range(q.m_X)), kind="x")
    g.add_nodes_from((("z", j) for j in range(q.m_Z)), kind="z")
    g.add_edges_from((("q", i), ("x", j)) for i, j in q.delta_X.entries())
    g.add_edges_from((("q", i), ("z", j)) for i, j in q.delta_Z.entries())
    return g


def css_permutation_equivalent(q1: CssCode, q2: CssCode, dedupe: bool = True) -> bool:
    """Equal up to relabelling qubits and checks (duplicate and empty checks ignored when dedupe)."""
    if dedupe:
        q1, q2 = canonical_checks(q1), canonical_checks(q2)
    if (q1.n, q1.m_X, q1.m_Z) != (q2.n, q2.m_X, q2.m_Z):
        return False
    for a, b in ((q1.delta_X, q2.delta_X), (q1.delta_Z, q2.delta_Z)):
        if sorted(a.col_weights().tolist()) != sorted(b.col_weights().tolist()):
            return False
        if sorted(a.row_weights().tolist()) != sorted(b.row_weights().tolist()):
            return False
    match = nx.algorithms.isomorphism.categorical_node_match("kind", None)
    return nx.is_isomorphic(_tanner_graph(q1), _tanner_graph(q2), node_match=match)


def canonical_checks(q: CssCode) -> CssCode:
    """Drop empty and repeated check columns."""

    def clean(M: Gf2Matrix) -> Gf2Matrix:
        seen = set()
        keep = []
        for j, col in enumerate(M.column_ints()):
            if col and col not in seen:
                seen.add(col)
                keep.append(j)
        return M.take_cols(keep)

    return CssCode(clean(q.delta_X), clean(q.delta_Z), q.name, q.provenance)
