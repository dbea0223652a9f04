"""Left-right Cayley complexes, quantum Tanner codes and balanced products of Tanner codes."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import networkx as nx
import numpy as np

from .code import ClassicalCode, logical_basis, transpose_code
from .complex import ChainComplex, ComplexError, validate
from .gauge import CssCode, gauge
from .gf2 import Gf2Matrix, nullspace_basis
from .graphs import Graph, cayley_graph, double_cover, edge_action, group_vertex_action, tanner_code
from .groups import CodeAction, PermGroup, PermGroupAction
from .products import ProductCode, balanced_product, tensor_product

# vertex sheets: "none" uses {0}, "double_cover" {0, 1}, "four_copy" {0, 1, 2, 3} with sheet = 2*s_A + s_B
_MODES = ("none", "double_cover", "four_copy")


@dataclass(frozen=True, eq=False)
class LrCayleyComplex:
    """Cay(G, S_A, S_B): vertices (g, sheet), A-edges (v, a v), B-edges (v, v b), squares {v, av, vb, avb}.

    ``local_view[v, s, t]`` is the square through v with A-generator S_A[s] and B-generator
    S_B[t] as seen from v.  ``even[v]`` gives the bipartition (X-checks on even vertices).
    """

    group: PermGroup
    S_A: tuple[int, ...]
    S_B: tuple[int, ...]
    mode: str
    vertices: tuple[tuple[int, int], ...]
    a_edges: tuple[tuple[int, int], ...]
    b_edges: tuple[tuple[int, int], ...]
    squares: tuple[tuple[int, int, int, int], ...]
    local_view: np.ndarray
    even: np.ndarray
    fixes: tuple[str, ...] = ()

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    def chain_complex(self) -> ChainComplex:
        """Levels: vertices, edges (A then B), squares."""
        edges = list(self.a_edges) + list(self.b_edges)
        eidx = {frozenset(e): i for i, e in enumerate(edges)}
        V, E, F = self.num_vertices, len(edges), len(self.squares)
        d1 = np.zeros((V, E), dtype=np.uint8)
        for i, (u, w) in enumerate(edges):
            d1[u, i] ^= 1
            d1[w, i] ^= 1
        d2 = np.zeros((E, F), dtype=np.uint8)
        for f, (v, va, vb, vab) in enumerate(self.squares):
            for e in ((v, va), (v, vb), (va, vab), (vb, vab)):
                d2[eidx[frozenset(e)], f] ^= 1
        cx = ChainComplex([V, E, F], [Gf2Matrix.from_dense(d1), Gf2Matrix.from_dense(d2)], ("vertices", "edges", "squares"))
        validate(cx)
        return cx

    def components(self) -> int:
        g = nx.Graph()
        g.add_nodes_from(range(self.num_vertices))
        g.add_edges_from(self.a_edges)
        g.add_edges_from(self.b_edges)
        return nx.number_connected_components(g)


def _sheets(mode: str) -> list[int]:
    return {"none": [0], "double_cover": [0, 1], "four_copy": [0, 1, 2, 3]}[mode]


def _build(G: PermGroup, S_A, S_B, mode: str):
    mul = G.mul_table()
    sheets = _sheets(mode)
    vid = {(g, s): i for i, (g, s) in enumerate((g, s) for s in sheets for g in range(G.order))}
    verts = sorted(vid, key=vid.get)

    def move_a(v, a):
        g, s = verts[v]
        if mode == "double_cover":
            s = 1 - s
        elif mode == "four_copy":
            s = s ^ 2
        return vid[(int(mul[a, g]), s)]

    def move_b(v, b):
        g, s = verts[v]
        if mode == "double_cover":
            s = 1 - s
        elif mode == "four_copy":
            s = s ^ 1
        return vid[(int(mul[g, b]), s)]

    V = len(verts)
    nA, nB = len(S_A), len(S_B)
    # canonical representative of the Klein orbit of (v, a, b)
    inv_a = [S_A.index(G.inv(a)) for a in S_A]
    inv_b = [S_B.index(G.inv(b)) for b in S_B]
    square_id: dict[tuple[int, int, int], int] = {}
    squares = []
    local = np.empty((V, nA, nB), dtype=np.int64)
    degenerate = False
    for v in range(V):
        for s in range(nA):
            for t in range(nB):
                va = move_a(v, S_A[s])
                vb = move_b(v, S_B[t])
                vab = move_b(va, S_B[t])
                orbit = [(v, s, t), (va, inv_a[s], t), (vb, s, inv_b[t]), (vab, inv_a[s], inv_b[t])]
                key = min(orbit)
                if key not in square_id:
                    square_id[key] = len(squares)
                    squares.append((v, va, vb, vab) if key == (v, s, t) else _corners(key, move_a, move_b, S_A, S_B))
                    if len({v, va, vb, vab}) < 4:
                        degenerate = True
                local[v, s, t] = square_id[key]
    for v in range(V):
        if len(set(local[v].ravel().tolist())) != nA * nB:
            degenerate = True
    a_edges = sorted({tuple(sorted((v, move_a(v, a)))) for v in range(V) for a in S_A})
    b_edges = sorted({tuple(sorted((v, move_b(v, b)))) for v in range(V) for b in S_B})
    return verts, a_edges, b_edges, squares, local, degenerate


def _corners(key, move_a, move_b, S_A, S_B):
    v, s, t = key
    va, vb = move_a(v, S_A[s]), move_b(v, S_B[t])
    return (v, va, vb, move_b(va, S_B[t]))


def _two_colour(V: int, edges) -> np.ndarray | None:
    g = nx.Graph()
    g.add_nodes_from(range(V))
    g.add_edges_from(edges)
    colour = np.zeros(V, dtype=bool)
    for comp in nx.connected_components(g):
        sub = g.subgraph(comp)
        if not nx.is_bipartite(sub):
            return None
        root = min(comp)
        for node, depth in nx.single_source_shortest_path_length(sub, root).items():
            colour[node] = depth % 2 == 0
    return colour


def lr_cayley(G: PermGroup, S_A: Sequence[int], S_B: Sequence[int], fix: str = "auto") -> LrCayleyComplex:
    """Left-right Cayley complex; ``fix`` is 'auto' or one of 'none', 'double_cover', 'four_copy'."""
    S_A, S_B = tuple(int(a) for a in S_A), tuple(int(b) for b in S_B)
    for name, S in (("S_A", S_A), ("S_B", S_B)):
        if 0 in S:
            raise ValueError(f"{name} contains the identity")
        if len(set(S)) != len(S):
            raise ValueError(f"{name} has repeated elements")
        if sorted(G.inv(s) for s in S) != sorted(S):
            raise ValueError(f"{name} is not closed under inverses")
    modes = _MODES if fix == "auto" else (fix,)
    if fix not in ("auto",) + _MODES:
        raise ValueError(f"unknown fix {fix!r}")
    fixes: list[str] = []
    for mode in modes:
        verts, a_edges, b_edges, squares, local, degenerate = _build(G, S_A, S_B, mode)
        if degenerate and mode != "four_copy":
            if fix != "auto":
                raise ValueError("degenerate squares (total no-conjugacy fails); use the four_copy fix")
            fixes.append(f"{mode}: degenerate squares")
            continue
        if mode == "four_copy":
            even = np.array([s in (0, 3) for _, s in verts])
        else:
            colour = _two_colour(len(verts), a_edges + b_edges)
            if colour is None:
                if fix != "auto":
                    raise ValueError("the Cayley graph is not bipartite; use the double_cover fix")
                fixes.append(f"{mode}: not bipartite")
                continue
            even = colour
        cx = LrCayleyComplex(G, S_A, S_B, mode, tuple(verts), tuple(a_edges), tuple(b_edges), tuple(squares), local, even, tuple(fixes))
        if cx.components() > 1:
            warnings.warn(f"left-right Cayley complex has {cx.components()} connected components", stacklevel=2)
        return cx
    raise ValueError("no construction produced a valid complex")


# -- quantum Tanner codes ----------------------------------------------------------
def _codewords(c: ClassicalCode) -> np.ndarray:
    L = logical_basis(c)
    return L.vectors.dense if len(L) else np.zeros((0, c.n), dtype=np.uint8)


def _checks(c: ClassicalCode) -> np.ndarray:
    return c.delta.dense.T.copy()


def quantum_tanner(cx: LrCayleyComplex, C0A: ClassicalCode, C0B: ClassicalCode) -> CssCode:
    """Qubits on squares; X-checks x (x) y on even local views, Z-checks h_A (x) h_B on odd ones."""
    if C0A.n != len(cx.S_A) or C0B.n != len(cx.S_B):
        raise ValueError(f"small codes need {len(cx.S_A)} and {len(cx.S_B)} bits, got {C0A.n} and {C0B.n}")
    xs, ys = _codewords(C0A), _codewords(C0B)
    ha, hb = _checks(C0A), _checks(C0B)
    nq = len(cx.squares)
    xcols, zcols = [], []
    for v in range(cx.num_vertices):
        view = cx.local_view[v]
        pats = [np.outer(x, y) for x in xs for y in ys] if cx.even[v] else [np.outer(a, b) for a in ha for b in hb]
        for pat in pats:
            col = np.zeros(nq, dtype=np.uint8)
            np.bitwise_xor.at(col, view[pat.astype(bool)], 1)
            (xcols if cx.even[v] else zcols).append(col)
    dX = np.array(xcols, dtype=np.uint8).T if xcols else np.zeros((nq, 0), dtype=np.uint8)
    dZ = np.array(zcols, dtype=np.uint8).T if zcols else np.zeros((nq, 0), dtype=np.uint8)
    try:
        return CssCode(Gf2Matrix.from_dense(dX), Gf2Matrix.from_dense(dZ), "QuantumTanner", {"op": "quantum_tanner", "mode": cx.mode})
    except ComplexError as exc:  # a labelling bug, never a property of the inputs
        raise ComplexError(f"quantum Tanner checks do not commute: {exc}", 1, exc.witness) from exc


# -- balanced products of Tanner codes ------------------------------------------------
@dataclass(frozen=True, eq=False)
class TannerProduct:
    product: ProductCode
    tanner_A: ClassicalCode
    tanner_B: ClassicalCode
    vertex_pair_class: dict  # (vertex of Gamma_A, vertex of Gamma_B) -> LR vertex id
    graphs: tuple[Graph, Graph]


def balanced_tanner_product(
    gamma_A: Graph,
    gamma_B: Graph,
    C0A: ClassicalCode,
    C0B: ClassicalCode,
    take_transpose: bool = False,
) -> TannerProduct:
    """T(Gamma_A, C0A) (x)_G T(Gamma_B, C0B), or with T_B transposed when take_transpose.

    Gamma_A must use left-multiplication edges and Gamma_B right-multiplication edges so
    that G acts on them by right and left multiplication respectively.  Graphs without a
    group give the plain tensor product.
    """
    TA = tanner_code(gamma_A, C0A)
    TB = tanner_code(gamma_B, C0B)
    TBx = transpose_code(TB) if take_transpose else TB
    if (gamma_A.group is None) != (gamma_B.group is None):
        raise ValueError("either both graphs carry the group or neither does")
    if gamma_A.group is None:
        pc = tensor_product(TA, TBx)
        pairs = {(u, w): u * gamma_B.num_vertices + w for u in range(gamma_A.num_vertices) for w in range(gamma_B.num_vertices)}
        return TannerProduct(pc, TA, TB, pairs, (gamma_A, gamma_B))
    GA, GB = gamma_A.group, gamma_B.group
    if GA is not GB and not np.array_equal(GA.elements, GB.elements):
        raise ValueError("the two Cayley graphs are built on different groups")
    if gamma_A.side != "left" or gamma_B.side != "right":
        raise ValueError("Gamma_A needs left-multiplication edges and Gamma_B right-multiplication edges")
    vA = group_vertex_action(gamma_A, "right")
    vB = group_vertex_action(gamma_B, "left")
    aA = CodeAction(PermGroupAction(edge_action(gamma_A, vA)))
    eB = PermGroupAction(edge_action(gamma_B, vB))
    if take_transpose:
        # bits of T_B^T are the checks of T_B: local check c at vertex w has index w * m0 + c
        m0 = C0B.m
        perms = np.array([(p[:, None] * m0 + np.arange(m0)[None, :]).ravel() for p in vB], dtype=np.int64)
        aB = CodeAction(PermGroupAction(perms), eB)
    else:
        aB = CodeAction(eB)
    pc = balanced_product(TA, TBx, aA, aB)
    pairs: dict[tuple[int, int], int] = {}
    cls: dict[tuple[int, int], int] = {}
    for u in range(gamma_A.num_vertices):
        for w in range(gamma_B.num_vertices):
            rep = min((int(vA[h, u]), int(vB[h, w])) for h in range(GA.order))
            pairs[(u, w)] = cls.setdefault(rep, len(cls))
    return TannerProduct(pc, TA, TB, pairs, (gamma_A, gamma_B))


# -- coarse graining -------------------------------------------------------------------
@dataclass(frozen=True)
class CoarseGrained:
    code: CssCode
    plaquette_qubits: np.ndarray  # original qubit index of each kept qubit
    x_vertex: np.ndarray  # LR vertex of each combined X-check
    z_vertex: np.ndarray


def coarse_grain(q: CssCode, vertex_of_qubit: np.ndarray, even: np.ndarray) -> CoarseGrained:
    """Multiply checks around each vertex so that vertex qubits drop out, then keep plaquette qubits.

    ``vertex_of_qubit[i]`` is the LR vertex hosting qubit i, or -1 for plaquette qubits.
    At every even vertex v the X-checks touching v's vertex qubits are combined in all ways
    that cancel on those qubits (a nullspace basis); likewise Z-checks at odd vertices.
    """
    vertex_of_qubit = np.asarray(vertex_of_qubit, dtype=np.int64)
    even = np.asarray(even, dtype=bool)
    plaq = np.flatnonzero(vertex_of_qubit < 0)
    dX, dZ = q.delta_X.dense, q.delta_Z.dense

    def combine(D: np.ndarray, parity: bool):
        cols, owners = [], []
        for v in np.flatnonzero(even == parity):
            rows = np.flatnonzero(vertex_of_qubit == v)
            touching = np.flatnonzero(D[rows].any(axis=0))
            if touching.size == 0:
                continue
            ns = nullspace_basis(Gf2Matrix.from_dense(D[np.ix_(rows, touching)]))
            for combo in ns.vectors.dense if len(ns) else []:
                col = np.bitwise_xor.reduce(D[:, touching[combo.astype(bool)]], axis=1)
                bad = np.flatnonzero(col[vertex_of_qubit >= 0] & (even[vertex_of_qubit[vertex_of_qubit >= 0]] == parity))
                if bad.size:
                    raise ComplexError(f"combined check at vertex {v} still touches same-parity vertex qubits", 1, int(v))
                cols.append(col[plaq])
                owners.append(int(v))
        M = np.array(cols, dtype=np.uint8).T if cols else np.zeros((plaq.size, 0), dtype=np.uint8)
        return M, np.array(owners, dtype=np.int64)

    X, xo = combine(dX, True)
    Z, zo = combine(dZ, False)
    code = CssCode(Gf2Matrix.from_dense(X), Gf2Matrix.from_dense(Z), "coarse-grained", {"op": "coarse_grain"})
    return CoarseGrained(code, plaq, xo, zo)


def pk_coarse_grained(G: PermGroup, S_A: Sequence[int], S_B: Sequence[int], C0A: ClassicalCode, C0B: ClassicalCode) -> CoarseGrained:
    """Transpose-balanced Tanner product on double covers of Cayley graphs, gauged and coarse-grained."""
    gA = double_cover(cayley_graph(G, S_A, side="left"))
    gB = double_cover(cayley_graph(G, S_B, side="right"))
    tp = balanced_tanner_product(gA, gB, C0A, C0B, take_transpose=True)
    pc = tp.product
    q = gauge(pc.code)
    parent = pc.parent
    m0A, m0B = C0A.m, C0B.m
    # quantum qubits = checks of the quotient; orbit ids come from the parent tensor checks
    check_orbits = pc.index_maps["checks"]
    vertex_of = np.full(q.n, -1, dtype=np.int64)
    sheet_A = np.array(gA.vertex_sheet)
    sheet_B = np.array(gB.vertex_sheet)
    lr_even: dict[int, bool] = {}
    for (alpha, j), col in parent.index_maps["checks_A"].items():
        u, w = alpha // m0A, j // m0B  # A-vertex of check alpha, B-vertex of T_B check j
        lr = tp.vertex_pair_class[(u, w)]
        vertex_of[check_orbits[col]] = lr
        lr_even[lr] = bool(sheet_A[u] == sheet_B[w])
    even = np.array([lr_even[i] for i in range(len(lr_even))], dtype=bool)
    return coarse_grain(q, vertex_of, even)


def rotated_toric_code(L: int) -> CssCode:
    """Checkerboard code on Z^2 / <(2,-2), (L,0)> (L even): qubits on 2L vertices, faces alternate X/Z."""
    if L % 2:
        raise ValueError("the checkerboard colouring needs even L")

    def canon(i: int, j: int) -> int:
        q, i = divmod(i, 2)
        j = (j + 2 * q) % L
        return i * L + j

    n = 2 * L
    X, Z = [], []
    seen = set()
    for i in range(2):
        for j in range(L):
            key = (canon(i, j), (i + j) % 2)
            if key in seen:
                continue
            seen.add(key)
            col = np.zeros(n, dtype=np.uint8)
            for di in (0, 1):
                for dj in (0, 1):
                    col[canon(i + di, j + dj)] ^= 1
            (X if (i + j) % 2 == 0 else Z).append(col)
    return CssCode(Gf2Matrix.from_dense(np.array(X).T), Gf2Matrix.from_dense(np.array(Z).T), f"rotated_toric_{L}")
