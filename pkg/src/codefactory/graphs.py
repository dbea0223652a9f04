"""Graphs (cycles, tori, Cayley graphs) and the classical codes defined on them."""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Sequence

import networkx as nx
import numpy as np

from .code import ClassicalCode, code_from_checks
from .gf2 import Gf2Matrix
from .groups import PermGroup


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected multigraph without self-loops.

    ``ports`` optionally fixes an ordering of the edges at each vertex (Cayley graphs
    order them by generator).  For Cayley graphs and their covers, ``group`` is the
    group, ``vertex_element`` maps vertices to group elements, ``vertex_sheet`` to a
    cover sheet, and ``side`` records whether edges come from left or right multiplication.
    """

    num_vertices: int
    edges: tuple[tuple[int, int], ...]
    flavors: tuple[str, ...] | None = None
    ports: tuple[tuple[int, ...], ...] | None = None
    port_labels: tuple[tuple[int, ...], ...] | None = None
    group: PermGroup | None = None
    vertex_element: tuple[int, ...] | None = None
    vertex_sheet: tuple[int, ...] | None = None
    side: str | None = None
    connection: tuple[int, ...] | None = None

    def __post_init__(self):
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        for u, v in edges:
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ValueError(f"edge {(u, v)} has an endpoint out of range")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.num_vertices, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def incident(self, v: int) -> list[int]:
        """Edge ids at v in the default order: by (neighbour, edge id)."""
        inc = []
        for e, (a, b) in enumerate(self.edges):
            if a == v:
                inc.append((b, e))
            elif b == v:
                inc.append((a, e))
        return [e for _, e in sorted(inc)]

    def neighbors(self, v: int) -> set[int]:
        out = set()
        for a, b in self.edges:
            if a == v:
                out.add(b)
            elif b == v:
                out.add(a)
        return out

    def to_networkx(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(range(self.num_vertices))
        g.add_edges_from(self.edges)
        return g

    def num_components(self) -> int:
        return nx.number_connected_components(self.to_networkx()) if self.num_vertices else 0


def cycle_graph(L: int) -> Graph:
    if L < 2:
        raise ValueError("a cycle needs at least 2 vertices (L = 1 would be a self-loop)")
    return Graph(L, tuple((i, (i + 1) % L) for i in range(L)))


def torus_graph(shape: Sequence[int]) -> Graph:
    shape = tuple(int(s) for s in shape)
    if any(s < 2 for s in shape):
        raise ValueError("every torus period must be at least 2")
    edges = []
    for idx in itertools.product(*[range(s) for s in shape]):
        v = int(np.ravel_multi_index(idx, shape))
        for d in range(len(shape)):
            nb = list(idx)
            nb[d] = (nb[d] + 1) % shape[d]
            edges.append((v, int(np.ravel_multi_index(tuple(nb), shape))))
    return Graph(int(np.prod(shape)), tuple(edges))


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(itertools.combinations(range(n), 2)))


def cayley_graph(group: PermGroup, connection: Sequence[int], side: str = "right", directed_ok: bool = False) -> Graph:
    """Edge (g, g s) for every s in the connection set (or (g, s g) with side='left').

    Connection elements are group element indices.  One undirected edge is created per
    pair {g, gs}; the port order at each vertex follows the connection set.
    """
    S = [int(s) for s in connection]
    if any(s == 0 for s in S):
        raise ValueError("the connection set must not contain the identity")
    if not directed_ok and sorted(group.inv(s) for s in S) != sorted(S):
        raise ValueError("the connection set is not closed under inverses")
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    mul = group.mul_table()
    step = (lambda g, s: int(mul[g, s])) if side == "right" else (lambda g, s: int(mul[s, g]))
    edges: list[tuple[int, int]] = []
    key_to_edge: dict[tuple[int, int], int] = {}
    ports: list[list[int]] = [[] for _ in range(group.order)]
    for g in range(group.order):
        for s in S:
            h = step(g, s)
            s_inv = group.inv(s)
            if (h, s_inv) in key_to_edge:
                e = key_to_edge[(h, s_inv)]
            else:
                e = len(edges)
                edges.append((g, h))
                key_to_edge[(g, s)] = e
            ports[g].append(e)
    labels = tuple(tuple(S) for _ in range(group.order))
    return Graph(
        group.order,
        tuple(edges),
        ports=tuple(tuple(p) for p in ports),
        port_labels=labels,
        group=group,
        vertex_element=tuple(range(group.order)),
        vertex_sheet=tuple([0] * group.order),
        side=side,
        connection=tuple(S),
    )


def double_cover(g: Graph) -> Graph:
    """Bipartite double cover: vertex (v, t) -> v + t N; each edge {u,v} lifts to {(u,0),(v,1)} and {(v,0),(u,1)}."""
    N = g.num_vertices
    edges = []
    lift: dict[tuple[int, int], int] = {}  # (edge id, sheet of its first endpoint) -> new edge
    for e, (u, v) in enumerate(g.edges):
        lift[(e, 0)] = len(edges)
        edges.append((u, v + N))
        lift[(e, 1)] = len(edges)
        edges.append((v, u + N))
    ports = None
    if g.ports is not None:
        ports = []
        for t in (0, 1):
            for v in range(N):
                row = []
                for e in g.ports[v]:
                    a, _ = g.edges[e]
                    # edge e seen from v on sheet t is the lift that starts on v's sheet
                    row.append(lift[(e, 0)] if (a == v) == (t == 0) else lift[(e, 1)])
                ports.append(tuple(row))
        ports = tuple(ports)
    elem = None if g.vertex_element is None else tuple(g.vertex_element) * 2
    sheet = tuple([0] * N + [1] * N)
    return Graph(
        2 * N,
        tuple(edges),
        ports=ports,
        port_labels=None if g.port_labels is None else tuple(g.port_labels) * 2,
        group=g.group,
        vertex_element=elem,
        vertex_sheet=sheet,
        side=g.side,
        connection=g.connection,
    )


def group_vertex_action(g: Graph, acting_side: str) -> np.ndarray:
    """Permutations of the vertices of a Cayley graph (or cover) by the group.

    Right-multiplication edges are preserved by left multiplication and vice versa;
    ``acting_side`` selects which multiplication the action uses.
    Row h maps vertex (x, t) to (h x, t) for 'left' and to (x h^-1, t) for 'right',
    so that both are left actions of the abstract group.
    """
    if g.group is None or g.vertex_element is None:
        raise ValueError("graph carries no group structure")
    G = g.group
    mul = G.mul_table()
    lookup = {(x, t): v for v, (x, t) in enumerate(zip(g.vertex_element, g.vertex_sheet))}
    out = np.empty((G.order, g.num_vertices), dtype=np.int64)
    for h in range(G.order):
        hinv = G.inv(h)
        for v, (x, t) in enumerate(zip(g.vertex_element, g.vertex_sheet)):
            y = int(mul[h, x]) if acting_side == "left" else int(mul[x, hinv])
            out[h, v] = lookup[(y, t)]
    return out


def edge_action(g: Graph, vertex_perms: np.ndarray) -> np.ndarray:
    """Edge permutations induced by vertex permutations, matched through the port labels."""
    if g.ports is None or g.port_labels is None:
        raise ValueError("edge actions need port labels")
    out = np.empty((vertex_perms.shape[0], len(g.edges)), dtype=np.int64)
    for h, vp in enumerate(vertex_perms):
        for v in range(g.num_vertices):
            w = int(vp[v])
            for slot, e in enumerate(g.ports[v]):
                out[h, e] = g.ports[w][slot]
    return out


def build_graph(spec: dict) -> Graph:
    """Graph from a dictionary spec: cycle, torus, complete, cayley or explicit edges."""
    kind = spec.get("type")
    if kind == "cycle":
        return cycle_graph(int(spec["L"]))
    if kind == "torus":
        return torus_graph(spec["shape"])
    if kind == "complete":
        return complete_graph(int(spec["n"]))
    if kind == "edges":
        return Graph(int(spec["num_vertices"]), tuple(tuple(e) for e in spec["edges"]))
    if kind == "cayley":
        if "cyclic" in spec:
            group = PermGroup.cyclic(int(spec["cyclic"]))
            conn = [int(s) % group.order for s in spec["connection"]]
        else:
            group = PermGroup.generated_by(spec["generators"])
            conn = [group.index(p) for p in spec["connection"]]
        return cayley_graph(group, conn, spec.get("side", "right"), spec.get("directed", False))
    raise ValueError(f"unknown graph type {kind!r}")


# -- codes on graphs ---------------------------------------------------------
def ising_code(g: Graph) -> ClassicalCode:
    """Bits on vertices, one two-body check per edge."""
    code = code_from_checks(g.num_vertices, [[u, v] for u, v in g.edges], name="ising")
    comps = g.num_components()
    if comps > 1:
        warnings.warn(f"graph has {comps} connected components; k = {comps}", stacklevel=2)
    return code


def laplacian_code(g: Graph) -> ClassicalCode:
    """Check i is the product of the Ising checks on the edges at i: delta = (D + A) mod 2."""
    n = g.num_vertices
    lap = np.zeros((n, n), dtype=np.int64)
    for u, v in g.edges:
        lap[u, u] += 1
        lap[v, v] += 1
        lap[u, v] += 1
        lap[v, u] += 1
    return ClassicalCode(Gf2Matrix.from_dense(lap % 2), name="laplacian")


def tanner_code(
    g: Graph,
    local: ClassicalCode | None = None,
    edge_order: Sequence[Sequence[int]] | None = None,
    local_codes: Sequence[ClassicalCode] | None = None,
) -> ClassicalCode:
    """Bits on edges; each vertex applies its local code to its incident edges in edge_order."""
    n = len(g.edges)
    if edge_order is None:
        edge_order = g.ports if g.ports is not None else [g.incident(v) for v in range(g.num_vertices)]
    if len(edge_order) != g.num_vertices:
        raise ValueError("edge_order needs one list per vertex")
    checks = []
    for v in range(g.num_vertices):
        loc = local_codes[v] if local_codes is not None else local
        if loc is None:
            raise ValueError("no local code supplied")
        order = list(edge_order[v])
        if sorted(order) != sorted(g.incident(v)):
            raise ValueError(f"edge_order is not a bijection onto the edges at vertex {v}")
        if len(order) != loc.n:
            raise ValueError(f"vertex {v} has degree {len(order)} but its local code has {loc.n} bits")
        for a in range(loc.m):
            supp = [order[t] for t in loc.delta.column_support(a)]
            checks.append(supp)
    return code_from_checks(n, checks, name="tanner")


def tannerize(c: ClassicalCode) -> tuple[Graph, list[ClassicalCode]]:
    """Tanner-graph embedding of an arbitrary code as a Tanner code.

    Vertices: bits 0..n-1 then checks n..n+m-1.  A check vertex carries one parity check
    on all its edges; a bit vertex forces its edges to agree (a chain of two-body checks).
    """
    from .code import repetition_code

    edges = []
    for a in range(c.m):
        for i in c.delta.column_support(a):
            edges.append((i, c.n + a))
    g = Graph(c.n + c.m, tuple(edges))
    deg = g.degrees()
    if c.n and (deg[: c.n] == 0).any():
        raise ValueError("a bit outside every check cannot be represented on the Tanner graph")
    locals_: list[ClassicalCode] = []
    for v in range(g.num_vertices):
        d = int(deg[v])
        if v < c.n:
            locals_.append(repetition_code(d))
        else:
            locals_.append(code_from_checks(d, [list(range(d))]))
    return g, locals_


@dataclass(frozen=True)
class ExpansionReport:
    gamma: float
    alpha: float
    exact: bool
    worst_subset: tuple[int, ...]
    seed: int


def vertex_expansion(g: Graph, max_subset: int, seed: int = 0, samples: int = 2000) -> ExpansionReport:
    """min over 1 <= |A| <= max_subset of |N(A) \\ A| / |A|; exhaustive for at most 20 vertices."""
    n = g.num_vertices
    nbrs = [g.neighbors(v) for v in range(n)]
    gamma = max_subset / n if n else 0.0
    if not g.edges or n == 0:
        return ExpansionReport(gamma, 0.0, True, (0,) if n else (), seed)
    best = (np.inf, ())

    def score(A):
        Aset = set(A)
        N = set().union(*(nbrs[v] for v in A)) - Aset
        return len(N) / len(A)

    if n <= 20:
        for size in range(1, max_subset + 1):
            for A in itertools.combinations(range(n), size):
                s = score(A)
                if s < best[0]:
                    best = (s, A)
        return ExpansionReport(gamma, float(best[0]), True, tuple(best[1]), seed)
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        size = int(rng.integers(1, max_subset + 1))
        A = tuple(sorted(rng.choice(n, size=size, replace=False).tolist()))
        s = score(A)
        if s < best[0]:
            best = (s, A)
    return ExpansionReport(gamma, float(best[0]), False, tuple(best[1]), seed)
