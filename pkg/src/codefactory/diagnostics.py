"""Minimum-weight search, energy barriers, soundness, strips and local minimality.

The searches enumerate supports that are connected in the relevant adjacency graph
(two columns are adjacent when they share a row).  A lightest vector with a given
property is always connected whenever the property is inherited by the connected
pieces of a vector, which holds for "lies in the kernel and is not excluded" and for
"locally minimal cycle".  Subsets are produced with the ESU scheme, so each connected
set is visited exactly once.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .gf2 import Echelon, as_matrix, solve


class _Budget:
    def __init__(self, time_budget_ms: float | None, node_budget: int | None):
        self.deadline = None if time_budget_ms is None else time.monotonic() + time_budget_ms / 1000.0
        self.nodes_left = node_budget
        self.exhausted = False
        self._tick = 0

    def spend(self) -> bool:
        """Account for one search node; False once the budget is gone."""
        if self.exhausted:
            return False
        if self.nodes_left is not None:
            self.nodes_left -= 1
            if self.nodes_left < 0:
                self.exhausted = True
                return False
        self._tick += 1
        if self.deadline is not None and self._tick % 4096 == 0 and time.monotonic() > self.deadline:
            self.exhausted = True
            return False
        return True


def adjacency_from_columns(cols: Sequence[int], nrows: int) -> list[list[int]]:
    """Columns adjacent iff their row supports intersect."""
    by_row: list[list[int]] = [[] for _ in range(nrows)]
    for j, v in enumerate(cols):
        r = 0
        while v:
            if v & 1:
                by_row[r].append(j)
            v >>= 1
            r += 1
    adj: list[set[int]] = [set() for _ in cols]
    for members in by_row:
        for a in members:
            adj[a].update(members)
    return [sorted(s - {j}) for j, s in enumerate(adj)]


def _esu(
    n: int,
    adj: list[list[int]],
    kmax: int,
    cols: Sequence[int],
    max_col_weight: int,
    visit: Callable[[tuple[int, ...], int], None],
    budget: _Budget,
    only_size: int | None = None,
) -> bool:
    """Visit every connected subset of size <= kmax (or == only_size) with its XOR syndrome.

    Branches whose syndrome weight cannot be cleared by the remaining columns are pruned,
    which only drops subsets that could never reach a zero syndrome within the size cap.
    """
    target = kmax if only_size is None else only_size

    def rec(S: list[int], syn: int, ext: list[int], closed: set[int], root: int) -> bool:
        if not budget.spend():
            return False
        s = len(S)
        if only_size is None or s == only_size:
            visit(tuple(sorted(S)), syn)
        if s == target:
            return True
        if syn.bit_count() > (target - s) * max_col_weight:
            return True
        ext = list(ext)
        while ext:
            w = ext.pop()
            new_ext = ext + [u for u in adj[w] if u > root and u not in closed]
            if not rec(S + [w], syn ^ cols[w], new_ext, closed | set(adj[w]) | {w}, root):
                return False
        return True

    for v in range(n):
        ext = [u for u in adj[v] if u > v]
        if not rec([v], cols[v], ext, set(adj[v]) | {v}, v):
            return False
    return True


@dataclass(frozen=True)
class SearchResult:
    weight: int | None
    witness: np.ndarray | None
    exact: bool
    lower_bound: int
    status: str


def min_weight_vector(
    H,
    exclude=None,
    wmax: int | None = None,
    time_budget_ms: float | None = None,
    node_budget: int | None = None,
) -> SearchResult:
    """Lightest v with H v = 0 and v outside the column space of ``exclude``.

    Weight classes are searched in increasing order; within the first successful class
    the lexicographically smallest support is returned.  ``exact`` is True when the
    answer (including "no such vector") is certain.
    """
    H = as_matrix(H)
    n = H.cols
    cols = H.column_ints()
    ech = Echelon(n)
    if exclude is not None:
        ex = as_matrix(exclude)
        if ex.rows != n:
            raise ValueError("exclusion space lives in the wrong dimension")
        for v in ex.column_ints():
            ech.add(v)
    adj = adjacency_from_columns(cols, H.rows)
    cmax = max((c.bit_count() for c in cols), default=0)
    cap = n if wmax is None else min(wmax, n)
    budget = _Budget(time_budget_ms, node_budget)
    for w in range(1, cap + 1):
        best: list[tuple[int, ...]] = []

        def visit(S, syn):
            if syn == 0:
                v = 0
                for i in S:
                    v |= 1 << i
                if not ech.contains(v) and (not best or S < best[0]):
                    best[:] = [S]

        finished = _esu(n, adj, w, cols, cmax, visit, budget, only_size=w)
        if best:
            wit = np.zeros(n, dtype=np.uint8)
            wit[list(best[0])] = 1
            status = "exact" if finished else "upper_bound"
            return SearchResult(w, wit, finished, w if finished else 1, status)
        if not finished:
            return SearchResult(None, None, False, w, "budget_exhausted")
    if cap == n:
        return SearchResult(None, None, True, n + 1, "none")
    return SearchResult(None, None, False, cap + 1, "wmax_reached")


def connected_zero_sum_subsets(
    cols: Sequence[int], adj: list[list[int]], wmax: int, node_budget: int | None = None
) -> tuple[list[tuple[int, ...]], bool]:
    """All connected subsets of size <= wmax whose columns XOR to zero, weight then lex ordered."""
    cmax = max((c.bit_count() for c in cols), default=0)
    found: list[tuple[int, ...]] = []

    def visit(S, syn):
        if syn == 0:
            found.append(S)

    budget = _Budget(None, node_budget)
    complete = _esu(len(cols), adj, wmax, cols, cmax, visit, budget)
    found.sort(key=lambda s: (len(s), s))
    return found, complete


# -- energy barriers ---------------------------------------------------------
def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return z ^ (z >> 31)


@dataclass(frozen=True)
class BarrierProfile:
    F_values: tuple[int, ...]
    E_min: tuple[int, ...]
    exact: tuple[bool, ...]
    exhaustive_up_to: int
    soundness_hat: float | None
    seed: int

    def to_csv(self) -> str:
        lines = ["F,E_min,exact"]
        for F, E, ex in zip(self.F_values, self.E_min, self.exact):
            lines.append(f"{F},{E},{str(ex).lower()}")
        return "\n".join(lines) + "\n"


def _exhaustive_all(c, chunk: int = 1 << 20) -> np.ndarray:
    """E_min for every weight 0..n by scanning all 2^n configurations."""
    n = c.n
    masks = np.array(c.delta.column_ints(), dtype=np.uint64)
    best = np.full(n + 1, np.iinfo(np.int64).max, dtype=np.int64)
    total = 1 << n
    for start in range(0, total, chunk):
        states = np.arange(start, min(total, start + chunk), dtype=np.uint64)
        energy = np.zeros(states.size, dtype=np.int64)
        for mask in masks:
            energy += np.bitwise_count(states & mask).astype(np.int64) & 1
        weight = np.bitwise_count(states).astype(np.int64)
        np.minimum.at(best, weight, energy)
    return best


def _exhaustive_weight(cols: list[int], n: int, F: int) -> int:
    best = None
    for S in itertools.combinations(range(n), F):
        syn = 0
        for i in S:
            syn ^= cols[i]
        e = syn.bit_count()
        if best is None or e < best:
            best = e
            if e == 0:
                break
    return 0 if best is None else best


def _anneal_weight(cols: list[int], n: int, F: int, seed: int, steps: int = 20000) -> int:
    rng = np.random.default_rng(_splitmix64(seed ^ (F * 0x9E3779B9)))
    current = rng.choice(n, size=F, replace=False).tolist()
    inside = set(current)
    syn = 0
    for i in current:
        syn ^= cols[i]
    e = syn.bit_count()
    best = e
    for step in range(steps):
        T = max(0.05, 2.0 * (1 - step / steps))
        a = current[int(rng.integers(F))]
        b = int(rng.integers(n))
        if b in inside:
            continue
        new_syn = syn ^ cols[a] ^ cols[b]
        ne = new_syn.bit_count()
        if ne <= e or rng.random() < math.exp(-(ne - e) / T):
            current[current.index(a)] = b
            inside.discard(a)
            inside.add(b)
            syn, e = new_syn, ne
            best = min(best, e)
    return best


def energy_barrier(
    c, F_max: int | None = None, seed: int = 0, combination_budget: int = 2_000_000, anneal_steps: int = 20000
) -> BarrierProfile:
    """E_min(F) = min over weight-F flip patterns of the number of violated checks."""
    n = c.n
    F_max = n if F_max is None else min(F_max, n)
    cols = c.H.column_ints()
    E: list[int] = []
    exact: list[bool] = []
    if n <= 24:
        table = _exhaustive_all(c)
        E = [int(table[F]) for F in range(F_max + 1)]
        exact = [True] * (F_max + 1)
    else:
        for F in range(F_max + 1):
            if math.comb(n, F) <= combination_budget:
                E.append(_exhaustive_weight(cols, n, F))
                exact.append(True)
            else:
                E.append(_anneal_weight(cols, n, F, seed, anneal_steps))
                exact.append(False)
    exhaustive_up_to = -1
    for F, ex in enumerate(exact):
        if not ex:
            break
        exhaustive_up_to = F
    ratios = [E[F] / F for F in range(1, F_max + 1)]
    kappa = min(ratios) if ratios else None
    return BarrierProfile(tuple(range(F_max + 1)), tuple(E), tuple(exact), exhaustive_up_to, kappa, seed)


@dataclass(frozen=True)
class SoundnessReport:
    kappa: float
    F_at: int | None
    exact: bool
    d: int | None
    d_status: str


def soundness(c, F_max: int | None = None, seed: int = 0, distance_budget: int | None = None) -> SoundnessReport:
    """min over 1 <= F <= min(F_max, d/2) of E_min(F)/F."""
    from .code import params

    if c.m == 0:
        return SoundnessReport(0.0, None, True, 1 if c.n else None, "exact")
    p = params(c, distance_budget)
    d = p.d if p.d is not None else c.n
    top = d // 2
    if F_max is not None:
        top = min(top, F_max)
    if top < 1:
        return SoundnessReport(math.inf, None, True, p.d, p.d_status)
    prof = energy_barrier(c, top, seed=seed)
    best, at = math.inf, None
    for F in range(1, top + 1):
        r = prof.E_min[F] / F
        if r < best:
            best, at = r, F
    return SoundnessReport(best, at, all(prof.exact[1 : top + 1]) and p.d_status == "exact", p.d, p.d_status)


# -- strips ------------------------------------------------------------------
@dataclass(frozen=True)
class StripReport:
    configuration: np.ndarray
    F: int
    E: int
    E_A: int
    boundary_cocycles: tuple[np.ndarray, ...]
    contractible: tuple[bool, ...]

    @property
    def non_contractible_count(self) -> int:
        return sum(not c for c in self.contractible)


def strip_config(A, B, flips_A, logical_B) -> StripReport:
    """Flip sigma_ij for i in flips_A and j in logical_B inside the tensor product A x B."""
    from .products import tensor_product

    fa = np.asarray(flips_A, dtype=np.uint8) % 2
    lb = np.asarray(logical_B, dtype=np.uint8) % 2
    if B.H.dot_vector(lb).any():
        raise ValueError("logical_B violates a check of B")
    prod = tensor_product(A, B)
    sigma = np.kron(fa, lb).astype(np.uint8)
    syndrome = prod.code.H.dot_vector(sigma)
    syn_A = A.H.dot_vector(fa)
    F = int(sigma.sum())
    E = int(syndrome.sum())
    E_A = int(syn_A.sum())
    if F != int(fa.sum()) * int(lb.sum()) or E != E_A * int(lb.sum()):
        raise AssertionError("strip energy does not factorise")  # pragma: no cover
    cocycles = []
    contractible = []
    Ht = prod.code.delta.T  # bits -> checks
    for a in np.flatnonzero(syn_A).tolist():
        v = np.zeros(prod.code.m, dtype=np.uint8)
        for j in np.flatnonzero(lb).tolist():
            v[prod.index_maps["checks_A"][(a, j)]] = 1
        cocycles.append(v)
        contractible.append(solve(Ht, v) is not None)
    return StripReport(sigma, F, E, E_A, tuple(cocycles), tuple(contractible))


# -- local minimality --------------------------------------------------------
@dataclass(frozen=True)
class LocalMinResult:
    d_LM: int | None
    witness: np.ndarray | None
    exact: bool
    status: str


def is_locally_minimal(c: int, plaquettes: Sequence[int]) -> bool:
    w = c.bit_count()
    return all((c ^ p).bit_count() >= w for p in plaquettes)


def locally_minimal_distance(cx, wmax: int, node_budget: int | None = 5_000_000) -> LocalMinResult:
    """Smallest cycle of V_1 that is not a boundary and cannot be shortened by one V_2 boundary."""
    if cx.depth < 1:
        raise ValueError("need a complex with at least one boundary map")
    d1 = cx.boundary(1)
    d2 = cx.boundary(2)
    cols = d1.column_ints()
    plaquettes = d2.column_ints()
    boundaries = Echelon(cx.dims[1], plaquettes)
    adj = adjacency_from_columns(cols, d1.rows)
    cmax = max((c.bit_count() for c in cols), default=0)
    budget = _Budget(None, node_budget)
    n = cx.dims[1]
    for w in range(1, min(wmax, n) + 1):
        best: list[tuple[int, ...]] = []

        def visit(S, syn):
            if syn:
                return
            v = 0
            for i in S:
                v |= 1 << i
            if boundaries.contains(v) or not is_locally_minimal(v, plaquettes):
                return
            if not best or S < best[0]:
                best[:] = [S]

        finished = _esu(n, adj, w, cols, cmax, visit, budget, only_size=w)
        if best:
            wit = np.zeros(n, dtype=np.uint8)
            wit[list(best[0])] = 1
            return LocalMinResult(w, wit, finished, "exact" if finished else "upper_bound")
        if not finished:
            return LocalMinResult(None, None, False, "budget_exhausted")
    return LocalMinResult(None, None, wmax >= n, "none_up_to_wmax")


def cycles_up_to(cx, wmax: int, max_combinations: int = 5_000_000) -> list[np.ndarray]:
    """Every nonzero c in ker(delta_1) with |c| <= wmax, by plain enumeration of supports."""
    d1 = cx.boundary(1)
    n = d1.cols
    total = sum(math.comb(n, w) for w in range(1, wmax + 1))
    if total > max_combinations:
        raise ValueError(f"{total} supports exceed the enumeration budget")
    cols = d1.column_ints()
    out = []
    for w in range(1, wmax + 1):
        for S in itertools.combinations(range(n), w):
            syn = 0
            for i in S:
                syn ^= cols[i]
            if syn == 0:
                v = np.zeros(n, dtype=np.uint8)
                v[list(S)] = 1
                out.append(v)
    return out
