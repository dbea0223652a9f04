"""Classical codes, their parameters, and the transforms that act on them.

Orientation: ``delta`` is n x m (bits x checks); column a lists the bits checked by a.
The parity-check matrix is ``H = delta.T``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .complex import ChainComplex
from .gf2 import Echelon, Gf2Basis, Gf2Matrix, as_matrix, nullspace_basis, rank
from .groups import CodeAction, PermGroupAction


@dataclass(frozen=True, eq=False)
class ClassicalCode:
    delta: Gf2Matrix
    redundancy_gens: Gf2Matrix | None = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "delta", as_matrix(self.delta))
        if self.redundancy_gens is not None:
            R = as_matrix(self.redundancy_gens)
            object.__setattr__(self, "redundancy_gens", R)
            if R.rows != self.m:
                raise ValueError(f"redundancy generators have {R.rows} rows but the code has {self.m} checks")
            if not (self.delta @ R).is_zero():
                raise ValueError("delta . R != 0: redundancy generators are not redundancies")

    @property
    def n(self) -> int:
        return self.delta.rows

    @property
    def m(self) -> int:
        return self.delta.cols

    @property
    def r(self) -> int:
        return 0 if self.redundancy_gens is None else self.redundancy_gens.cols

    @property
    def H(self) -> Gf2Matrix:
        return self.delta.T

    @cached_property
    def rank(self) -> int:
        return rank(self.delta)

    @property
    def k(self) -> int:
        return self.n - self.rank

    def max_weights(self) -> tuple[int, int]:
        """(max bit degree, max check weight)."""
        d = self.delta.dense
        col = int(d.sum(axis=0).max()) if self.m else 0
        row = int(d.sum(axis=1).max()) if self.n and self.m else 0
        return row, col

    def complex(self) -> ChainComplex:
        """V_1 (checks) -> V_0 (bits), extended by V_2 when redundancies are attached."""
        if self.redundancy_gens is None:
            return ChainComplex([self.n, self.m], [self.delta], ("bits", "checks"))
        return ChainComplex(
            [self.n, self.m, self.r], [self.delta, self.redundancy_gens], ("bits", "checks", "redundancies")
        )

    def with_redundancies(self, R) -> ClassicalCode:
        return ClassicalCode(self.delta, as_matrix(R), self.name)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClassicalCode):
            return NotImplemented
        same_r = (self.redundancy_gens is None and other.redundancy_gens is None) or (
            self.redundancy_gens is not None
            and other.redundancy_gens is not None
            and self.redundancy_gens == other.redundancy_gens
        )
        return self.delta == other.delta and same_r

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"ClassicalCode{label}(n={self.n}, m={self.m}, r={self.r})"


def code_from_checks(n: int, supports, name: str = "") -> ClassicalCode:
    """Build a code from a list of check supports (lists of bit indices)."""
    dense = np.zeros((n, len(supports)), dtype=np.uint8)
    for a, supp in enumerate(supports):
        for i in supp:
            dense[i, a] ^= 1
    return ClassicalCode(Gf2Matrix.from_dense(dense), name=name)


def from_parity_check(H, name: str = "") -> ClassicalCode:
    return ClassicalCode(as_matrix(H).T, name=name)


def repetition_code(n: int) -> ClassicalCode:
    """Open-chain repetition code: checks (i, i+1)."""
    return code_from_checks(n, [[i, i + 1] for i in range(n - 1)], name=f"rep{n}")


def ising_cycle(L: int) -> ClassicalCode:
    """1D Ising model on a ring: bit i, check i acting on (i, i+1 mod L)."""
    if L < 2:
        raise ValueError("an Ising ring needs L >= 2")
    dense = np.zeros((L, L), dtype=np.uint8)
    for a in range(L):
        dense[a, a] ^= 1
        dense[(a + 1) % L, a] ^= 1
    return ClassicalCode(Gf2Matrix.from_dense(dense), name=f"ising{L}")


def random_ldpc(n: int, m: int, rng: np.random.Generator, col_weight: int = 2, max_check_weight: int = 4) -> ClassicalCode:
    """Random sparse code: each check picks 2..max_check_weight distinct bits."""
    supports = []
    for _ in range(m):
        w = int(rng.integers(2, min(max_check_weight, n) + 1)) if n >= 2 else n
        supports.append(sorted(rng.choice(n, size=w, replace=False).tolist()))
    return code_from_checks(n, supports, name="random")


# -- parameters --------------------------------------------------------------
@dataclass(frozen=True)
class CodeParams:
    n: int
    m: int
    k: int
    d: int | None
    d_status: str  # exact | upper_bound | lower_bound_only

    def as_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "d": self.d}


def params(c: ClassicalCode, distance_budget: int | None = None, time_budget_ms: float | None = None) -> CodeParams:
    """[n, k, d] with k by rank and d by weight-ordered search (capped by distance_budget)."""
    from .diagnostics import min_weight_vector

    k = c.k
    if k == 0:
        return CodeParams(c.n, c.m, 0, None, "exact")
    if c.m == 0:
        return CodeParams(c.n, c.m, k, 1, "exact")
    res = min_weight_vector(c.H, None, wmax=distance_budget, time_budget_ms=time_budget_ms)
    if res.exact:
        return CodeParams(c.n, c.m, k, res.weight, "exact")
    if res.weight is not None:
        return CodeParams(c.n, c.m, k, res.weight, "upper_bound")
    return CodeParams(c.n, c.m, k, res.lower_bound, "lower_bound_only")


def logical_basis(c: ClassicalCode) -> Gf2Basis:
    """Basis of ker(delta^T): bit-flip patterns that violate no check."""
    return nullspace_basis(c.H)


def redundancy_basis(c: ClassicalCode) -> Gf2Basis:
    """Basis of ker(delta): sets of checks whose product is the identity."""
    return nullspace_basis(c.delta)


@dataclass(frozen=True)
class RedundancySearch:
    gens: Gf2Matrix
    complete: bool
    weights: tuple[int, ...]


def search_low_weight_redundancies(
    c: ClassicalCode, wmax: int, node_budget: int = 2_000_000
) -> RedundancySearch:
    """Redundancies of weight <= wmax among connected check subsets, reduced to an independent set."""
    from .diagnostics import connected_zero_sum_subsets

    check_cols = c.delta.column_ints()
    adjacency = _check_adjacency(c)
    found, complete = connected_zero_sum_subsets(check_cols, adjacency, wmax, node_budget)
    ech = Echelon(c.m)
    kept = []
    for subset in found:  # weight-ordered, lexicographic within a weight
        v = 0
        for a in subset:
            v |= 1 << a
        if ech.add(v):
            kept.append(subset)
    dense = np.zeros((c.m, len(kept)), dtype=np.uint8)
    for j, subset in enumerate(kept):
        dense[list(subset), j] = 1
    return RedundancySearch(Gf2Matrix.from_dense(dense), complete, tuple(len(s) for s in kept))


def low_weight_redundancies(c: ClassicalCode, wmax: int, node_budget: int = 2_000_000) -> Gf2Matrix:
    res = search_low_weight_redundancies(c, wmax, node_budget)
    if not res.complete:
        warnings.warn("low_weight_redundancies: search budget exceeded, result is partial", stacklevel=2)
    return res.gens


def _check_adjacency(c: ClassicalCode) -> list[list[int]]:
    d = c.delta.dense.astype(np.int64)
    share = (d.T @ d) > 0
    np.fill_diagonal(share, False)
    return [np.flatnonzero(share[a]).tolist() for a in range(c.m)]


# -- transforms --------------------------------------------------------------
def transpose_code(c: ClassicalCode) -> ClassicalCode:
    """Exchange bits and checks."""
    return ClassicalCode(c.delta.T, name=f"{c.name}^T" if c.name else "")


def dual_code(c: ClassicalCode) -> ClassicalCode:
    """Checks of the output are a basis of the codewords of c."""
    L = logical_basis(c)
    return ClassicalCode(L.vectors.T if len(L) else Gf2Matrix.zeros(c.n, 0), name=f"{c.name}^perp" if c.name else "")


def kw_dual(c: ClassicalCode) -> ClassicalCode:
    """Kramers-Wannier dual: the bottom two levels of the reversed 2-complex.

    Bits of the output are the redundancy generators of c, checks are the checks of c,
    and the output carries delta^T as its own redundancy generators.
    """
    if c.redundancy_gens is None:
        raise ValueError("kw_dual needs explicit redundancy generators")
    R = c.redundancy_gens
    return ClassicalCode(R.T, c.delta.T, name=f"{c.name}^KW" if c.name else "")


def _infer_perms(supports: list[frozenset], bit_perms: np.ndarray, what: str) -> np.ndarray:
    """Check permutation induced by bit permutations (supports must be distinct)."""
    index: dict[frozenset, int] = {}
    for a, s in enumerate(supports):
        if s in index:
            raise ValueError(f"{what} {index[s]} and {a} have identical supports; pass explicit {what} permutations")
        index[s] = a
    out = np.empty((bit_perms.shape[0], len(supports)), dtype=np.int64)
    for g, p in enumerate(bit_perms):
        for a, s in enumerate(supports):
            img = frozenset(int(p[i]) for i in s)
            if img not in index:
                raise ValueError(f"action is not a symmetry: element {g} maps {what} {a} outside the code")
            out[g, a] = index[img]
    return out


def validate_action(c: ClassicalCode, action: CodeAction) -> CodeAction:
    """Check that the action is a code symmetry and fill in the check permutations if missing."""
    if action.bits.size != c.n:
        raise ValueError(f"bit action has {action.bits.size} points but the code has {c.n} bits")
    if not action.bits.is_closed():
        raise ValueError("bit permutations are not closed under composition")
    d = c.delta.dense
    checks = action.checks
    if checks is None:
        supports = [frozenset(c.delta.column_support(a)) for a in range(c.m)]
        checks = PermGroupAction(_infer_perms(supports, action.bits.perms, "check"))
    if checks.order != action.bits.order or checks.size != c.m:
        raise ValueError("check action does not match the bit action or the code")
    for g in range(action.order):
        pb, pc = action.bits.perms[g], checks.perms[g]
        img = np.zeros_like(d)
        img[np.ix_(pb, pc)] = d
        if not np.array_equal(img, d):
            bad = int(np.flatnonzero((img != d).any(axis=0))[0])
            raise ValueError(f"action is not a symmetry: element {g}, witness check {bad}")
    reds = action.redundancies
    if c.redundancy_gens is not None and reds is None:
        R = c.redundancy_gens
        supports = [frozenset(R.column_support(j)) for j in range(R.cols)]
        reds = PermGroupAction(_infer_perms(supports, checks.perms, "redundancy"))
    if reds is not None and c.redundancy_gens is not None:
        R = c.redundancy_gens.dense
        for g in range(action.order):
            img = np.zeros_like(R)
            img[np.ix_(checks.perms[g], reds.perms[g])] = R
            if not np.array_equal(img, R):
                raise ValueError(f"action is not a symmetry of the redundancies (element {g})")
    return CodeAction(action.bits, checks, reds)


def _quotient_incidence(M: np.ndarray, row_orbits: np.ndarray, col_orbits: np.ndarray, what: str) -> np.ndarray:
    """Rows and columns replaced by orbit classes, supports counted mod 2, checked across representatives."""
    nr = int(row_orbits.max()) + 1 if row_orbits.size else 0
    nc = int(col_orbits.max()) + 1 if col_orbits.size else 0
    out = np.zeros((nr, nc), dtype=np.uint8)
    seen = np.zeros(nc, dtype=bool)
    for a in range(M.shape[1]):
        cls = np.zeros(nr, dtype=np.int64)
        np.add.at(cls, row_orbits[M[:, a] == 1], 1)
        cls %= 2
        o = col_orbits[a]
        if not seen[o]:
            out[:, o] = cls
            seen[o] = True
        elif not np.array_equal(out[:, o], cls):
            raise ValueError(f"inconsistent orbit supports for {what} orbit {o}")
    return out


@dataclass(frozen=True)
class Quotient:
    code: ClassicalCode
    bit_orbits: np.ndarray
    check_orbits: np.ndarray
    redundancy_orbits: np.ndarray | None


def mod_out_with_maps(c: ClassicalCode, action: CodeAction) -> Quotient:
    action = validate_action(c, action)
    bo = action.bits.orbits()
    co = action.checks.orbits()
    delta = _quotient_incidence(c.delta.dense, bo, co, "check")
    R = None
    ro = None
    if c.redundancy_gens is not None:
        ro = action.redundancies.orbits()
        R = _quotient_incidence(c.redundancy_gens.dense, co, ro, "redundancy")
        if ((delta.astype(np.int64) @ R) % 2).any():
            raise ValueError("quotient redundancies are not annihilated by the quotient checks")
    out = ClassicalCode(Gf2Matrix.from_dense(delta), None if R is None else Gf2Matrix.from_dense(R), name=f"{c.name}/G" if c.name else "")
    return Quotient(out, bo, co, ro)


def mod_out(c: ClassicalCode, action: CodeAction | PermGroupAction) -> ClassicalCode:
    """Identify bits (and checks) along the orbits of a symmetry group."""
    if isinstance(action, PermGroupAction):
        action = CodeAction(action)
    return mod_out_with_maps(c, action).code
