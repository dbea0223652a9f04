"""Translation-invariant codes on tori in the polynomial (Laurent monomial) representation.

A stabilizer matrix S is N x M: entry S[I][a] is a GF(2) Laurent polynomial and check
(c, a) acts on bit (c + e mod L, I) for every monomial x^e of S[I][a].  Cells are
ordered row-major over (c_1, ..., c_D) and the unit-cell index runs innermost.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .code import ClassicalCode
from .gf2 import Gf2Matrix
from .groups import CodeAction, PermGroupAction

Monomial = tuple[int, ...]


class Poly:
    """GF(2) Laurent polynomial in a fixed number of variables; a set of exponent vectors."""

    __slots__ = ("terms", "nvars")

    def __init__(self, terms: Iterable[Sequence[int]] = (), nvars: int = 0):
        acc: set[Monomial] = set()
        for t in terms:
            t = tuple(int(e) for e in t)
            if len(t) != nvars:
                raise ValueError(f"monomial {t} does not have {nvars} exponents")
            acc ^= {t}
        self.terms = frozenset(acc)
        self.nvars = nvars

    @classmethod
    def zero(cls, nvars: int) -> Poly:
        return cls((), nvars)

    @classmethod
    def one(cls, nvars: int) -> Poly:
        return cls([(0,) * nvars], nvars)

    @classmethod
    def monomial(cls, exps: Sequence[int]) -> Poly:
        return cls([tuple(exps)], len(exps))

    @classmethod
    def var(cls, i: int, nvars: int, power: int = 1) -> Poly:
        e = [0] * nvars
        e[i] = power
        return cls([e], nvars)

    def _check(self, other: Poly) -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other: Poly) -> Poly:
        self._check(other)
        return _from_set(self.terms ^ other.terms, self.nvars)

    def __mul__(self, other: Poly) -> Poly:
        self._check(other)
        acc: set[Monomial] = set()
        for s in self.terms:
            for t in other.terms:
                acc ^= {tuple(a + b for a, b in zip(s, t))}
        return _from_set(acc, self.nvars)

    def __pow__(self, k: int) -> Poly:
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials have inverses")
            (t,) = self.terms
            return Poly.monomial([e * k for e in t])
        out = Poly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.terms, self.nvars))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def conj(self) -> Poly:
        """Replace every variable by its inverse."""
        return _from_set({tuple(-e for e in t) for t in self.terms}, self.nvars)

    def shift(self, exps: Sequence[int]) -> Poly:
        return _from_set({tuple(a + b for a, b in zip(t, exps)) for t in self.terms}, self.nvars)

    def embed(self, nvars: int, offset: int) -> Poly:
        """Same polynomial with its variables placed at positions offset.. of a larger ring."""
        out = set()
        for t in self.terms:
            e = [0] * nvars
            e[offset : offset + self.nvars] = t
            out.add(tuple(e))
        return _from_set(out, nvars)

    def substitute(self, values: Sequence[Poly], nvars: int) -> Poly:
        """Evaluate at x_i -> values[i] (polynomials in nvars variables); negative powers need monomials."""
        out = Poly.zero(nvars)
        for t in self.terms:
            term = Poly.one(nvars)
            for v, e in zip(values, t):
                if e:
                    term = term * (v**e)
            out = out + term
        return out

    def reduce(self, periods: Sequence[int]) -> Poly:
        return _from_set(_reduce_terms(self.terms, periods), self.nvars)

    def equal_up_to_unit(self, other: Poly) -> bool:
        """True if self == x^e * other for some monomial x^e."""
        self._check(other)
        if len(self) != len(other):
            return False
        if not self.terms:
            return True
        a = min(self.terms)
        b = min(other.terms)
        return other.shift([x - y for x, y in zip(a, b)]) == self

    def to_str(self, variables: Sequence[str] | None = None) -> str:
        if variables is None:
            variables = default_variables(self.nvars)
        if not self.terms:
            return "0"
        parts = []
        for t in sorted(self.terms, key=lambda t: (sum(abs(e) for e in t), [-e for e in t])):
            facs = []
            for v, e in zip(variables, t):
                if e == 1:
                    facs.append(v)
                elif e == -1:
                    facs.append(f"{v}bar")
                elif e != 0:
                    facs.append(f"{v}^{e}")
            parts.append("*".join(facs) if facs else "1")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self.to_str()!r})"


def _from_set(terms, nvars: int) -> Poly:
    p = Poly.__new__(Poly)
    p.terms = frozenset(terms)
    p.nvars = nvars
    return p


def _reduce_terms(terms: Iterable[Monomial], periods: Sequence[int]) -> set[Monomial]:
    acc: set[Monomial] = set()
    for t in terms:
        acc ^= {tuple(e % L for e, L in zip(t, periods))}
    return acc


def default_variables(nvars: int) -> tuple[str, ...]:
    base = "xyzuvw"
    if nvars <= len(base):
        return tuple(base[:nvars])
    return tuple(f"x{i + 1}" for i in range(nvars))


# -- text syntax -------------------------------------------------------------
_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|(\*)|(\+)|(\()|(\))|(-))")


def parse_poly(text: str, variables: Sequence[str]) -> Poly:
    """Parse e.g. ``1 + x^2*y + xbar`` or ``(1+x)(1+y)``; ``xy`` means x*y for one-letter names."""
    variables = tuple(variables)
    nv = len(variables)
    tokens: list[tuple[str, str]] = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial {text!r} at position {pos}")
        pos = m.end()
        num, name, caret, star, plus, lp, rp, minus = m.groups()
        if num is not None:
            tokens.append(("num", num))
        elif name is not None:
            tokens.extend(_split_name(name, variables, text))
        elif caret:
            tokens.append(("^", caret))
        elif star:
            tokens.append(("*", star))
        elif plus:
            tokens.append(("+", plus))
        elif lp:
            tokens.append(("(", lp))
        elif rp:
            tokens.append((")", rp))
        else:
            tokens.append(("-", minus))
    idx = 0

    def peek():
        return tokens[idx] if idx < len(tokens) else ("end", "")

    def take(kind):
        nonlocal idx
        tok = peek()
        if tok[0] != kind:
            raise ValueError(f"expected {kind!r} in {text!r}, found {tok[1]!r}")
        idx += 1
        return tok

    def expr() -> Poly:
        out = term()
        while peek()[0] == "+":
            take("+")
            out = out + term()
        return out

    def term() -> Poly:
        out = factor()
        while peek()[0] in ("*", "num", "var", "("):
            if peek()[0] == "*":
                take("*")
            out = out * factor()
        return out

    def factor() -> Poly:
        base = atom()
        if peek()[0] == "^":
            take("^")
            sign = 1
            if peek()[0] == "-":
                take("-")
                sign = -1
            k = sign * int(take("num")[1])
            base = base**k
        return base

    def atom() -> Poly:
        kind, val = peek()
        if kind == "num":
            take("num")
            return Poly.one(nv) if int(val) % 2 else Poly.zero(nv)
        if kind == "var":
            take("var")
            i, power = val
            return Poly.var(i, nv, power)
        if kind == "(":
            take("(")
            out = expr()
            take(")")
            return out
        raise ValueError(f"unexpected token {val!r} in {text!r}")

    if not tokens:
        raise ValueError("empty polynomial")
    out = expr()
    if idx != len(tokens):
        raise ValueError(f"trailing input in polynomial {text!r}")
    return out


def _split_name(name: str, variables: tuple[str, ...], text: str) -> list:
    """Resolve an identifier into variable tokens: exact names, '<v>bar', or runs of one-letter names."""
    out = []
    rest = name
    while rest:
        for v in sorted(variables, key=len, reverse=True):
            if rest.startswith(v + "bar"):
                out.append(("var", (variables.index(v), -1)))
                rest = rest[len(v) + 3 :]
                break
            if rest.startswith(v):
                out.append(("var", (variables.index(v), 1)))
                rest = rest[len(v) :]
                break
        else:
            raise ValueError(f"unknown variable in {name!r} (variables {variables}) while parsing {text!r}")
    return out


# -- stabilizer matrices -----------------------------------------------------
@dataclass(frozen=True, eq=False)
class PolyStabilizerMatrix:
    """N x M matrix of polynomials in D variables, optionally with an M x Q redundancy matrix."""

    entries: tuple[tuple[Poly, ...], ...]
    variables: tuple[str, ...]
    periods: tuple[int, ...] | None = None
    redundancies: tuple[tuple[Poly, ...], ...] | None = None

    def __post_init__(self):
        entries = tuple(tuple(row) for row in self.entries)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "variables", tuple(self.variables))
        D = len(self.variables)
        if not entries or any(len(r) != len(entries[0]) for r in entries):
            raise ValueError("stabilizer matrix must be a non-empty rectangular array")
        for row in entries:
            for p in row:
                if p.nvars != D:
                    raise ValueError(f"entry {p} has {p.nvars} variables, expected {D}")
        if self.redundancies is not None:
            R = tuple(tuple(r) for r in self.redundancies)
            object.__setattr__(self, "redundancies", R)
            if len(R) != self.M:
                raise ValueError("redundancy matrix needs one row per check")
        if self.periods is not None:
            object.__setattr__(self, "periods", tuple(int(L) for L in self.periods))
            if len(self.periods) != D:
                raise ValueError("one period per variable required")

    @property
    def D(self) -> int:
        return len(self.variables)

    @property
    def N(self) -> int:
        return len(self.entries)

    @property
    def M(self) -> int:
        return len(self.entries[0])

    @property
    def Q(self) -> int:
        if not self.redundancies:
            return 0
        return len(self.redundancies[0])

    @classmethod
    def from_strings(cls, rows: Sequence[Sequence[str]], variables: Sequence[str], periods=None, redundancies=None):
        ent = [[parse_poly(s, variables) for s in row] for row in rows]
        red = None if redundancies is None else [[parse_poly(s, variables) for s in row] for row in redundancies]
        return cls(tuple(map(tuple, ent)), tuple(variables), periods, None if red is None else tuple(map(tuple, red)))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolyStabilizerMatrix)
            and self.entries == other.entries
            and self.variables == other.variables
            and self.redundancies == other.redundancies
        )

    def to_strings(self) -> list[list[str]]:
        return [[p.to_str(self.variables) for p in row] for row in self.entries]

    def __repr__(self) -> str:
        return f"PolyStabilizerMatrix({self.to_strings()}, variables={self.variables})"


def poly(text: str, variables: Sequence[str] = ("x",)) -> PolyStabilizerMatrix:
    """Single-site, single-check matrix from a polynomial string."""
    return PolyStabilizerMatrix.from_strings([[text]], variables)


def _cells(periods: Sequence[int]) -> np.ndarray:
    return np.array(list(itertools.product(*[range(L) for L in periods])), dtype=np.int64).reshape(-1, len(periods))


def _cell_index(coords: np.ndarray, periods: Sequence[int]) -> np.ndarray:
    idx = np.zeros(coords.shape[0], dtype=np.int64)
    for d, L in enumerate(periods):
        idx = idx * L + np.mod(coords[:, d], L)
    return idx


def instantiate_matrix(P: Sequence[Sequence[Poly]], periods: Sequence[int]) -> Gf2Matrix:
    """Rows (cell, I), columns (cell, a); entry 1 where (c + e, I) lies in column (c, a)."""
    periods = tuple(int(L) for L in periods)
    if any(L < 1 for L in periods):
        raise ValueError("periods must be positive")
    N, M = len(P), len(P[0])
    cells = _cells(periods)
    C = cells.shape[0]
    dense = np.zeros((C * N, C * M), dtype=np.uint8)
    cols = np.arange(C)
    for I in range(N):
        for a in range(M):
            for t in P[I][a].terms:
                rows = _cell_index(cells + np.array(t, dtype=np.int64), periods)
                np.bitwise_xor.at(dense, (rows * N + I, cols * M + a), 1)
    return Gf2Matrix.from_dense(dense)


def instantiate(S: PolyStabilizerMatrix, periods: Sequence[int] | None = None, name: str = "") -> ClassicalCode:
    if periods is None:
        periods = S.periods
    if periods is None:
        raise ValueError("no periods supplied")
    periods = tuple(int(L) for L in periods)
    if len(periods) != S.D:
        raise ValueError(f"need {S.D} periods, got {len(periods)}")
    delta = instantiate_matrix(S.entries, periods)
    R = None
    if S.redundancies is not None and S.Q:
        R = instantiate_matrix(S.redundancies, periods)
    return ClassicalCode(delta, R, name=name or f"poly{periods}")


def poly_transpose(S: PolyStabilizerMatrix) -> PolyStabilizerMatrix:
    """S^dagger: transpose with every exponent negated (bits and checks exchanged)."""
    ent = tuple(tuple(S.entries[I][a].conj() for I in range(S.N)) for a in range(S.M))
    return PolyStabilizerMatrix(ent, S.variables, S.periods)


def transpose_bijection(S: PolyStabilizerMatrix, periods: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """instantiate(S^dagger) equals transpose(instantiate(S)) exactly; the maps are identities."""
    C = int(np.prod(periods))
    return np.arange(C * S.M), np.arange(C * S.N)


# -- products ----------------------------------------------------------------
def _joint_variables(parts: Sequence[PolyStabilizerMatrix]) -> tuple[str, ...]:
    names = [v for p in parts for v in p.variables]
    if len(set(names)) == len(names):
        return tuple(names)
    return default_variables(len(names))


def _joint_periods(parts):
    if all(p.periods is not None for p in parts):
        return tuple(L for p in parts for L in p.periods)
    return None


def _embed_all(parts):
    D = sum(p.D for p in parts)
    out, off = [], 0
    for p in parts:
        out.append([[q.embed(D, off) for q in row] for row in p.entries])
        off += p.D
    return out, D


def poly_tensor(A: PolyStabilizerMatrix, B: PolyStabilizerMatrix) -> PolyStabilizerMatrix:
    """Checks (I', b) with entries delta_{I I'} S^B_{Jb}, then (a, J') with delta_{J J'} S^A_{Ia}; redundancies (a, b)."""
    (EA, EB), D = _embed_all([A, B])
    zero = Poly.zero(D)
    NA, NB, MA, MB = A.N, B.N, A.M, B.M
    ent = [[zero] * (NA * MB + MA * NB) for _ in range(NA * NB)]
    for I in range(NA):
        for J in range(NB):
            for b in range(MB):
                ent[I * NB + J][I * MB + b] = EB[J][b]
            for a in range(MA):
                ent[I * NB + J][NA * MB + a * NB + J] = EA[I][a]
    red = [[zero] * (MA * MB) for _ in range(NA * MB + MA * NB)]
    for a in range(MA):
        for b in range(MB):
            for I in range(NA):
                red[I * MB + b][a * MB + b] = EA[I][a]
            for J in range(NB):
                red[NA * MB + a * NB + J][a * MB + b] = EB[J][b]
    return PolyStabilizerMatrix(tuple(map(tuple, ent)), _joint_variables([A, B]), _joint_periods([A, B]), tuple(map(tuple, red)))


def poly_check(A: PolyStabilizerMatrix, B: PolyStabilizerMatrix) -> PolyStabilizerMatrix:
    """S_{(IJ)(ab)} = S^A_{Ia} S^B_{Jb}."""
    (EA, EB), D = _embed_all([A, B])
    ent = [[EA[I][a] * EB[J][b] for a in range(A.M) for b in range(B.M)] for I in range(A.N) for J in range(B.N)]
    return PolyStabilizerMatrix(tuple(map(tuple, ent)), _joint_variables([A, B]), _joint_periods([A, B]))


def poly_cubic(A: PolyStabilizerMatrix, B: PolyStabilizerMatrix, C: PolyStabilizerMatrix) -> PolyStabilizerMatrix:
    """Check products on the AB, AC and BC planes; three redundancies per (a, b, c) as in the flat cubic product."""
    (EA, EB, EC), D = _embed_all([A, B, C])
    zero = Poly.zero(D)
    NA, NB, NC, MA, MB, MC = A.N, B.N, C.N, A.M, B.M, C.M
    off_ac = MA * MB * NC
    off_bc = off_ac + MA * NB * MC
    mtot = off_bc + NA * MB * MC
    ent = [[zero] * mtot for _ in range(NA * NB * NC)]
    for I, J, K in itertools.product(range(NA), range(NB), range(NC)):
        row = ent[(I * NB + J) * NC + K]
        for a, b in itertools.product(range(MA), range(MB)):
            row[(a * MB + b) * NC + K] = EA[I][a] * EB[J][b]
        for a, c in itertools.product(range(MA), range(MC)):
            row[off_ac + (a * NB + J) * MC + c] = EA[I][a] * EC[K][c]
        for b, c in itertools.product(range(MB), range(MC)):
            row[off_bc + (I * MB + b) * MC + c] = EB[J][b] * EC[K][c]
    red = [[zero] * (3 * MA * MB * MC) for _ in range(mtot)]
    for a, b, c in itertools.product(range(MA), range(MB), range(MC)):
        base = ((a * MB + b) * MC + c) * 3
        for K in range(NC):  # E_C into AB
            red[(a * MB + b) * NC + K][base + 1] = EC[K][c]
            red[(a * MB + b) * NC + K][base + 2] = EC[K][c]
        for J in range(NB):  # E_B into AC
            red[off_ac + (a * NB + J) * MC + c][base + 0] = EB[J][b]
            red[off_ac + (a * NB + J) * MC + c][base + 2] = EB[J][b]
        for I in range(NA):  # E_A into BC
            red[off_bc + (I * MB + b) * MC + c][base + 0] = EA[I][a]
            red[off_bc + (I * MB + b) * MC + c][base + 1] = EA[I][a]
    return PolyStabilizerMatrix(
        tuple(map(tuple, ent)), _joint_variables([A, B, C]), _joint_periods([A, B, C]), tuple(map(tuple, red))
    )


def product_bijection(cells: Sequence[int], counts: Sequence[int], flat_offset: int = 0, poly_offset: int = 0, poly_stride: int | None = None) -> np.ndarray:
    """Map flat product labels to instantiated polynomial labels for one block.

    A block is labelled by one (cell_f, X_f) per factor, X_f < counts[f].  The flat product
    numbers it lexicographically over factors of cell_f * counts[f] + X_f; the polynomial
    product uses (cells lexicographic) * poly_stride + poly_offset + (X lexicographic).
    Returns perm with poly_index = perm[flat_index - flat_offset].
    """
    K = int(np.prod(counts))
    stride = K if poly_stride is None else poly_stride
    size = int(np.prod(cells)) * K
    out = np.empty(size, dtype=np.int64)
    ranges = [range(c * k) for c, k in zip(cells, counts)]
    for flat, labs in enumerate(itertools.product(*ranges)):
        cell = 0
        x = 0
        for lab, c, k in zip(labs, cells, counts):
            cell = cell * c + lab // k
            x = x * k + lab % k
        out[flat] = cell * stride + poly_offset + x
    return out


# -- CA product --------------------------------------------------------------
def ca_product(SA: PolyStabilizerMatrix, SB: PolyStabilizerMatrix) -> PolyStabilizerMatrix:
    """Substitute x_b -> (sum_J S^B_{Jb}(y) x_b^J) into the entries of S^A.

    Implemented for N_B = 1 (x_b -> S^B_b(y) x_b) and for D_A = 1 with M_B = 1, where the
    sum over J places sublattice J of B at power J of the new variable.
    """
    if SB.M != SA.D:
        raise ValueError(f"CA product needs one check of S^B per direction of S^A (M_B={SB.M}, D_A={SA.D})")
    if SB.N != 1 and SA.D != 1:
        raise ValueError("CA product with several sites per cell of S^B is only defined here for one-dimensional S^A")
    D = SA.D + SB.D
    values = []
    for b in range(SA.D):
        xb = Poly.var(b, D)
        acc = Poly.zero(D)
        for J in range(SB.N):
            acc = acc + SB.entries[J][b].embed(D, SA.D) * (xb ** (J + 1))
        values.append(acc)
    ent = tuple(tuple(p.substitute(values, D) for p in row) for row in SA.entries)
    return PolyStabilizerMatrix(ent, _joint_variables([SA, SB]), _joint_periods([SA, SB]))


# -- modding out translations -------------------------------------------------
def mod_translations(S: PolyStabilizerMatrix, relation: Sequence[int] | str, eliminate: int | str, new_periods: Sequence[int] | None = None) -> PolyStabilizerMatrix:
    """Impose the monomial relation x^relation = 1 and eliminate one variable.

    ``relation`` is an exponent vector (or monomial string); its exponent on the eliminated
    variable must be +-1.  If S carries periods and ``new_periods`` are given, the quotient
    torus is checked to be exactly the torus with the new periods.
    """
    if isinstance(relation, str):
        p = parse_poly(relation, S.variables)
        if len(p) != 1:
            raise ValueError("relation must be a single monomial")
        (relation,) = p.terms
    rel = tuple(int(e) for e in relation)
    if len(rel) != S.D:
        raise ValueError("relation has the wrong number of exponents")
    v = S.variables.index(eliminate) if isinstance(eliminate, str) else int(eliminate)
    s = rel[v]
    if s not in (1, -1):
        raise ValueError(f"eliminated variable has exponent {s} in the relation, must be +-1")
    # x_v^s * r = 1  =>  x_v = r^(-s)
    r = [e for i, e in enumerate(rel) if i != v]
    image = [-s * e for e in r]

    def sub(p: Poly) -> Poly:
        out = set()
        for t in p.terms:
            e = [x for i, x in enumerate(t) if i != v]
            e = tuple(x + t[v] * y for x, y in zip(e, image))
            out ^= {e}
        return _from_set(out, S.D - 1)

    ent = tuple(tuple(sub(p) for p in row) for row in S.entries)
    red = None if S.redundancies is None else tuple(tuple(sub(p) for p in row) for row in S.redundancies)
    variables = tuple(x for i, x in enumerate(S.variables) if i != v)
    periods = None
    if S.periods is not None:
        if new_periods is None:
            new_periods = [L for i, L in enumerate(S.periods) if i != v]
        check_quotient_periods(S.periods, rel, v, new_periods)
        periods = tuple(int(L) for L in new_periods)
    elif new_periods is not None:
        periods = tuple(int(L) for L in new_periods)
    return PolyStabilizerMatrix(ent, variables, periods, red)


def check_quotient_periods(periods: Sequence[int], relation: Sequence[int], v: int, new_periods: Sequence[int]) -> None:
    """Z^D / (periods, relation) must equal the torus with new_periods after eliminating variable v."""
    periods = [int(L) for L in periods]
    new = [int(L) for L in new_periods]
    s = relation[v]
    image = [-s * e for i, e in enumerate(relation) if i != v]
    keep = [L for i, L in enumerate(periods) if i != v]
    if len(new) != len(keep):
        raise ValueError("wrong number of new periods")
    # the image lattice is generated by L_j e_j (j != v) and w = L_v * image
    w = [periods[v] * e for e in image]
    ok = all(L % Lp == 0 for L, Lp in zip(keep, new)) and all(x % Lp == 0 for x, Lp in zip(w, new))
    # order of w in Z^{D-1}/(keep) decides the index of the image lattice
    order = 1
    for x, L in zip(w, keep):
        order = math.lcm(order, L // math.gcd(x % L, L) if x % L else 1)
    if not ok or math.prod(new) * order != math.prod(keep):
        raise ValueError(f"periods {tuple(new)} are inconsistent with the relation on the torus {tuple(periods)}")


def quotient_cell_map(periods: Sequence[int], relation: Sequence[int], v: int, new_periods: Sequence[int]) -> np.ndarray:
    """Cell of the reduced torus reached by each cell of the original torus under the elimination."""
    s = relation[v]
    image = np.array([-s * e for i, e in enumerate(relation) if i != v], dtype=np.int64)
    cells = _cells(periods)
    keep = np.delete(cells, v, axis=1) + np.outer(cells[:, v], image)
    return _cell_index(keep, new_periods)


def translation_action(S: PolyStabilizerMatrix, periods: Sequence[int], shift: Sequence[int]) -> CodeAction:
    """Action of the cyclic group generated by translation by ``shift`` on bits, checks and redundancies."""
    periods = tuple(int(L) for L in periods)
    shift = np.array(shift, dtype=np.int64)
    order = 1
    for x, L in zip(shift, periods):
        order = math.lcm(order, L // math.gcd(int(x) % L, L) if int(x) % L else 1)
    cells = _cells(periods)

    def perms(per_cell: int) -> PermGroupAction:
        out = np.empty((order, cells.shape[0] * per_cell), dtype=np.int64)
        for t in range(order):
            tgt = _cell_index(cells + t * shift, periods)
            out[t] = (tgt[:, None] * per_cell + np.arange(per_cell)[None, :]).ravel()
        return PermGroupAction(out)

    reds = perms(S.Q) if S.redundancies is not None and S.Q else None
    return CodeAction(perms(S.N), perms(S.M), reds)


def newman_moore_matrix(text: str = "1 + x + y") -> PolyStabilizerMatrix:
    return poly(text, ("x", "y"))


def newman_moore(L: int, text: str = "1 + x + y") -> ClassicalCode:
    """Triangle-check code on the L x L torus (default check 1 + x + y)."""
    return instantiate(newman_moore_matrix(text), (L, L), name=f"NM_{L}")


def ising_matrix(var: str = "x") -> PolyStabilizerMatrix:
    return poly(f"1 + {var}", (var,))
