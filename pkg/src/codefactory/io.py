"""Serialization: alist parity-check files, Graphviz DOT Tanner graphs and JSON code records."""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .code import ClassicalCode
from .gauge import CssCode, StabilizerCode
from .gf2 import Gf2Matrix

SCHEMA_VERSION = 1


class FormatError(ValueError):
    pass


# -- alist -------------------------------------------------------------------------
def to_alist(c: ClassicalCode) -> str:
    """MacKay alist of the parity-check matrix H = delta^T (n bits, m checks)."""
    d = c.delta.dense
    n, m = d.shape
    bit_checks = [np.flatnonzero(d[i]).tolist() for i in range(n)]
    check_bits = [np.flatnonzero(d[:, a]).tolist() for a in range(m)]
    col_w = [len(s) for s in bit_checks]
    row_w = [len(s) for s in check_bits]
    max_col, max_row = max(col_w, default=0), max(row_w, default=0)

    def padded(lists, width):
        return [" ".join(str(x) for x in [i + 1 for i in s] + [0] * (width - len(s))) for s in lists]

    lines = [f"{n} {m}", f"{max_col} {max_row}", " ".join(map(str, col_w)), " ".join(map(str, row_w))]
    lines += padded(bit_checks, max_col) + padded(check_bits, max_row)
    return "\n".join(lines) + "\n"


def from_alist(text: str, name: str = "") -> ClassicalCode:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    rows = [line.split() for line in lines]
    try:
        n, m = map(int, rows[0])
        col_w = list(map(int, rows[2])) if n else []
        row_w = list(map(int, rows[3])) if m else []
        if len(col_w) != n or len(row_w) != m:
            raise FormatError("weight lines do not match n and m")
        d = np.zeros((n, m), dtype=np.uint8)
        for i in range(n):
            for a in (int(x) for x in rows[4 + i]):
                if a:
                    d[i, a - 1] = 1
        for a in range(m):
            bits = [int(x) - 1 for x in rows[4 + n + a] if int(x)]
            if sorted(bits) != np.flatnonzero(d[:, a]).tolist():
                raise FormatError(f"check {a + 1}: bit lists and check lists disagree")
    except (IndexError, ValueError) as exc:
        raise FormatError(f"malformed alist: {exc}") from exc
    if d.sum(axis=1).tolist() != col_w or d.sum(axis=0).tolist() != row_w:
        raise FormatError("declared weights do not match the incidence lists")
    return ClassicalCode(Gf2Matrix.from_dense(d), name=name)


# -- DOT -----------------------------------------------------------------------------
def to_dot(c: ClassicalCode, name: str = "tanner") -> str:
    """Tanner graph: bits as circles b<i>, checks as squares c<a>."""
    d = c.delta.dense
    out = [f"graph {name} {{"]
    out += [f"  b{i} [shape=circle];" for i in range(c.n)]
    out += [f"  c{a} [shape=square];" for a in range(c.m)]
    out += [f"  b{i} -- c{a};" for a in range(c.m) for i in np.flatnonzero(d[:, a])]
    out.append("}")
    return "\n".join(out) + "\n"


def graph_to_dot(g, name: str = "G") -> str:
    """Undirected graph with vertices v<i>; parallel edges are kept."""
    out = [f"graph {name} {{"]
    out += [f"  v{i};" for i in range(g.num_vertices)]
    out += [f"  v{u} -- v{v};" for u, v in g.edges]
    out.append("}")
    return "\n".join(out) + "\n"


# -- JSON ----------------------------------------------------------------------------
def _supports(M: Gf2Matrix) -> list[list[int]]:
    d = M.dense
    return [np.flatnonzero(d[:, j]).tolist() for j in range(d.shape[1])]


def _from_supports(rows: int, supports) -> Gf2Matrix:
    d = np.zeros((rows, len(supports)), dtype=np.uint8)
    for j, s in enumerate(supports):
        d[list(s), j] = 1
    return Gf2Matrix.from_dense(d)


def code_to_json(obj) -> dict[str, Any]:
    if isinstance(obj, ClassicalCode):
        rec = {"type": "classical", "name": obj.name, "n": obj.n, "m": obj.m, "checks": _supports(obj.delta)}
        if obj.redundancy_gens is not None:
            rec["redundancies"] = _supports(obj.redundancy_gens)
    elif isinstance(obj, CssCode):
        rec = {"type": "css", "name": obj.name, "n": obj.n, "x_checks": _supports(obj.delta_X), "z_checks": _supports(obj.delta_Z)}
    elif isinstance(obj, StabilizerCode):
        rec = {"type": "stabilizer", "n": obj.n, "generators": [pauli_string(g, obj.n) for g in obj.generators]}
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return {"schema_version": SCHEMA_VERSION, **rec}


def code_from_json(rec: dict):
    kind = rec.get("type")
    if kind == "classical":
        delta = _from_supports(rec["n"], rec["checks"])
        R = _from_supports(rec["m"], rec["redundancies"]) if "redundancies" in rec else None
        return ClassicalCode(delta, R, rec.get("name", ""))
    if kind == "css":
        return CssCode(_from_supports(rec["n"], rec["x_checks"]), _from_supports(rec["n"], rec["z_checks"]), rec.get("name", ""))
    if kind == "stabilizer":
        return StabilizerCode(rec["n"], np.array([parse_pauli(p) for p in rec["generators"]], dtype=np.uint8).reshape(-1, 2 * rec["n"]))
    raise FormatError(f"unknown code record type {kind!r}")


def pauli_string(row: np.ndarray, n: int) -> str:
    x, z = row[:n], row[n:]
    return "".join("IXZY"[int(a) + 2 * int(b)] for a, b in zip(x, z))


def parse_pauli(text: str) -> np.ndarray:
    n = len(text)
    row = np.zeros(2 * n, dtype=np.uint8)
    for i, ch in enumerate(text):
        if ch not in "IXYZ":
            raise FormatError(f"bad Pauli letter {ch!r}")
        row[i] = ch in "XY"
        row[n + i] = ch in "ZY"
    return row


def dumps(rec: dict) -> str:
    return json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n"
