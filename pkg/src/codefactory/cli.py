"""Command-line front end: evaluate JSON construction trees and report on the resulting codes.

A construction spec is a tree of ``{"op": name, "args": ...}`` nodes; ``args`` is a list of
child nodes and scalars or a dictionary of named arguments.  Example::

    {"op": "hgp", "args": [{"op": "ising_cycle", "args": [3]}, {"op": "ising_cycle", "args": [3]}]}
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import io
from .code import ClassicalCode, code_from_checks, dual_code, ising_cycle, kw_dual, logical_basis, mod_out, params, repetition_code, transpose_code
from .complex import ComplexError, validate
from .diagnostics import energy_barrier
from .gauge import CssCode, StabilizerCode, css_logicals, css_params, gauge, gxc, hgp, higgs
from .goodcodes import LrCayleyComplex, balanced_tanner_product, lr_cayley, quantum_tanner
from .graphs import build_graph, cayley_graph, double_cover, ising_code, laplacian_code, tanner_code
from .groups import PermGroup
from .poly import PolyStabilizerMatrix, ca_product, instantiate, mod_translations, poly_check, poly_cubic, poly_tensor, poly_transpose, translation_action
from .products import balanced_product, check_product, cubic_product, tensor_product

EXIT_OK, EXIT_SPEC, EXIT_INVARIANT, EXIT_BUDGET = 0, 1, 2, 3


class SpecError(ValueError):
    """The construction spec is malformed or refers to something that does not exist."""


@dataclass
class Built:
    """An evaluated node; ``poly``/``periods`` are kept for codes that came from a polynomial matrix."""

    value: Any
    op: str
    children: tuple["Built", ...] = ()
    scalars: dict | None = None
    poly: PolyStabilizerMatrix | None = None
    periods: tuple[int, ...] | None = None


# -- evaluation ----------------------------------------------------------------------
def _args(node: dict) -> tuple[list, dict]:
    a = node.get("args", [])
    if isinstance(a, dict):
        return [], dict(a)
    if isinstance(a, list):
        return list(a), {}
    return [a], {}


def _single(node: dict, name: str):
    """The one scalar argument of a leaf op, given positionally or by name."""
    pos, kw = _args(node)
    if kw:
        if set(kw) != {name}:
            raise SpecError(f"{node['op']} takes a single argument {name!r}, got {sorted(kw)}")
        return kw[name]
    if len(pos) != 1:
        raise SpecError(f"{node['op']} takes a single argument {name!r}, got {len(pos)}")
    return pos[0]


def _is_node(x) -> bool:
    return isinstance(x, dict) and "op" in x


def _group(spec) -> PermGroup:
    if isinstance(spec, int):
        return PermGroup.cyclic(spec)
    if "cyclic" in spec:
        return PermGroup.cyclic(int(spec["cyclic"]))
    if "generators" in spec:
        return PermGroup.generated_by(spec["generators"])
    raise SpecError(f"cannot build a group from {spec!r}")


def _elements(G: PermGroup, S, cyclic: bool) -> list[int]:
    if cyclic:
        return [int(s) % G.order for s in S]
    return [G.index(p) for p in S]


def _code(b: Built, what: str) -> ClassicalCode:
    if isinstance(b.value, ClassicalCode):
        return b.value
    if isinstance(b.value, PolyStabilizerMatrix):
        if b.value.periods is None:
            raise SpecError(f"{what}: polynomial matrix has no periods; wrap it in instantiate")
        return instantiate(b.value)
    raise SpecError(f"{what}: expected a classical code, got {type(b.value).__name__}")


class Evaluator:
    def __init__(self, base_dir: Path | None = None):
        self.base_dir = base_dir or Path.cwd()
        self.ops: dict[str, Callable[[dict], Built]] = {
            name[3:]: getattr(self, name) for name in dir(self) if name.startswith("op_")
        }

    def eval(self, node) -> Built:
        if not _is_node(node):
            raise SpecError(f"expected an op node, got {node!r}")
        op = node["op"]
        if op not in self.ops:
            raise SpecError(f"unknown op {op!r}")
        try:
            return self.ops[op](node)
        except (SpecError, ComplexError):
            raise
        except (KeyError, TypeError, IndexError) as exc:
            raise SpecError(f"{op}: bad arguments ({exc})") from exc

    def _children(self, node, count: int | None = None) -> list[Built]:
        pos, kw = _args(node)
        kids = [self.eval(x) for x in pos if _is_node(x)]
        if count is not None and len(kids) != count:
            raise SpecError(f"{node['op']} takes {count} code arguments, got {len(kids)}")
        return kids

    def _path(self, p: str) -> Path:
        path = Path(p)
        if not path.is_absolute():
            path = self.base_dir / path
        if not path.exists():
            raise SpecError(f"referenced file {p!r} does not exist")
        return path

    # leaves
    def op_ising_cycle(self, node):
        L = _single(node, "L")
        return Built(ising_cycle(int(L)), "ising_cycle", scalars={"L": int(L)}, poly=PolyStabilizerMatrix.from_strings([["1 + x"]], ("x",)), periods=(int(L),))

    def op_repetition(self, node):
        n = _single(node, "n")
        return Built(repetition_code(int(n)), "repetition", scalars={"n": int(n)})

    def op_checks(self, node):
        pos, kw = _args(node)
        return Built(code_from_checks(int(kw["n"]), kw["checks"]), "checks")

    def op_ising_graph(self, node):
        pos, kw = _args(node)
        return Built(ising_code(build_graph(pos[0] if pos else kw)), "ising_graph")

    def op_laplacian(self, node):
        pos, kw = _args(node)
        return Built(laplacian_code(build_graph(pos[0] if pos else kw)), "laplacian")

    def op_tanner(self, node):
        pos, kw = _args(node)
        local = self.eval(kw["local"])
        return Built(tanner_code(build_graph(kw["graph"]), _code(local, "tanner")), "tanner", (local,))

    def op_alist(self, node):
        p = _single(node, "path")
        return Built(io.from_alist(self._path(p).read_text(), Path(p).stem), "alist")

    def op_file(self, node):
        p = _single(node, "path")
        rec = json.loads(self._path(p).read_text())
        return Built(io.code_from_json(rec), "file")

    # polynomial matrices
    def op_poly(self, node):
        pos, kw = _args(node)
        if pos:
            text = pos[0]
            variables = pos[1] if len(pos) > 1 else ["x"]
            return Built(PolyStabilizerMatrix.from_strings([[text]], variables), "poly")
        S = PolyStabilizerMatrix.from_strings(kw["entries"], kw["variables"], kw.get("periods"), kw.get("redundancies"))
        return Built(S, "poly")

    def op_instantiate(self, node):
        pos, kw = _args(node)
        child = self.eval(pos[0] if pos else kw["poly"])
        periods = pos[1] if len(pos) > 1 else kw.get("periods")
        S = child.value
        if not isinstance(S, PolyStabilizerMatrix):
            raise SpecError("instantiate needs a polynomial matrix")
        periods = tuple(int(L) for L in (periods if periods is not None else S.periods or ()))
        if not periods:
            raise SpecError("instantiate needs periods")
        return Built(instantiate(S, periods), "instantiate", (child,), poly=S, periods=periods)

    def op_ca_product(self, node):
        a, b = self._children(node, 2)
        return Built(ca_product(a.value, b.value), "ca_product", (a, b))

    # transforms
    def op_transpose(self, node):
        (c,) = self._children(node, 1)
        if isinstance(c.value, PolyStabilizerMatrix):
            return Built(poly_transpose(c.value), "transpose", (c,))
        return Built(transpose_code(_code(c, "transpose")), "transpose", (c,))

    def op_dual(self, node):
        (c,) = self._children(node, 1)
        return Built(dual_code(_code(c, "dual")), "dual", (c,))

    def op_kw_dual(self, node):
        (c,) = self._children(node, 1)
        return Built(kw_dual(_code(c, "kw_dual")), "kw_dual", (c,))

    def op_mod_out(self, node):
        pos, kw = _args(node)
        child = self.eval(pos[0] if pos else kw.get("poly", kw.get("code")))
        if isinstance(child.value, PolyStabilizerMatrix):
            S = mod_translations(child.value, kw["relation"], kw["eliminate"], kw.get("periods"))
            return Built(S, "mod_out", (child,))
        if child.poly is None:
            raise SpecError("mod_out of a code needs a translation-invariant (instantiated) code")
        act = translation_action(child.poly, child.periods, kw["shift"])
        return Built(mod_out(child.value, act), "mod_out", (child,))

    # products
    def _product(self, node, poly_fn, code_fn, arity):
        kids = self._children(node, arity)
        if all(isinstance(k.value, PolyStabilizerMatrix) for k in kids):
            return Built(poly_fn(*[k.value for k in kids]), node["op"], tuple(kids))
        return Built(code_fn(*[_code(k, node["op"]) for k in kids]).code, node["op"], tuple(kids))

    def op_tensor(self, node):
        return self._product(node, poly_tensor, tensor_product, 2)

    def op_check_product(self, node):
        return self._product(node, poly_check, check_product, 2)

    def op_cubic(self, node):
        return self._product(node, poly_cubic, cubic_product, 3)

    def op_balanced(self, node):
        pos, kw = _args(node)
        a, b = self.eval(kw["A"]), self.eval(kw["B"])
        for x in (a, b):
            if x.poly is None:
                raise SpecError("balanced needs translation-invariant (instantiated) factors")
        actA = translation_action(a.poly, a.periods, kw["shift_A"])
        actB = translation_action(b.poly, b.periods, kw["shift_B"])
        return Built(balanced_product(a.value, b.value, actA, actB).code, "balanced", (a, b))

    # quantum maps
    def op_gauge(self, node):
        (c,) = self._children(node, 1)
        return Built(gauge(_code(c, "gauge")), "gauge", (c,))

    def op_higgs(self, node):
        (c,) = self._children(node, 1)
        return Built(higgs(_code(c, "higgs")), "higgs", (c,))

    def op_hgp(self, node):
        a, b = self._children(node, 2)
        return Built(hgp(_code(a, "hgp"), _code(b, "hgp")), "hgp", (a, b))

    def op_gxc(self, node):
        a, b, c = self._children(node, 3)
        return Built(gxc(_code(a, "gxc"), _code(b, "gxc"), _code(c, "gxc")), "gxc", (a, b, c))

    # good-code constructions
    def _generators(self, kw):
        gspec = kw["group"]
        G = _group(gspec)
        cyclic = isinstance(gspec, int) or "cyclic" in gspec
        return G, _elements(G, kw["S_A"], cyclic), _elements(G, kw["S_B"], cyclic)

    def op_lr_cayley(self, node):
        _, kw = _args(node)
        G, SA, SB = self._generators(kw)
        return Built(lr_cayley(G, SA, SB, kw.get("fix", "auto")), "lr_cayley")

    def op_quantum_tanner(self, node):
        _, kw = _args(node)
        cx = self.eval(kw["complex"])
        if not isinstance(cx.value, LrCayleyComplex):
            raise SpecError("quantum_tanner needs an lr_cayley complex")
        A, B = self.eval(kw["C0A"]), self.eval(kw["C0B"])
        return Built(quantum_tanner(cx.value, _code(A, "C0A"), _code(B, "C0B")), "quantum_tanner", (cx, A, B))

    def op_balanced_tanner(self, node):
        _, kw = _args(node)
        G, SA, SB = self._generators(kw)
        gA, gB = cayley_graph(G, SA, side="left"), cayley_graph(G, SB, side="right")
        if kw.get("double_cover", False):
            gA, gB = double_cover(gA), double_cover(gB)
        A, B = self.eval(kw["C0A"]), self.eval(kw["C0B"])
        tp = balanced_tanner_product(gA, gB, _code(A, "C0A"), _code(B, "C0B"), bool(kw.get("transpose", False)))
        return Built(tp.product.code, "balanced_tanner", (A, B))


def load_spec(text_or_path: str) -> tuple[dict, Path]:
    p = Path(text_or_path)
    if p.suffix in (".json", ".alist") or (len(text_or_path) < 4096 and p.exists()):
        if not p.exists():
            raise SpecError(f"spec file {text_or_path!r} does not exist")
        if p.suffix == ".alist":
            return {"op": "alist", "args": [str(p.resolve())]}, p.parent
        rec = json.loads(p.read_text())
        if "type" in rec and "op" not in rec:
            return {"op": "file", "args": [str(p.resolve())]}, p.parent
        return rec, p.parent
    try:
        return json.loads(text_or_path), Path.cwd()
    except json.JSONDecodeError as exc:
        raise SpecError(f"spec is neither a file nor valid JSON: {exc}") from exc


# -- verification suite ----------------------------------------------------------------
def _walk(b: Built):
    yield b
    for c in b.children:
        yield from _walk(c)


def verify(root: Built) -> list[tuple[str, bool]]:
    """Invariant checks relevant to the ops that occur in the tree."""
    out: list[tuple[str, bool]] = []
    for b in _walk(root):
        v = b.value
        if isinstance(v, ClassicalCode):
            try:
                ok = validate(v.complex())
            except ComplexError:
                ok = False
            out.append((f"{b.op}: boundary maps compose to zero", ok))
        if isinstance(v, CssCode):
            ok = (v.delta_X.T @ v.delta_Z).is_zero()
            out.append((f"{b.op}: X and Z checks commute", ok))
        if isinstance(v, StabilizerCode):
            out.append((f"{b.op}: generators commute", v.anticommuting_pair() is None))
        kids = [k.value for k in b.children]
        if b.op == "tensor" and all(isinstance(k, ClassicalCode) for k in kids):
            out.append(("tensor: k == k_A k_B", v.k == kids[0].k * kids[1].k))
        if b.op == "check_product" and all(isinstance(k, ClassicalCode) for k in kids):
            A, B = kids
            out.append(("check_product: k == n_A k_B + k_A n_B - k_A k_B", v.k == A.n * B.k + A.k * B.n - A.k * B.k))
        if b.op == "hgp":
            A, B = kids
            kT = lambda c: c.m - c.rank  # noqa: E731
            out.append(("hgp: k == k_A k_B^T + k_A^T k_B", v.k == A.k * kT(B) + kT(A) * B.k))
        if b.op == "gauge":
            c = kids[0]
            kw = c.r - (0 if c.redundancy_gens is None else _rank(c.redundancy_gens))
            out.append(("gauge: k_q == k + k_KW - (n - m + r)", v.k == c.k + kw - (c.n - c.m + c.r)))
        if b.op == "gxc":
            Ls = [k.scalars["L"] for k in b.children if k.op == "ising_cycle"]
            if len(Ls) == 3 and len(set(Ls)) == 1:
                L = Ls[0]
                out.append((f"n==3L^3 (L={L})", v.n == 3 * L**3))
                out.append((f"k==6L-3 (L={L})", v.k == 6 * L - 3))
        if b.op == "higgs":
            out.append(("higgs: stabilizer rank == n + m", v.rank == v.n))
    return out


def _rank(M) -> int:
    from .gf2 import rank

    return rank(M)


# -- reports ---------------------------------------------------------------------------
def _params_report(v, wmax, budget_ms) -> tuple[dict, bool]:
    if isinstance(v, ClassicalCode):
        p = params(v, wmax, budget_ms)
        return {"n": p.n, "k": p.k, "d": p.d, "d_status": p.d_status}, p.d_status == "exact"
    if isinstance(v, CssCode):
        p = css_params(v, wmax, budget_ms)
        return {"n": p.n, "k": p.k, "d_X": p.d_X, "d_Z": p.d_Z, "status_X": p.status_X, "status_Z": p.status_Z}, p.status == "exact"
    if isinstance(v, StabilizerCode):
        return {"n": v.n, "k": v.k}, True
    raise SpecError(f"no parameters for {type(v).__name__}")


def _supports_of(basis) -> list[list[int]]:
    return [np.flatnonzero(r).tolist() for r in basis.vectors.dense] if len(basis) else []


def _logicals_report(v) -> dict:
    if isinstance(v, ClassicalCode):
        return {"n": v.n, "k": v.k, "logicals": _supports_of(logical_basis(v))}
    if isinstance(v, CssCode):
        lg = css_logicals(v)
        return {"n": v.n, "k": v.k, "X": _supports_of(lg.X), "Z": _supports_of(lg.Z)}
    raise SpecError(f"no logical bases for {type(v).__name__}")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="codefactory", description="Build and check codes from JSON construction trees.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("build", "evaluate a spec and print the code as JSON"),
        ("params", "print [n,k,d] or [[n,k,d_X,d_Z]] as JSON"),
        ("logicals", "print logical bases as JSON"),
        ("barrier", "print the energy-barrier profile as CSV"),
        ("verify", "run the invariant checks relevant to the spec"),
        ("export", "write alist, DOT or JSON"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("spec", help="JSON file, inline JSON, serialized code or .alist file")
        p.add_argument("--wmax", type=int, default=6, help="weight cap for distance searches (default 6)")
        p.add_argument("--time-budget-ms", type=float, default=None)
        p.add_argument("--strict", action="store_true", help="exit 3 when a search budget runs out")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="output file (default stdout)")
        if name == "barrier":
            p.add_argument("--fmax", type=int, default=None)
        if name == "export":
            p.add_argument("--format", choices=("alist", "dot", "json"), default="alist")
    return ap


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec, base = load_spec(args.spec)
        root = Evaluator(base).eval(spec)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except ComplexError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    v = root.value
    try:
        if args.command == "build":
            _emit(io.dumps(io.code_to_json(v)), args.out)
        elif args.command == "params":
            rep, exact = _params_report(v, args.wmax, args.time_budget_ms)
            _emit(io.dumps({"schema_version": io.SCHEMA_VERSION, **rep}), args.out)
            if args.strict and not exact:
                return EXIT_BUDGET
        elif args.command == "logicals":
            _emit(io.dumps({"schema_version": io.SCHEMA_VERSION, **_logicals_report(v)}), args.out)
        elif args.command == "barrier":
            prof = energy_barrier(_code(root, "barrier"), args.fmax, seed=args.seed)
            _emit(prof.to_csv(), args.out)
            if args.strict and not all(prof.exact):
                return EXIT_BUDGET
        elif args.command == "verify":
            results = verify(root)
            _emit("".join(f"{name}: {'pass' if ok else 'FAIL'}\n" for name, ok in results), args.out)
            if not all(ok for _, ok in results):
                return EXIT_INVARIANT
        elif args.command == "export":
            if args.format == "json":
                _emit(io.dumps(io.code_to_json(v)), args.out)
            elif isinstance(v, CssCode):
                if not args.out:
                    raise SpecError("exporting a CSS code needs --out (two files are written)")
                stem = Path(args.out)
                for tag, M in (("X", v.delta_X), ("Z", v.delta_Z)):
                    c = ClassicalCode(M)  # qubits as bits, so H = M^T is the check matrix
                    text = io.to_alist(c) if args.format == "alist" else io.to_dot(c, f"tanner_{tag}")
                    stem.with_name(f"{stem.stem}_{tag}{stem.suffix}").write_text(text)
                rep, _ = _params_report(v, args.wmax, args.time_budget_ms)
                stem.with_name(f"{stem.stem}_report.json").write_text(io.dumps({"schema_version": io.SCHEMA_VERSION, **rep}))
            else:
                c = _code(root, "export")
                _emit(io.to_alist(c) if args.format == "alist" else io.to_dot(c), args.out)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    return EXIT_OK


def main() -> None:
    sys.exit(run())
