"""Tensor, check, cubic and balanced products of classical codes.

Label conventions (all lexicographic, first factor major):

* tensor: bits (i, j); checks (i, b) first, then (a, j); redundancies (a, b)
  together with any redundancies inherited from the factors.
* check: bits (i, j); checks (a, b).
* cubic: bits (i, j, k); checks AB (a, b, k), then AC (a, j, c), then BC (i, b, c);
  three redundancy generators per triple (a, b, c).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct

import numpy as np

from .code import ClassicalCode, CodeAction, mod_out_with_maps, validate_action
from .complex import ChainComplex, tensor, tensor_blocks
from .gf2 import Gf2Matrix
from .groups import PermGroupAction


@dataclass(frozen=True, eq=False)
class ProductCode:
    code: ClassicalCode
    complex: ChainComplex
    provenance: dict
    index_maps: dict = field(default_factory=dict)
    parent: "ProductCode | None" = None


def _label_map(shape: tuple[int, ...], offset: int = 0) -> dict:
    out = {}
    for idx, lab in enumerate(iproduct(*[range(s) for s in shape])):
        out[lab] = offset + idx
    return out


def tensor_product(A: ClassicalCode, B: ClassicalCode) -> ProductCode:
    """Checks C^A_{a,j} on {(i,j): i in delta_A(a)} and C^B_{i,b} on {(i,j): j in delta_B(b)}."""
    ca, cb = A.complex(), B.complex()
    full = tensor(ca, cb)
    dims = full.dims[:3]
    cx = ChainComplex(dims, full.boundaries[:2], ("bits", "checks", "redundancies"))
    delta, R = cx.boundaries
    code = ClassicalCode(delta, R, name=f"({A.name} x {B.name})" if A.name and B.name else "")
    maps = {"bits": _label_map((A.n, B.n))}
    for pa, pb, off in tensor_blocks(ca.dims, cb.dims, 1):
        if (pa, pb) == (0, 1):
            maps["checks_B"] = _label_map((A.n, B.m), off)
        else:
            maps["checks_A"] = _label_map((A.m, B.n), off)
    for pa, pb, off in tensor_blocks(ca.dims, cb.dims, 2):
        if (pa, pb) == (1, 1):
            maps["redundancies"] = _label_map((A.m, B.m), off)
        elif (pa, pb) == (0, 2):
            maps["redundancies_B"] = _label_map((A.n, B.r), off)
        else:
            maps["redundancies_A"] = _label_map((A.r, B.n), off)
    return ProductCode(code, cx, {"op": "tensor", "args": [A.name, B.name]}, maps)


def check_product(A: ClassicalCode, B: ClassicalCode) -> ProductCode:
    """One check per pair (a, b) with support delta_A(a) x delta_B(b)."""
    delta = Gf2Matrix.from_dense(np.kron(A.delta.dense, B.delta.dense))
    code = ClassicalCode(delta, name=f"({A.name} * {B.name})" if A.name and B.name else "")
    maps = {"bits": _label_map((A.n, B.n)), "checks": _label_map((A.m, B.m))}
    return ProductCode(code, code.complex(), {"op": "check_product", "args": [A.name, B.name]}, maps)


def cubic_product(A: ClassicalCode, B: ClassicalCode, C: ClassicalCode) -> ProductCode:
    """Check-product checks on all three coordinate planes, with three redundancy generators per triple."""
    dA, dB, dC = A.delta.dense, B.delta.dense, C.delta.dense
    I = lambda k: np.eye(k, dtype=np.uint8)  # noqa: E731
    ab = np.kron(np.kron(dA, dB), I(C.n))
    ac = np.kron(np.kron(dA, I(B.n)), dC)
    bc = np.kron(np.kron(I(A.n), dB), dC)
    delta = np.hstack([ab, ac, bc])
    t = A.m * B.m * C.m
    # E_A, E_B, E_C as maps from triples (a,b,c) into the BC, AC and AB check blocks
    E_A = np.kron(np.kron(dA, I(B.m)), I(C.m))
    E_B = np.kron(np.kron(I(A.m), dB), I(C.m))
    E_C = np.kron(np.kron(I(A.m), I(B.m)), dC)
    zab = np.zeros((ab.shape[1], t), dtype=np.uint8)
    zac = np.zeros((ac.shape[1], t), dtype=np.uint8)
    zbc = np.zeros((bc.shape[1], t), dtype=np.uint8)
    gen_ab = np.vstack([zab, E_B, E_A])  # E_A + E_B
    gen_ac = np.vstack([E_C, zac, E_A])  # E_A + E_C
    gen_bc = np.vstack([E_C, E_B, zbc])  # E_B + E_C
    R = np.zeros((delta.shape[1], 3 * t), dtype=np.uint8)
    R[:, 0::3] = gen_ab
    R[:, 1::3] = gen_ac
    R[:, 2::3] = gen_bc
    dm, Rm = Gf2Matrix.from_dense(delta), Gf2Matrix.from_dense(R)
    code = ClassicalCode(dm, Rm, name=f"Cub({A.name},{B.name},{C.name})" if A.name else "")
    cx = ChainComplex([code.n, code.m, 3 * t], [dm, Rm], ("bits", "checks", "redundancies"))
    off_ac = ab.shape[1]
    off_bc = off_ac + ac.shape[1]
    maps = {
        "bits": _label_map((A.n, B.n, C.n)),
        "checks_AB": _label_map((A.m, B.m, C.n)),
        "checks_AC": _label_map((A.m, B.n, C.m), off_ac),
        "checks_BC": _label_map((A.n, B.m, C.m), off_bc),
        "redundancies": _label_map((A.m, B.m, C.m, 3)),
    }
    return ProductCode(code, cx, {"op": "cubic", "args": [A.name, B.name, C.name]}, maps)


def _pair_action(pa: np.ndarray, pb: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    """Permutation of flat (x, y) labels induced by (pa on x, pb on y) for every group element."""
    nx_, ny = shape
    G = pa.shape[0]
    out = np.empty((G, nx_ * ny), dtype=np.int64)
    for g in range(G):
        out[g] = (pa[g][:, None] * ny + pb[g][None, :]).ravel()
    return out


def _block_action(blocks: list[tuple[int, np.ndarray]], size: int, G: int) -> PermGroupAction:
    out = np.empty((G, size), dtype=np.int64)
    for off, perm in blocks:
        out[:, off : off + perm.shape[1]] = perm + off
    return PermGroupAction(out)


def balanced_product(A: ClassicalCode, B: ClassicalCode, action_A: CodeAction, action_B: CodeAction) -> ProductCode:
    """Tensor product followed by modding out the diagonal group action on every level."""
    if action_A.order != action_B.order:
        raise ValueError(f"group orders differ: {action_A.order} vs {action_B.order}")
    aA = validate_action(A, action_A)
    aB = validate_action(B, action_B)
    tp = tensor_product(A, B)
    G = aA.order
    bits = PermGroupAction(_pair_action(aA.bits.perms, aB.bits.perms, (A.n, B.n)))
    chk_blocks = [
        (0, _pair_action(aA.bits.perms, aB.checks.perms, (A.n, B.m))),
        (A.n * B.m, _pair_action(aA.checks.perms, aB.bits.perms, (A.m, B.n))),
    ]
    checks = _block_action(chk_blocks, tp.code.m, G)
    red_blocks = []
    offset = 0
    for key, pa, pb, shape in (
        ("redundancies_B", aA.bits.perms, None if aB.redundancies is None else aB.redundancies.perms, (A.n, B.r)),
        ("redundancies", aA.checks.perms, aB.checks.perms, (A.m, B.m)),
        ("redundancies_A", None if aA.redundancies is None else aA.redundancies.perms, aB.bits.perms, (A.r, B.n)),
    ):
        if key in tp.index_maps:
            if shape[0] * shape[1] > 0:
                red_blocks.append((offset, _pair_action(pa, pb, shape)))
            offset += shape[0] * shape[1]
    reds = _block_action(red_blocks, tp.code.r, G)
    q = mod_out_with_maps(tp.code, CodeAction(bits, checks, reds))
    R = q.code.redundancy_gens
    cx = ChainComplex([q.code.n, q.code.m, R.cols], [q.code.delta, R], ("bits", "checks", "redundancies"))
    maps = {"bits": q.bit_orbits, "checks": q.check_orbits, "redundancies": q.redundancy_orbits}
    return ProductCode(q.code, cx, {"op": "balanced", "args": [A.name, B.name], "order": G}, maps, parent=tp)
