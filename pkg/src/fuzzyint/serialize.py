"""Deterministic JSON for every domain object.

Numbers are emitted with 17 significant digits so binary64 values
round-trip exactly; infinity is the string "inf".  Keys are sorted and
output carries no timestamps, which makes reports byte-identical across
runs and lets a sha256 digest identify an instance.
"""

from __future__ import annotations

import hashlib
import json
import math

from .ops import (
    INF,
    BinaryOp,
    InputError,
    KIND_CUSTOM,
    drastic_op,
    greatest_op,
    luk_conorm_op,
    lukasiewicz_op,
    max_op,
    min_op,
    probsum_op,
    prod_op,
    smallest_op,
    sum_op,
    table_op,
)
from .functions import (
    CappedFunction,
    ConstFunction,
    FiniteFunction,
    FlooredFunction,
    LatticeCombo,
    MonotoneTransform,
    PowerFunction,
    PwlFunction,
    TransformedFunction,
    affine,
    compose,
    identity,
    power,
)
from .measures import DistortedLebesgue, FiniteMonotoneMeasure
from .inequalities import NaryOp, TheoremInstance, h_table, h_wmean


# ---------------------------------------------------------------------------
# writer
# ---------------------------------------------------------------------------


def _emit(obj, out: list) -> None:
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):  # bool before int: True is an int
        out.append("true" if obj else "false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        if math.isnan(obj):
            raise InputError("nan is not serializable")
        if obj == INF:
            out.append('"inf"')
        elif obj == -INF:
            raise InputError("-inf is not serializable")
        else:
            out.append(format(obj, ".17g"))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=True))
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _emit(item, out)
        out.append("]")
    elif isinstance(obj, dict):
        out.append("{")
        for i, k in enumerate(sorted(obj)):
            if not isinstance(k, str):
                raise InputError("object keys must be strings")
            if i:
                out.append(",")
            out.append(json.dumps(k, ensure_ascii=True))
            out.append(":")
            _emit(obj[k], out)
        out.append("}")
    else:
        raise InputError(f"cannot serialize {type(obj).__name__}")


def dumps_17g(obj) -> str:
    """Single-line deterministic JSON with 17-significant-digit floats."""
    out: list = []
    _emit(obj, out)
    return "".join(out)


def digest(obj) -> str:
    """16-hex-char sha256 prefix of the deterministic serialization."""
    return hashlib.sha256(dumps_17g(obj).encode("ascii")).hexdigest()[:16]


def _num(x) -> float:
    if x == "inf":
        return INF
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return float(x)
    raise InputError(f"expected a number or \"inf\", got {x!r}")


def _num_out(x: float):
    return "inf" if x == INF else float(x)


# ---------------------------------------------------------------------------
# binary ops
# ---------------------------------------------------------------------------

_OP_FROM_KIND = {
    "min": lambda d: min_op(cap=_num(d.get("cap", "inf"))),
    "prod": lambda d: prod_op(cap=_num(d.get("cap", "inf"))),
    "smallest": lambda d: smallest_op(_num(d["neutral"])),
    "greatest": lambda d: greatest_op(_num(d["neutral"])),
    "lukasiewicz": lambda d: lukasiewicz_op(),
    "drastic": lambda d: drastic_op(),
    "max": lambda d: max_op(cap=_num(d.get("cap", "inf"))),
    "sum": lambda d: sum_op(cap=_num(d.get("cap", "inf"))),
    "probsum": lambda d: probsum_op(),
    "luk_conorm": lambda d: luk_conorm_op(),
}


def op_to_json(op: BinaryOp) -> dict:
    d = {"kind": op.kind, "neutral": _num_out(op.neutral), "cap": _num_out(op.cap)}
    if op.kind == KIND_CUSTOM:
        if not op.table_nodes:
            raise InputError("callable-backed ops cannot be serialized")
        d["nodes"] = [float(t) for t in op.table_nodes]
        d["values"] = [float(v) for v in op.table_values]
        d["flags"] = sorted(op.declared_flags)
    if op.name:
        d["name"] = op.name
    return d


def op_from_json(d: dict) -> BinaryOp:
    kind = d.get("kind")
    if kind == KIND_CUSTOM:
        return table_op(
            [_num(t) for t in d["nodes"]],
            [_num(v) for v in d["values"]],
            neutral=_num(d["neutral"]),
            cap=_num(d.get("cap", 1.0)),
            flags=d.get("flags", ()),
            name=d.get("name", ""),
        )
    mk = _OP_FROM_KIND.get(kind)
    if mk is None:
        raise InputError(f"unknown op kind {kind!r}")
    op = mk(d)
    if "neutral" in d and _num(d["neutral"]) != op.neutral:
        raise InputError(f"op kind {kind!r} has neutral {op.neutral}, not {d['neutral']!r}")
    return op


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------


def transform_to_json(t: MonotoneTransform) -> dict:
    if t.kind == "identity":
        return {"kind": "identity"}
    if t.kind == "power":
        return {"kind": "power", "p": float(t.p)}
    if t.kind == "affine":
        return {"kind": "affine", "a": float(t.a), "b": float(t.b)}
    return {"kind": "compose", "parts": [transform_to_json(p) for p in t.parts]}


def transform_from_json(d: dict) -> MonotoneTransform:
    kind = d.get("kind")
    if kind == "identity":
        return identity()
    if kind == "power":
        return power(_num(d["p"]))
    if kind == "affine":
        return affine(_num(d["a"]), _num(d.get("b", 0.0)))
    if kind == "compose":
        return compose(*(transform_from_json(p) for p in d["parts"]))
    raise InputError(f"unknown transform kind {kind!r}")


# ---------------------------------------------------------------------------
# measures
# ---------------------------------------------------------------------------


def measure_to_json(m) -> dict:
    if isinstance(m, FiniteMonotoneMeasure):
        return {
            "type": "finite",
            "n": m.n,
            "table": {str(s): float(m.table[s]) for s in range(1 << m.n)},
        }
    if isinstance(m, DistortedLebesgue):
        return {"type": "distorted_lebesgue", "distortion": transform_to_json(m.distortion)}
    raise InputError(f"cannot serialize measure {type(m).__name__}")


def measure_from_json(d: dict):
    t = d.get("type")
    if t == "finite":
        n = int(d["n"])
        table = d["table"]
        return FiniteMonotoneMeasure(n, tuple(_num(table[str(s)]) for s in range(1 << n)))
    if t == "distorted_lebesgue":
        return DistortedLebesgue(transform_from_json(d["distortion"]))
    raise InputError(f"unknown measure type {t!r}")


# ---------------------------------------------------------------------------
# functions
# ---------------------------------------------------------------------------


def function_to_json(f) -> dict:
    if isinstance(f, FiniteFunction):
        return {"type": "finite", "values": [_num_out(v) for v in f.values]}
    if isinstance(f, ConstFunction):
        return {"type": "const", "c": float(f.c)}
    if isinstance(f, PowerFunction):
        d = {"type": "power", "p": float(f.p)}
        if f.coef != 1.0:
            d["coef"] = float(f.coef)
        return d
    if isinstance(f, PwlFunction):
        return {"type": "pwl", "x": [float(v) for v in f.xs], "y": [float(v) for v in f.ys]}
    if isinstance(f, CappedFunction):
        return {"type": "capped", "base": function_to_json(f.base), "c": _num_out(f.cap_value)}
    if isinstance(f, FlooredFunction):
        return {"type": "floored", "base": function_to_json(f.base), "c": _num_out(f.floor_value)}
    if isinstance(f, LatticeCombo):
        return {
            "type": "lattice",
            "mode": f.kind,
            "parts": [function_to_json(p) for p in f.parts],
        }
    if isinstance(f, TransformedFunction):
        return {
            "type": "transformed",
            "base": function_to_json(f.base),
            "transform": transform_to_json(f.transform),
        }
    raise InputError(f"cannot serialize function {type(f).__name__}")


def function_from_json(d: dict):
    t = d.get("type")
    if t == "finite":
        return FiniteFunction(tuple(_num(v) for v in d["values"]))
    if t == "const":
        return ConstFunction(_num(d["c"]))
    if t == "power":
        return PowerFunction(_num(d["p"]), _num(d.get("coef", 1.0)))
    if t == "pwl":
        return PwlFunction(tuple(_num(v) for v in d["x"]), tuple(_num(v) for v in d["y"]))
    if t == "capped":
        return CappedFunction(function_from_json(d["base"]), _num(d["c"]))
    if t == "floored":
        return FlooredFunction(function_from_json(d["base"]), _num(d["c"]))
    if t == "lattice":
        return LatticeCombo(d["mode"], tuple(function_from_json(p) for p in d["parts"]))
    if t == "transformed":
        return TransformedFunction(
            function_from_json(d["base"]), transform_from_json(d["transform"])
        )
    raise InputError(f"unknown function type {t!r}")


# ---------------------------------------------------------------------------
# aggregations
# ---------------------------------------------------------------------------


def nary_to_json(H: NaryOp) -> dict:
    d = {"kind": H.kind, "arity": H.arity}
    if H.kind == "wmean":
        d["weights"] = [float(w) for w in H.weights]
    if H.kind == "table":
        d["nodes"] = [float(t) for t in H.nodes]
        d["values"] = [float(v) for v in H.values]
    return d


def nary_from_json(d: dict) -> NaryOp:
    kind = d.get("kind")
    arity = int(d.get("arity", 2))
    if kind in ("min", "max", "prod"):
        return NaryOp(kind, arity)
    if kind == "wmean":
        return h_wmean([_num(w) for w in d["weights"]])
    if kind == "table":
        return h_table([_num(t) for t in d["nodes"]], [_num(v) for v in d["values"]], arity)
    raise InputError(f"unknown aggregation kind {kind!r}")


# ---------------------------------------------------------------------------
# theorem instances
# ---------------------------------------------------------------------------


def _exponents_to_json(exps: tuple) -> dict:
    out = {}
    for k, v in exps:
        out[k] = [float(x) for x in v] if isinstance(v, tuple) else float(v)
    return out


def instance_to_json(inst: TheoremInstance) -> dict:
    d = {
        "theorem": inst.theorem_id,
        "op": op_to_json(inst.op),
        "measure": measure_to_json(inst.measure),
        "functions": [function_to_json(f) for f in inst.functions],
    }
    if inst.star is not None:
        d["star"] = op_to_json(inst.star)
    if inst.H is not None:
        d["H"] = nary_to_json(inst.H)
    if inst.u:
        d["u"] = [transform_to_json(t) for t in inst.u]
    if inst.psi:
        d["psi"] = [transform_to_json(t) for t in inst.psi]
    if inst.phi:
        d["phi"] = [transform_to_json(t) for t in inst.phi]
    if inst.exponents:
        d["exponents"] = _exponents_to_json(inst.exponents)
    return d


def instance_from_json(d: dict) -> TheoremInstance:
    if "theorem" not in d:
        raise InputError("instance document needs a theorem id")
    return TheoremInstance.make(
        d["theorem"],
        op_from_json(d["op"]),
        measure_from_json(d["measure"]),
        [function_from_json(f) for f in d["functions"]],
        star=op_from_json(d["star"]) if "star" in d else None,
        H=nary_from_json(d["H"]) if "H" in d else None,
        u=[transform_from_json(t) for t in d.get("u", ())],
        psi=[transform_from_json(t) for t in d.get("psi", ())],
        phi=[transform_from_json(t) for t in d.get("phi", ())],
        exponents=d.get("exponents"),
    )


def instance_digest(inst: TheoremInstance) -> str:
    return digest(instance_to_json(inst))
