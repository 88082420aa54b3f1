"""Verification of integral inequality families.

Each family compares one integral expression against another built from
the same data (two-function products, single-function transforms, n-ary
aggregations and their order-reversed counterparts).  A verdict records
both sides, the signed margin, whether the inequality holds at the
instance tolerance, and a hypothesis report: every precondition of the
family is grid-checked and the verdict is flagged when any fails, but
both sides are always evaluated so hypothesis-violating regimes can be
studied deliberately.

Scalar sufficient conditions (the per-threshold inequalities coupling
the aggregation to the integral op) are checked over finite grids and
cached per parameter set, since campaigns reuse them heavily.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .ops import (
    INF,
    BinaryOp,
    CheckResult,
    InputError,
    KIND_MAX,
    KIND_MIN,
    PropertyReport,
    eval_op,
    max_op,
    min_op,
    prod_op,
    sum_op,
    verify_op_properties,
    xmul,
)
from .functions import (
    FiniteFunction,
    MonotoneTransform,
    apply_transform,
    identity,
    is_comonotone,
    is_continuous,
    is_identity,
    power,
    sup_value,
)
from .measures import FiniteMonotoneMeasure, Measure
from .integrals import (
    DEFAULT_TOL,
    IntegralResult,
    semiconormed_integral,
    seminormed_integral,
    universal_integral,
)

# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

NARY_IDS = ("thm31", "thm32", "thm41", "thm42_h")
TWO_FUNCTION_IDS = (
    "chebyshev",
    "holder",
    "minkowski",
    "star_general",
    "seminormed_general",
    "rev_chebyshev",
    "rev_holder",
    "rev_minkowski",
    "rev_seminormed",
)
SINGLE_FUNCTION_IDS = ("thm33", "jensen", "rev_jensen", "lyapunov", "rev_transform")
THEOREM_IDS = NARY_IDS + TWO_FUNCTION_IDS + SINGLE_FUNCTION_IDS

REVERSE_IDS = frozenset(
    {
        "thm41",
        "thm42_h",
        "rev_chebyshev",
        "rev_holder",
        "rev_minkowski",
        "rev_seminormed",
        "rev_jensen",
        "rev_transform",
    }
)

_SCALAR_SLACK = 1e-12


# ---------------------------------------------------------------------------
# n-ary aggregations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NaryOp:
    """Aggregation H of n nonnegative arguments.

    Kinds: componentwise min, product, weighted arithmetic mean, or an
    explicit table over a small grid with nearest-node lookup.
    """

    kind: str
    arity: int = 2
    weights: tuple[float, ...] = ()
    nodes: tuple[float, ...] = ()
    values: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in ("min", "max", "prod", "wmean", "table"):
            raise InputError(f"unknown aggregation kind {self.kind!r}")
        if self.arity < 1:
            raise InputError("aggregation needs arity >= 1")
        if self.kind == "wmean":
            if len(self.weights) != self.arity:
                raise InputError("weighted mean needs one weight per argument")
            if any(w < 0.0 for w in self.weights) or sum(self.weights) <= 0.0:
                raise InputError("weights must be nonnegative with positive sum")
        if self.kind == "table":
            if len(self.values) != len(self.nodes) ** self.arity:
                raise InputError("table needs len(nodes)**arity values")

    def __call__(self, args: Sequence[float]) -> float:
        if len(args) != self.arity:
            raise InputError(f"aggregation expects {self.arity} arguments")
        if self.kind == "min":
            return min(args)
        if self.kind == "max":
            return max(args)
        if self.kind == "prod":
            out = 1.0
            for a in args:
                out = xmul(out, a)
            return out
        if self.kind == "wmean":
            total = sum(self.weights)
            return sum(w * a for w, a in zip(self.weights, args)) / total
        idx = 0
        for a in args:
            best, bd = 0, INF
            for i, t in enumerate(self.nodes):
                d = abs(t - a)
                if d < bd:
                    best, bd = i, d
            idx = idx * len(self.nodes) + best
        return self.values[idx]


def h_min(arity: int = 2) -> NaryOp:
    return NaryOp("min", arity)


def h_max(arity: int = 2) -> NaryOp:
    return NaryOp("max", arity)


def h_prod(arity: int = 2) -> NaryOp:
    return NaryOp("prod", arity)


def h_wmean(weights: Sequence[float]) -> NaryOp:
    return NaryOp("wmean", len(weights), tuple(float(w) for w in weights))


def h_table(nodes: Sequence[float], values: Sequence[float], arity: int = 2) -> NaryOp:
    return NaryOp(
        "table", arity, nodes=tuple(float(x) for x in nodes), values=tuple(float(v) for v in values)
    )


def _tuples(nodes: Sequence[float], k: int):
    if k == 0:
        yield ()
        return
    for head in nodes:
        for rest in _tuples(nodes, k - 1):
            yield (head,) + rest


def check_H_boundedness(
    H: NaryOp, mode: str, grid: Sequence[float] | None = None
) -> PropertyReport:
    """Grid check of H <= min (mode 'above_by_min') or H >= max."""
    if mode not in ("above_by_min", "below_by_max"):
        raise InputError("mode must be 'above_by_min' or 'below_by_max'")
    if grid is None:
        grid = [i / 10.0 for i in range(11)]
    name = f"bounded_{mode}"
    for args in _tuples(tuple(grid), H.arity):
        v = H(args)
        if mode == "above_by_min" and v > min(args) + _SCALAR_SLACK:
            return PropertyReport((CheckResult(name, False, args),), {"n": len(grid)})
        if mode == "below_by_max" and v < max(args) - _SCALAR_SLACK:
            return PropertyReport((CheckResult(name, False, args),), {"n": len(grid)})
    return PropertyReport((CheckResult(name, True),), {"n": len(grid)})


def _check_H_nondecreasing(H: NaryOp, nodes: Sequence[float]) -> CheckResult:
    for args in _tuples(tuple(nodes), H.arity):
        base = H(args)
        for i in range(H.arity):
            for d in nodes:
                if d <= args[i]:
                    continue
                bumped = args[:i] + (d,) + args[i + 1 :]
                if H(bumped) < base - _SCALAR_SLACK:
                    return CheckResult("aggregator_nondecreasing", False, args + (i, d))
    return CheckResult("aggregator_nondecreasing", True)


# ---------------------------------------------------------------------------
# instances and verdicts
# ---------------------------------------------------------------------------


def _freeze_exponents(exponents) -> tuple:
    if exponents is None:
        return ()
    if isinstance(exponents, Mapping):
        items = exponents.items()
    else:
        items = exponents
    out = []
    for k, v in sorted(items):
        if isinstance(v, (list, tuple)):
            out.append((str(k), tuple(float(x) for x in v)))
        else:
            out.append((str(k), float(v)))
    return tuple(out)


@dataclass(frozen=True)
class TheoremInstance:
    """One inequality family applied to concrete data."""

    theorem_id: str
    op: BinaryOp
    measure: Measure
    functions: tuple
    star: BinaryOp | None = None
    H: NaryOp | None = None
    u: tuple[MonotoneTransform, ...] = ()
    psi: tuple[MonotoneTransform, ...] = ()
    phi: tuple[MonotoneTransform, ...] = ()
    exponents: tuple = ()

    def __post_init__(self):
        if self.theorem_id not in THEOREM_IDS:
            raise InputError(f"unknown theorem id {self.theorem_id!r}")
        if not self.functions:
            raise InputError("instance needs at least one function")

    @classmethod
    def make(
        cls,
        theorem_id: str,
        op: BinaryOp,
        measure: Measure,
        functions: Iterable,
        star: BinaryOp | None = None,
        H: NaryOp | None = None,
        u: Iterable[MonotoneTransform] = (),
        psi: Iterable[MonotoneTransform] = (),
        phi: Iterable[MonotoneTransform] = (),
        exponents=None,
    ) -> "TheoremInstance":
        return cls(
            theorem_id=theorem_id,
            op=op,
            measure=measure,
            functions=tuple(functions),
            star=star,
            H=H,
            u=tuple(u),
            psi=tuple(psi),
            phi=tuple(phi),
            exponents=_freeze_exponents(exponents),
        )

    def exponent(self, name: str, default: float = 1.0):
        for k, v in self.exponents:
            if k == name:
                return v
        return default

    def exponents_dict(self) -> dict:
        return {k: v for k, v in self.exponents}


@dataclass(frozen=True)
class InequalityVerdict:
    """Outcome of one verification."""

    theorem_id: str
    lhs: float
    rhs: float
    direction: str  # ">=" or "<="
    margin: float  # lhs - rhs
    holds: bool
    tol: float
    hypotheses_met: bool
    hypothesis_report: PropertyReport
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem_id,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "direction": self.direction,
            "margin": self.margin,
            "holds": self.holds,
            "tol": self.tol,
            "hypotheses_met": self.hypotheses_met,
            "hypothesis_report": self.hypothesis_report.to_json(),
            "notes": list(self.notes),
        }


# ---------------------------------------------------------------------------
# exponent plumbing
# ---------------------------------------------------------------------------


def _two_function_exponents(inst: TheoremInstance):
    """(xi0, xi1, xi2), (om0, om1, om2) for the product-form families."""
    tid = inst.theorem_id
    if tid in ("chebyshev", "rev_chebyshev"):
        return (1.0, 1.0, 1.0), (1.0, 1.0, 1.0)
    if tid in ("holder", "rev_holder"):
        p = inst.exponent("p")
        q = inst.exponent("q")
        if not (p >= 1.0 and q >= 1.0):
            raise InputError("conjugate exponents need p, q >= 1")
        return (1.0, p, q), (1.0, 1.0 / p, 1.0 / q)
    if tid == "minkowski":
        s = inst.exponent("s")
        if not s > 0.0:
            raise InputError("root-mean exponent must be positive")
        return (s, s, s), (1.0 / s, 1.0 / s, 1.0 / s)
    if tid == "rev_minkowski":
        k = inst.exponent("k")
        if not k > 0.0:
            raise InputError("root-mean exponent must be positive")
        return (k, k, k), (1.0 / k, 1.0 / k, 1.0 / k)
    if tid == "star_general":
        xi = tuple(inst.exponent(f"xi{i}") for i in range(3))
        om = tuple(inst.exponent(f"omega{i}") for i in range(3))
    elif tid in ("seminormed_general", "rev_seminormed"):
        xi = (inst.exponent("alpha"), inst.exponent("beta"), inst.exponent("gamma"))
        om = (
            inst.exponent("lambda", inst.exponent("lam")),
            inst.exponent("upsilon"),
            inst.exponent("tau"),
        )
    else:
        raise InputError(f"{tid} is not a two-function family")
    for v in xi + om:
        if not v > 0.0:
            raise InputError("exponents must be positive")
    return xi, om


def _nary_exponents(inst: TheoremInstance, n: int):
    xi = inst.exponent("xi", None)
    om = inst.exponent("omega", None)
    if xi is None:
        xi = tuple(1.0 for _ in range(n + 1))
    if om is None:
        om = tuple(1.0 for _ in range(n + 1))
    if not (isinstance(xi, tuple) and isinstance(om, tuple)):
        raise InputError("n-ary exponents must be sequences xi, omega")
    if len(xi) != n + 1 or len(om) != n + 1:
        raise InputError("need one xi and omega per function plus the outer pair")
    for v in xi + om:
        if not v > 0.0:
            raise InputError("exponents must be positive")
    return xi, om


def _pinv(t: MonotoneTransform, y: float) -> float:
    """Pseudo-inverse: values below t(0) pull back to 0."""
    if y <= t.at_zero():
        return 0.0
    return t.invert(y)


def _pow(x: float, e: float) -> float:
    if e == 1.0:
        return x
    if x == INF:
        return INF
    return x**e


# ---------------------------------------------------------------------------
# scalar condition checks (cached)
# ---------------------------------------------------------------------------

_condition_cache: dict = {}


def _condition_nodes(cap: float, n: int) -> tuple[float, ...]:
    hi = 1.0 if cap == 1.0 else 2.0
    pts = [hi * i / (n - 1) for i in range(n)]
    if cap == INF:
        pts.append(INF)
    return tuple(pts)


def _range_nodes(hi: float, n: int) -> tuple[float, ...]:
    if not (hi > 0.0 and math.isfinite(hi)):
        hi = 1.0
    return tuple(hi * i / (n - 1) for i in range(n))


def _two_function_condition(
    op: BinaryOp, star: BinaryOp, xi, om, reverse: bool, dnodes, cnodes
) -> CheckResult:
    xi0, xi1, xi2 = xi
    om0, om1, om2 = om
    # clamp intermediates so mixed-cap pairings stay inside each domain
    for a in dnodes:
        for b in dnodes:
            sab = eval_op(star, min(a, star.cap), min(b, star.cap))
            for c in cnodes:
                lhs = _pow(eval_op(op, min(_pow(sab, xi0), op.cap), c), om0)
                r1 = eval_op(
                    star, min(_pow(eval_op(op, _pow(a, xi1), c), om1), star.cap), min(b, star.cap)
                )
                r2 = eval_op(
                    star, min(a, star.cap), min(_pow(eval_op(op, _pow(b, xi2), c), om2), star.cap)
                )
                if reverse:
                    bound = min(r1, r2)
                    if lhs > bound + _SCALAR_SLACK:
                        return CheckResult("scalar_condition", False, (a, b, c))
                else:
                    bound = max(r1, r2)
                    if lhs < bound - _SCALAR_SLACK:
                        return CheckResult("scalar_condition", False, (a, b, c))
    return CheckResult("scalar_condition", True)


def _single_condition(tid: str, op: BinaryOp, phi, exps, dnodes, cnodes) -> CheckResult:
    def ev(x, c):
        return eval_op(op, min(x, op.cap), c)

    for a in dnodes:
        for c in cnodes:
            if tid == "jensen":
                lhs = ev(phi[0].apply(a), c)
                rhs = phi[0].apply(ev(a, c))
                bad = lhs < rhs - _SCALAR_SLACK
            elif tid == "rev_jensen":
                lhs = phi[0].apply(ev(a, c))
                rhs = ev(phi[0].apply(a), c)
                bad = lhs > rhs + _SCALAR_SLACK
            elif tid == "thm33":
                lhs = _pinv(phi[0], ev(phi[0].apply(a), c))
                rhs = _pinv(phi[1], ev(phi[1].apply(a), c))
                bad = lhs < rhs - _SCALAR_SLACK
            elif tid == "rev_transform":
                lhs = _pinv(phi[0], ev(phi[0].apply(a), c))
                rhs = _pinv(phi[1], ev(phi[1].apply(a), c))
                bad = lhs > rhs + _SCALAR_SLACK
            elif tid == "lyapunov":
                r, s = exps
                lhs = _pow(ev(_pow(a, s), c), 1.0 / s)
                rhs = _pow(ev(_pow(a, r), c), 1.0 / r)
                bad = lhs < rhs - _SCALAR_SLACK
            else:
                raise InputError(f"no scalar condition for {tid}")
            if bad:
                return CheckResult("scalar_condition", False, (a, c))
    return CheckResult("scalar_condition", True)


def _nary_condition(
    tid: str, op: BinaryOp, H: NaryOp, u, psi, xi, om, reverse: bool, dnodes, cnodes
) -> CheckResult:
    n = H.arity

    def ev(x, c):
        return eval_op(op, min(x, op.cap), c)

    for args in _tuples(dnodes, n):
        if tid in ("thm31", "thm41"):
            base = tuple(psi[i].apply(args[i]) for i in range(n))
        else:
            base = args
        hval = H(base)
        for c in cnodes:
            if tid in ("thm31", "thm41"):
                lhs = _pinv(u[0], ev(u[0].apply(hval), c))
            else:
                lhs = _pow(ev(_pow(hval, xi[0]), c), om[0])
            best = None
            for i in range(n):
                if tid in ("thm31", "thm41"):
                    repl = psi[i].apply(_pinv(u[i + 1], ev(u[i + 1].apply(args[i]), c)))
                else:
                    repl = _pow(ev(_pow(args[i], xi[i + 1]), c), om[i + 1])
                side = H(base[:i] + (repl,) + base[i + 1 :])
                if best is None:
                    best = side
                elif reverse:
                    best = min(best, side)
                else:
                    best = max(best, side)
            if reverse:
                if lhs > best + _SCALAR_SLACK:
                    return CheckResult("scalar_condition", False, args + (c,))
            else:
                if lhs < best - _SCALAR_SLACK:
                    return CheckResult("scalar_condition", False, args + (c,))
    return CheckResult("scalar_condition", True)


def check_scalar_condition(
    condition_id: str,
    op: BinaryOp,
    star: BinaryOp | None = None,
    H: NaryOp | None = None,
    u: Sequence[MonotoneTransform] = (),
    psi: Sequence[MonotoneTransform] = (),
    phi: Sequence[MonotoneTransform] = (),
    exponents=None,
    grid_n: int | None = None,
    hi_data: float | None = None,
    hi_measure: float | None = None,
) -> PropertyReport:
    """Grid check of the per-threshold condition of one family.

    condition ids coincide with the theorem catalog; the two-function
    transformed condition is the n-ary one with arity 2.  The grid spans
    [0, hi_data] for function values and [0, hi_measure] for measure
    values, defaulting to the op domain (capped at 2 when unbounded).
    Slack 1e-12 absorbs float noise from powers.
    """
    cap = op.cap if star is None else min(op.cap, star.cap)
    if hi_data is None:
        hi_data = 1.0 if cap == 1.0 else 2.0
    if hi_measure is None:
        hi_measure = 1.0 if op.cap == 1.0 else 2.0
    if condition_id in TWO_FUNCTION_IDS:
        if star is None:
            raise InputError("two-function condition needs a pointwise operation")
        inst_like = _CondProxy(condition_id, exponents)
        xi, om = _two_function_exponents(inst_like)
        n = grid_n or 13
        dnodes, cnodes = _range_nodes(hi_data, n), _range_nodes(hi_measure, n)
        check = _two_function_condition(
            op, star, xi, om, condition_id in REVERSE_IDS, dnodes, cnodes
        )
    elif condition_id in SINGLE_FUNCTION_IDS:
        n = grid_n or 21
        dnodes, cnodes = _range_nodes(hi_data, n), _range_nodes(hi_measure, n)
        exps = None
        if condition_id == "lyapunov":
            ex = dict(_freeze_exponents(exponents))
            exps = (ex.get("r", 1.0), ex.get("s", 1.0))
        check = _single_condition(condition_id, op, tuple(phi), exps, dnodes, cnodes)
    elif condition_id in NARY_IDS:
        if H is None:
            raise InputError("n-ary condition needs an aggregation")
        per_axis = max(5, int(round(30000 ** (1.0 / (H.arity + 1)))))
        n = grid_n or min(per_axis, 13)
        dnodes, cnodes = _range_nodes(hi_data, n), _range_nodes(hi_measure, n)
        xi = om = ()
        if condition_id in ("thm32", "thm42_h"):
            ex = dict(_freeze_exponents(exponents))
            xi = ex.get("xi", tuple(1.0 for _ in range(H.arity + 1)))
            om = ex.get("omega", tuple(1.0 for _ in range(H.arity + 1)))
        check = _nary_condition(
            condition_id,
            op,
            H,
            tuple(u),
            tuple(psi),
            xi,
            om,
            condition_id in REVERSE_IDS,
            dnodes,
            cnodes,
        )
    else:
        raise InputError(f"unknown condition id {condition_id!r}")
    meta = {"nodes": len(dnodes), "hi_data": hi_data, "hi_measure": hi_measure, "slack": _SCALAR_SLACK}
    return PropertyReport((check,), meta)


class _CondProxy:
    """Adapter so exponent extraction works from bare parameter sets."""

    def __init__(self, theorem_id: str, exponents):
        self.theorem_id = theorem_id
        self.exponents = _freeze_exponents(exponents)

    exponent = TheoremInstance.exponent


def _cached(key, thunk):
    hit = _condition_cache.get(key)
    if hit is None:
        hit = thunk()
        _condition_cache[key] = hit
    return hit


# ---------------------------------------------------------------------------
# integral routing and combination
# ---------------------------------------------------------------------------

_PMIN = min_op()
_PMAX = max_op()
_PPROD = prod_op()
_PSUM = sum_op()


def _integral(inst: TheoremInstance, f, exponent: float = 1.0) -> IntegralResult:
    if exponent != 1.0:
        f = apply_transform(power(exponent), f)
    if inst.theorem_id in REVERSE_IDS:
        return semiconormed_integral(inst.op, inst.measure, f)
    if inst.op.cap == 1.0:
        return seminormed_integral(inst.op, inst.measure, f)
    return universal_integral(inst.op, inst.measure, f)


def _combine_nary(H: NaryOp, funcs: Sequence) -> object:
    if all(isinstance(f, FiniteFunction) for f in funcs):
        n = funcs[0].n
        if any(f.n != n for f in funcs):
            raise InputError("carrier size mismatch")
        rows = tuple(H(tuple(f.values[i] for f in funcs)) for i in range(n))
        return FiniteFunction(rows)
    if not all(is_continuous(f) for f in funcs):
        raise InputError("cannot mix carriers in an aggregation")
    from .functions import pointwise_combine

    if H.kind in ("min", "max", "prod"):
        star = {"min": _PMIN, "max": _PMAX, "prod": _PPROD}[H.kind]
        out = funcs[0]
        for f in funcs[1:]:
            out = pointwise_combine(star, out, f)
        return out
    if H.kind == "wmean":
        total = sum(H.weights)
        from .functions import affine

        out = None
        for w, f in zip(H.weights, funcs):
            term = apply_transform(affine(w / total, 0.0), f) if w > 0.0 else None
            if term is None:
                continue
            out = term if out is None else pointwise_combine(_PSUM, out, term)
        if out is None:
            raise InputError("weighted mean needs at least one positive weight")
        return out
    raise InputError("table aggregations need a finite carrier")


# ---------------------------------------------------------------------------
# hypothesis checks
# ---------------------------------------------------------------------------


def _op_report(op: BinaryOp) -> PropertyReport:
    return _cached(("opprops", op), lambda: verify_op_properties(op))


def _summary_check(name: str, rep: PropertyReport) -> CheckResult:
    if rep.passed:
        return CheckResult(name, True)
    failing = [c for c in rep.checks if not c.passed]
    return CheckResult(name, False, failing[0].witness, ", ".join(c.name for c in failing))


def _contraction_check(op: BinaryOp, total: float) -> CheckResult:
    def run():
        nodes = list(_condition_nodes(op.cap, 41))
        for b in nodes:
            if eval_op(op, b, total) > b + _SCALAR_SLACK:
                return CheckResult("measure_contraction", False, (b, total))
        return CheckResult("measure_contraction", True)

    return _cached(("contraction", op, total), run)


def _normalized_check(total: float) -> CheckResult:
    ok = abs(total - 1.0) <= 1e-9
    return CheckResult("measure_normalized", ok, None if ok else (total,))


def _exponent_range_check(products: Sequence[float], dmax: float, want_ge: bool) -> CheckResult:
    """Grid check of x**(1/(xi*om)) >= x (or <=) over the data range."""
    hi = dmax if dmax > 0.0 else 1.0
    name = "exponent_condition"
    for prod in products:
        if prod <= 0.0:
            return CheckResult(name, False, (prod,), "nonpositive exponent product")
        inv = 1.0 / prod
        for i in range(101):
            x = hi * i / 100.0
            lhs = x**inv
            if want_ge and lhs < x - _SCALAR_SLACK:
                return CheckResult(name, False, (x, prod))
            if not want_ge and lhs > x + _SCALAR_SLACK:
                return CheckResult(name, False, (x, prod))
    return CheckResult(name, True)


def _comonotone_check(funcs: Sequence) -> CheckResult:
    for i in range(len(funcs)):
        for j in range(i + 1, len(funcs)):
            ok, wit = is_comonotone(funcs[i], funcs[j])
            if not ok:
                return CheckResult("comonotone", False, (i, j) + tuple(wit))
    return CheckResult("comonotone", True)


def _finiteness_check(results: Sequence[IntegralResult]) -> CheckResult:
    for r in results:
        if not math.isfinite(r.value):
            return CheckResult("finite_integrals", False, (r.value,))
    return CheckResult("finite_integrals", True)


def _data_max(funcs: Sequence) -> float:
    out = 0.0
    for f in funcs:
        s = sup_value(f)
        if math.isfinite(s):
            out = max(out, s)
    return out


# ---------------------------------------------------------------------------
# family evaluators
# ---------------------------------------------------------------------------


def _star_eval(star: BinaryOp, x: float, y: float) -> float:
    return eval_op(star, min(x, star.cap), min(y, star.cap))


def _lattice_tol(inst: TheoremInstance, results: Sequence[IntegralResult]) -> float:
    """0 for pure-lattice finite instances, else 1e-9 plus refine slack."""
    lattice = isinstance(inst.measure, FiniteMonotoneMeasure)
    lattice &= inst.op.kind in (KIND_MIN, KIND_MAX)
    if inst.star is not None:
        lattice &= inst.star.kind in (KIND_MIN, KIND_MAX)
    if inst.H is not None:
        lattice &= inst.H.kind in ("min", "max")
    for _, v in inst.exponents:
        if isinstance(v, tuple):
            lattice &= all(x == 1.0 for x in v)
        else:
            lattice &= v == 1.0
    for t in inst.u + inst.psi + inst.phi:
        lattice &= is_identity(t)
    if lattice:
        return 0.0
    return 1e-9 + sum(r.tol for r in results)


def _mk_verdict(inst, lhs, rhs, checks, results, tol) -> InequalityVerdict:
    direction = "<=" if inst.theorem_id in REVERSE_IDS else ">="
    if tol is None:
        tol = _lattice_tol(inst, results)
    # inf on both sides compares as equal rather than as nan
    margin = 0.0 if lhs == rhs else lhs - rhs
    if direction == ">=":
        holds = margin >= -tol
    else:
        holds = margin <= tol
    report = PropertyReport(tuple(checks), {"tol": tol})
    met = report.passed
    notes = () if met else ("hypotheses_unmet",)
    return InequalityVerdict(
        theorem_id=inst.theorem_id,
        lhs=lhs,
        rhs=rhs,
        direction=direction,
        margin=margin,
        holds=holds,
        tol=tol,
        hypotheses_met=met,
        hypothesis_report=report,
        notes=notes,
    )


def _measure_checks(inst: TheoremInstance) -> list[CheckResult]:
    tid = inst.theorem_id
    total = inst.measure.total
    out = []
    if tid in REVERSE_IDS:
        if tid in ("thm41", "thm42_h"):
            if inst.op.cap == 1.0:
                out.append(_normalized_check(total))
        else:
            out.append(_normalized_check(total))
    else:
        if inst.op.cap == 1.0:
            out.append(_normalized_check(total))
        else:
            out.append(_contraction_check(inst.op, total))
    return out


def _snap_up(x: float) -> float:
    """Round a range bound up to the next 0.25 step for cache reuse.

    Checking the condition on the enlarged box is conservative: a pass
    covers the true data range, a fail can only overreport unmet
    hypotheses, never hide a violation.
    """
    return max(0.25, math.ceil(x * 4.0 - 1e-9) / 4.0)


def _scalar_check(inst: TheoremInstance) -> CheckResult:
    hi_d = _snap_up(_data_max(inst.functions))
    hi_m = _snap_up(inst.measure.total)
    key = (
        "cond",
        inst.theorem_id,
        inst.op,
        inst.star,
        inst.H,
        inst.u,
        inst.psi,
        inst.phi,
        inst.exponents,
        hi_d,
        hi_m,
    )

    def run():
        rep = check_scalar_condition(
            inst.theorem_id,
            inst.op,
            star=inst.star,
            H=inst.H,
            u=inst.u,
            psi=inst.psi,
            phi=inst.phi,
            exponents=inst.exponents,
            hi_data=hi_d,
            hi_measure=hi_m,
        )
        return rep.checks[0]

    return _cached(key, run)


def _verify_two(inst: TheoremInstance, tol, skip_hypotheses: bool) -> InequalityVerdict:
    if len(inst.functions) != 2:
        raise InputError("two-function families need exactly two functions")
    if inst.star is None:
        raise InputError("two-function families need a pointwise operation")
    xi, om = _two_function_exponents(inst)
    f, g = inst.functions
    from .functions import pointwise_combine

    combined = pointwise_combine(inst.star, f, g)
    r_lhs = _integral(inst, combined, xi[0])
    r_f = _integral(inst, f, xi[1])
    r_g = _integral(inst, g, xi[2])
    lhs = _pow(r_lhs.value, om[0])
    rhs = _star_eval(inst.star, _pow(r_f.value, om[1]), _pow(r_g.value, om[2]))
    results = (r_lhs, r_f, r_g)

    checks: list[CheckResult] = []
    if not skip_hypotheses:
        checks.append(_summary_check("op_properties", _op_report(inst.op)))
        checks.append(_summary_check("star_properties", _op_report(inst.star)))
        checks.append(_comonotone_check(inst.functions))
        checks.extend(_measure_checks(inst))
        prods = (xi[1] * om[1], xi[2] * om[2])
        if inst.theorem_id == "star_general":
            checks.append(_exponent_range_check(prods, _data_max(inst.functions), want_ge=True))
        elif inst.theorem_id == "seminormed_general":
            checks.append(_exponent_range_check(prods, 1.0, want_ge=True))
        elif inst.theorem_id == "rev_seminormed":
            checks.append(_exponent_range_check(prods, 1.0, want_ge=False))
        checks.append(_scalar_check(inst))
        checks.append(_finiteness_check(results))
    return _mk_verdict(inst, lhs, rhs, checks, results, tol)


def _verify_single(inst: TheoremInstance, tol, skip_hypotheses: bool) -> InequalityVerdict:
    if len(inst.functions) != 1:
        raise InputError("single-function families need exactly one function")
    f = inst.functions[0]
    tid = inst.theorem_id

    if tid == "jensen":
        phi = inst.phi[0] if inst.phi else identity()
        r_in = _integral(inst, apply_transform(phi, f))
        r_base = _integral(inst, f)
        lhs, rhs = r_in.value, phi.apply(r_base.value)
        results = (r_in, r_base)
    elif tid == "rev_jensen":
        phi = inst.phi[0] if inst.phi else identity()
        r_base = _integral(inst, f)
        r_in = _integral(inst, apply_transform(phi, f))
        lhs, rhs = phi.apply(r_base.value), r_in.value
        results = (r_base, r_in)
    elif tid in ("thm33", "rev_transform"):
        if len(inst.phi) != 2:
            raise InputError("transform comparison needs two transforms")
        p1, p2 = inst.phi
        r1 = _integral(inst, apply_transform(p1, f))
        r2 = _integral(inst, apply_transform(p2, f))
        lhs = _pinv(p1, r1.value)
        rhs = _pinv(p2, r2.value)
        results = (r1, r2)
    elif tid == "lyapunov":
        r = inst.exponent("r")
        s = inst.exponent("s")
        if not (r > 0.0 and s > 0.0):
            raise InputError("moment orders must be positive")
        r_s = _integral(inst, f, s)
        r_r = _integral(inst, f, r)
        lhs = _pow(r_s.value, 1.0 / s)
        rhs = _pow(r_r.value, 1.0 / r)
        results = (r_s, r_r)
    else:
        raise InputError(f"{tid} is not a single-function family")

    checks: list[CheckResult] = []
    if not skip_hypotheses:
        checks.append(_summary_check("op_properties", _op_report(inst.op)))
        checks.extend(_measure_checks(inst))
        checks.append(_scalar_check(inst))
        checks.append(_finiteness_check(results))
    return _mk_verdict(inst, lhs, rhs, checks, results, tol)


def _verify_nary(inst: TheoremInstance, tol, skip_hypotheses: bool) -> InequalityVerdict:
    if inst.H is None:
        raise InputError("n-ary families need an aggregation")
    n = len(inst.functions)
    if inst.H.arity != n:
        raise InputError("aggregation arity must match the function count")
    tid = inst.theorem_id

    if tid in ("thm31", "thm41"):
        if len(inst.u) != n + 1 or len(inst.psi) != n:
            raise InputError("need n+1 outer transforms and n reindexings")
        inners = tuple(
            apply_transform(inst.psi[i], inst.functions[i]) for i in range(n)
        )
        combined = _combine_nary(inst.H, inners)
        r_lhs = _integral(inst, apply_transform(inst.u[0], combined))
        lhs = _pinv(inst.u[0], r_lhs.value)
        parts = []
        results = [r_lhs]
        for i in range(n):
            r_i = _integral(inst, apply_transform(inst.u[i + 1], inst.functions[i]))
            results.append(r_i)
            parts.append(inst.psi[i].apply(_pinv(inst.u[i + 1], r_i.value)))
        rhs = inst.H(tuple(parts))
    else:
        xi, om = _nary_exponents(inst, n)
        combined = _combine_nary(inst.H, inst.functions)
        r_lhs = _integral(inst, combined, xi[0])
        lhs = _pow(r_lhs.value, om[0])
        parts = []
        results = [r_lhs]
        for i in range(n):
            r_i = _integral(inst, inst.functions[i], xi[i + 1])
            results.append(r_i)
            parts.append(_pow(r_i.value, om[i + 1]))
        rhs = inst.H(tuple(parts))

    checks: list[CheckResult] = []
    if not skip_hypotheses:
        checks.append(_summary_check("op_properties", _op_report(inst.op)))
        fin_nodes = _range_nodes(_snap_up(_data_max(inst.functions)), 9)
        checks.append(
            _cached(("Hmono", inst.H, fin_nodes), lambda: _check_H_nondecreasing(inst.H, fin_nodes))
        )
        checks.append(_comonotone_check(inst.functions))
        checks.extend(_measure_checks(inst))
        if tid in ("thm32", "thm42_h"):
            xi, om = _nary_exponents(inst, n)
            prods = tuple(xi[i + 1] * om[i + 1] for i in range(n))
            checks.append(
                _exponent_range_check(prods, _data_max(inst.functions), want_ge=(tid == "thm32"))
            )
        checks.append(_scalar_check(inst))
        checks.append(_finiteness_check(results))
    return _mk_verdict(inst, lhs, rhs, checks, tuple(results), tol)


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------


def verify(
    inst: TheoremInstance, tol: float | None = None, skip_hypotheses: bool = False
) -> InequalityVerdict:
    """Evaluate one instance and return its verdict.

    tol None applies the default policy: 0 for finite lattice-only
    instances, otherwise 1e-9 plus the refinement tolerances of the
    integrals involved.
    """
    if inst.theorem_id in TWO_FUNCTION_IDS:
        return _verify_two(inst, tol, skip_hypotheses)
    if inst.theorem_id in SINGLE_FUNCTION_IDS:
        return _verify_single(inst, tol, skip_hypotheses)
    return _verify_nary(inst, tol, skip_hypotheses)


def verify_two_function(inst: TheoremInstance, tol: float | None = None, **kw) -> InequalityVerdict:
    if inst.theorem_id not in TWO_FUNCTION_IDS:
        raise InputError(f"{inst.theorem_id} is not a two-function family")
    return _verify_two(inst, tol, kw.get("skip_hypotheses", False))


def verify_single_function(
    inst: TheoremInstance, tol: float | None = None, **kw
) -> InequalityVerdict:
    if inst.theorem_id not in SINGLE_FUNCTION_IDS:
        raise InputError(f"{inst.theorem_id} is not a single-function family")
    return _verify_single(inst, tol, kw.get("skip_hypotheses", False))


def verify_nary_H(inst: TheoremInstance, tol: float | None = None, **kw) -> InequalityVerdict:
    if inst.theorem_id not in NARY_IDS:
        raise InputError(f"{inst.theorem_id} is not an n-ary family")
    return _verify_nary(inst, tol, kw.get("skip_hypotheses", False))
