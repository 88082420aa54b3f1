"""Binary operations on the extended half-line [0, inf].

Values live in [0, cap] where cap is either 1 or math.inf.  Infinity is
represented by the native float inf, which already orders correctly; the
only non-native rule is the product convention 0 * inf = 0, applied by
:func:`xmul` before any IEEE multiplication can produce a NaN.

An operation is described by a :class:`BinaryOp` record carrying its kind,
neutral element, cap and a set of declared algebraic flags.  Declared flags
are claims; :func:`verify_op_properties` checks them on a finite grid and
reports witnesses for failures.  A grid pass is a certificate for the grid
only, never a proof, and every report says so.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

INF = math.inf

ExtValue = float


class InputError(ValueError):
    """Raised for inputs outside the documented domain of an operation."""


def as_extvalue(x: float, cap: float = INF) -> float:
    """Validate x in [0, cap] and return it as a float."""
    v = float(x)
    if math.isnan(v) or v < 0.0 or v > cap:
        raise InputError(f"value {x!r} outside [0, {cap}]")
    return v


def xmul(a: float, b: float) -> float:
    """Product on [0, inf] with the convention 0 * inf = 0."""
    if a == 0.0 or b == 0.0:
        return 0.0
    return a * b


# ---------------------------------------------------------------------------
# operation descriptors
# ---------------------------------------------------------------------------

KIND_MIN = "min"
KIND_PROD = "prod"
KIND_SMALLEST = "smallest"
KIND_GREATEST = "greatest"
KIND_LUKASIEWICZ = "lukasiewicz"
KIND_DRASTIC = "drastic"
KIND_MAX = "max"
KIND_SUM = "sum"
KIND_PROBSUM = "probsum"
KIND_LUK_CONORM = "luk_conorm"
KIND_CUSTOM = "custom"

# flags an op may declare; each one is grid-checkable
FLAG_NONDECREASING = "nondecreasing"
FLAG_ANNIHILATOR = "annihilator_zero"
FLAG_NEUTRAL = "neutral"
FLAG_BOUNDED_BY_MIN = "bounded_above_by_min"
FLAG_BOUNDED_BY_MAX = "bounded_below_by_max"
FLAG_COMMUTATIVE = "commutative"
FLAG_ASSOCIATIVE = "associative"

_MULT_FLAGS = frozenset(
    {FLAG_NONDECREASING, FLAG_ANNIHILATOR, FLAG_NEUTRAL, FLAG_COMMUTATIVE, FLAG_ASSOCIATIVE}
)
_ADD_FLAGS = frozenset(
    {FLAG_NONDECREASING, FLAG_NEUTRAL, FLAG_COMMUTATIVE, FLAG_ASSOCIATIVE}
)


@dataclass(frozen=True)
class BinaryOp:
    """A nondecreasing binary operation on [0, cap].

    neutral is e with x (op) e = x where declared, cap bounds the domain,
    and declared_flags list the algebraic properties the op claims.  Custom
    kinds evaluate through fn; table-backed customs snap arguments to the
    nearest table node, without interpolation.
    """

    kind: str
    neutral: float
    cap: float = INF
    declared_flags: frozenset = field(default_factory=frozenset)
    fn: Callable[[float, float], float] | None = None
    table_nodes: tuple[float, ...] = ()
    table_values: tuple[float, ...] = ()
    name: str = ""

    def __call__(self, a: float, b: float) -> float:
        return eval_op(self, a, b)

    def label(self) -> str:
        return self.name or self.kind


def _nearest_index(nodes: Sequence[float], x: float) -> int:
    # nodes are sorted; linear scan is fine for the small tables we ship
    best, bd = 0, INF
    for i, t in enumerate(nodes):
        d = abs(t - x)
        if d < bd:
            best, bd = i, d
    return best


def eval_op(op: BinaryOp, a: float, b: float) -> float:
    """Evaluate op(a, b), validating both arguments against op.cap."""
    a = as_extvalue(a, op.cap)
    b = as_extvalue(b, op.cap)
    k = op.kind
    if k == KIND_MIN:
        return a if a <= b else b
    if k == KIND_PROD:
        return xmul(a, b)
    if k == KIND_SMALLEST:
        # smallest pseudo-multiplication with neutral e:
        # 0 below e on both sides, max when both reach e, min otherwise
        e = op.neutral
        if a < e and b < e:
            return 0.0
        if a >= e and b >= e:
            return a if a >= b else b
        return a if a <= b else b
    if k == KIND_GREATEST:
        # greatest pseudo-multiplication with neutral e
        e = op.neutral
        if a == 0.0 or b == 0.0:
            return 0.0
        if a <= e and b <= e:
            return a if a <= b else b
        if a > e and b > e:
            return INF
        return a if a >= b else b
    if k == KIND_LUKASIEWICZ:
        return max(0.0, a + b - 1.0)
    if k == KIND_DRASTIC:
        if b == 1.0:
            return a
        if a == 1.0:
            return b
        return 0.0
    if k == KIND_MAX:
        return a if a >= b else b
    if k == KIND_SUM:
        return a + b
    if k == KIND_PROBSUM:
        return a + b - a * b
    if k == KIND_LUK_CONORM:
        return min(1.0, a + b)
    if k == KIND_CUSTOM:
        if op.fn is not None:
            return float(op.fn(a, b))
        if op.table_nodes:
            i = _nearest_index(op.table_nodes, a)
            j = _nearest_index(op.table_nodes, b)
            return op.table_values[i * len(op.table_nodes) + j]
        raise InputError("custom op needs fn or table")
    raise InputError(f"unknown op kind {k!r}")


# -- factories --------------------------------------------------------------


def min_op(cap: float = INF) -> BinaryOp:
    return BinaryOp(
        KIND_MIN,
        neutral=cap,
        cap=cap,
        declared_flags=_MULT_FLAGS | {FLAG_BOUNDED_BY_MIN},
    )


def prod_op(cap: float = INF) -> BinaryOp:
    flags = _MULT_FLAGS | ({FLAG_BOUNDED_BY_MIN} if cap == 1.0 else frozenset())
    return BinaryOp(KIND_PROD, neutral=1.0, cap=cap, declared_flags=flags)


def smallest_op(e: float) -> BinaryOp:
    if not (0.0 < e):
        raise InputError("neutral must be positive")
    return BinaryOp(
        KIND_SMALLEST,
        neutral=e,
        cap=INF,
        declared_flags=frozenset({FLAG_NONDECREASING, FLAG_ANNIHILATOR, FLAG_NEUTRAL, FLAG_COMMUTATIVE}),
    )


def greatest_op(e: float) -> BinaryOp:
    if not (0.0 < e):
        raise InputError("neutral must be positive")
    return BinaryOp(
        KIND_GREATEST,
        neutral=e,
        cap=INF,
        declared_flags=frozenset({FLAG_NONDECREASING, FLAG_ANNIHILATOR, FLAG_NEUTRAL, FLAG_COMMUTATIVE}),
    )


def lukasiewicz_op() -> BinaryOp:
    return BinaryOp(
        KIND_LUKASIEWICZ, neutral=1.0, cap=1.0, declared_flags=_MULT_FLAGS | {FLAG_BOUNDED_BY_MIN}
    )


def drastic_op() -> BinaryOp:
    return BinaryOp(
        KIND_DRASTIC, neutral=1.0, cap=1.0, declared_flags=_MULT_FLAGS | {FLAG_BOUNDED_BY_MIN}
    )


def max_op(cap: float = INF) -> BinaryOp:
    return BinaryOp(KIND_MAX, neutral=0.0, cap=cap, declared_flags=_ADD_FLAGS | {FLAG_BOUNDED_BY_MAX})


def sum_op(cap: float = INF) -> BinaryOp:
    return BinaryOp(KIND_SUM, neutral=0.0, cap=cap, declared_flags=_ADD_FLAGS | {FLAG_BOUNDED_BY_MAX})


def probsum_op() -> BinaryOp:
    return BinaryOp(
        KIND_PROBSUM, neutral=0.0, cap=1.0, declared_flags=_ADD_FLAGS | {FLAG_BOUNDED_BY_MAX}
    )


def luk_conorm_op() -> BinaryOp:
    return BinaryOp(
        KIND_LUK_CONORM, neutral=0.0, cap=1.0, declared_flags=_ADD_FLAGS | {FLAG_BOUNDED_BY_MAX}
    )


def custom_op(
    fn: Callable[[float, float], float],
    neutral: float,
    cap: float = INF,
    flags: Iterable[str] = (),
    name: str = "",
) -> BinaryOp:
    return BinaryOp(
        KIND_CUSTOM, neutral=neutral, cap=cap, declared_flags=frozenset(flags), fn=fn, name=name
    )


def table_op(
    nodes: Sequence[float],
    values: Sequence[float],
    neutral: float,
    cap: float = 1.0,
    flags: Iterable[str] = (),
    name: str = "",
) -> BinaryOp:
    nodes = tuple(float(t) for t in nodes)
    values = tuple(float(v) for v in values)
    if len(values) != len(nodes) ** 2:
        raise InputError("table must hold len(nodes)**2 values")
    return BinaryOp(
        KIND_CUSTOM,
        neutral=neutral,
        cap=cap,
        declared_flags=frozenset(flags),
        table_nodes=nodes,
        table_values=values,
        name=name,
    )


# ---------------------------------------------------------------------------
# grids and property reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    """A finite evaluation grid on [0, hi], optionally tagged with inf.

    For a cap-1 op hi is 1.  For an unbounded op hi is a finite window and
    the inf sentinel is appended so the check exercises the absorbing row.
    """

    cap: float
    n: int = 101
    hi: float | None = None
    extra: tuple[float, ...] = ()

    def nodes(self) -> tuple[float, ...]:
        hi = self.hi
        if hi is None:
            hi = 1.0 if self.cap == 1.0 else 2.0
        if self.n < 2:
            raise InputError("grid needs at least 2 nodes")
        step = hi / (self.n - 1)
        pts = {round(i * step, 15) for i in range(self.n)}
        pts.add(float(hi))
        for x in self.extra:
            if 0.0 <= x <= self.cap and math.isfinite(x):
                pts.add(float(x))
        if self.cap == INF:
            pts.add(INF)
        return tuple(sorted(pts))

    def describe(self) -> dict:
        return {"cap": self.cap, "n": self.n, "hi": self.hi, "extra": list(self.extra)}


def default_grid(op: BinaryOp, n: int = 101) -> GridSpec:
    extra = (op.neutral,) if math.isfinite(op.neutral) else ()
    return GridSpec(cap=op.cap, n=n, extra=extra)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witness: tuple | None = None
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "witness": None if self.witness is None else list(self.witness),
            "detail": self.detail,
        }


@dataclass(frozen=True)
class PropertyReport:
    """Outcome of finite-grid property checks.

    A pass certifies the grid only; the note says so.  Witnesses are input
    tuples where the property fails.
    """

    checks: tuple[CheckResult, ...]
    grid: dict = field(default_factory=dict)
    note: str = "grid-verified"

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.checks)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
            "grid": self.grid,
            "note": self.note,
        }


def _thin(nodes: Sequence[float], limit: int) -> tuple[float, ...]:
    if len(nodes) <= limit:
        return tuple(nodes)
    step = (len(nodes) - 1) / (limit - 1)
    out = sorted({nodes[round(i * step)] for i in range(limit)})
    return tuple(out)


_GRID_SLACK = 1e-12


def _differ(x: float, y: float) -> bool:
    # equality first so inf == inf never reaches the nan-producing subtraction
    if x == y:
        return False
    return not abs(x - y) <= _GRID_SLACK


def _check_nondecreasing(op: BinaryOp, nodes: Sequence[float]) -> CheckResult:
    for b in nodes:
        prev = None
        for a in nodes:
            cur = eval_op(op, a, b)
            if prev is not None and cur < prev[1] - _GRID_SLACK:
                return CheckResult(FLAG_NONDECREASING, False, (prev[0], a, b))
            prev = (a, cur)
    for a in nodes:
        prev = None
        for b in nodes:
            cur = eval_op(op, a, b)
            if prev is not None and cur < prev[1] - _GRID_SLACK:
                return CheckResult(FLAG_NONDECREASING, False, (a, prev[0], b))
            prev = (b, cur)
    return CheckResult(FLAG_NONDECREASING, True)


def _check_annihilator(op: BinaryOp, nodes: Sequence[float]) -> CheckResult:
    for a in nodes:
        if eval_op(op, a, 0.0) > _GRID_SLACK:
            return CheckResult(FLAG_ANNIHILATOR, False, (a, 0.0))
        if eval_op(op, 0.0, a) > _GRID_SLACK:
            return CheckResult(FLAG_ANNIHILATOR, False, (0.0, a))
    return CheckResult(FLAG_ANNIHILATOR, True)


def _check_neutral(op: BinaryOp, e: float, nodes: Sequence[float]) -> CheckResult:
    name = FLAG_NEUTRAL
    if e > op.cap:
        return CheckResult(name, False, (e,), "neutral outside domain")
    for a in nodes:
        if _differ(eval_op(op, a, e), a):
            return CheckResult(name, False, (a, e))
        if _differ(eval_op(op, e, a), a):
            return CheckResult(name, False, (e, a))
    return CheckResult(name, True)


def _check_bounded_by_min(op: BinaryOp, nodes: Sequence[float]) -> CheckResult:
    for a in nodes:
        for b in nodes:
            if eval_op(op, a, b) > min(a, b) + _GRID_SLACK:
                return CheckResult(FLAG_BOUNDED_BY_MIN, False, (a, b))
    return CheckResult(FLAG_BOUNDED_BY_MIN, True)


def _check_bounded_by_max(op: BinaryOp, nodes: Sequence[float]) -> CheckResult:
    for a in nodes:
        for b in nodes:
            if eval_op(op, a, b) < max(a, b) - _GRID_SLACK:
                return CheckResult(FLAG_BOUNDED_BY_MAX, False, (a, b))
    return CheckResult(FLAG_BOUNDED_BY_MAX, True)


def _check_commutative(op: BinaryOp, nodes: Sequence[float]) -> CheckResult:
    for a in nodes:
        for b in nodes:
            if _differ(eval_op(op, a, b), eval_op(op, b, a)):
                return CheckResult(FLAG_COMMUTATIVE, False, (a, b))
    return CheckResult(FLAG_COMMUTATIVE, True)


def _check_associative(op: BinaryOp, nodes: Sequence[float]) -> CheckResult:
    # triples grow fast; thin to keep the check circa 20k evaluations
    thin = _thin(nodes, 26)
    for a in thin:
        for b in thin:
            ab = eval_op(op, a, b)
            for c in thin:
                left = eval_op(op, ab, c)
                right = eval_op(op, a, eval_op(op, b, c))
                if _differ(left, right):
                    return CheckResult(FLAG_ASSOCIATIVE, False, (a, b, c))
    return CheckResult(FLAG_ASSOCIATIVE, True, detail=f"thinned to {len(thin)} nodes")


def verify_op_properties(
    op: BinaryOp,
    properties: Iterable[str] | None = None,
    grid: GridSpec | None = None,
) -> PropertyReport:
    """Check requested properties of op on a finite grid.

    properties defaults to the op's declared flags.  Neutral uses the
    declared neutral element.  Returns a report with one entry per
    property and a witness tuple for each failure.
    """
    if grid is None:
        grid = default_grid(op)
    nodes = grid.nodes()
    props = tuple(properties) if properties is not None else tuple(sorted(op.declared_flags))
    checks = []
    for p in props:
        if p == FLAG_NONDECREASING:
            checks.append(_check_nondecreasing(op, nodes))
        elif p == FLAG_ANNIHILATOR:
            checks.append(_check_annihilator(op, nodes))
        elif p == FLAG_NEUTRAL:
            checks.append(_check_neutral(op, op.neutral, nodes))
        elif p.startswith("neutral="):
            checks.append(_check_neutral(op, float(p.split("=", 1)[1]), nodes))
        elif p == FLAG_BOUNDED_BY_MIN:
            checks.append(_check_bounded_by_min(op, nodes))
        elif p == FLAG_BOUNDED_BY_MAX:
            checks.append(_check_bounded_by_max(op, nodes))
        elif p == FLAG_COMMUTATIVE:
            checks.append(_check_commutative(op, nodes))
        elif p == FLAG_ASSOCIATIVE:
            checks.append(_check_associative(op, nodes))
        else:
            raise InputError(f"unknown property {p!r}")
    return PropertyReport(checks=tuple(checks), grid=grid.describe())


def check_domination(
    dominant: BinaryOp, dominated: BinaryOp, grid: GridSpec | None = None
) -> PropertyReport:
    """Grid check of A(B(a,b), B(c,d)) >= B(A(a,c), A(b,d)).

    The quadruple loop forces a coarse grid; 21 nodes is the default and
    the report records what was used.
    """
    if grid is None:
        cap = min(dominant.cap, dominated.cap)
        grid = GridSpec(cap=cap, n=21, hi=1.0 if cap == 1.0 else 2.0)
    nodes = _thin(grid.nodes(), 21)
    for a in nodes:
        for b in nodes:
            for c in nodes:
                for d in nodes:
                    left = eval_op(dominant, eval_op(dominated, a, b), eval_op(dominated, c, d))
                    right = eval_op(dominated, eval_op(dominant, a, c), eval_op(dominant, b, d))
                    if left < right - 1e-12:
                        return PropertyReport(
                            checks=(CheckResult("domination", False, (a, b, c, d)),),
                            grid=grid.describe(),
                        )
    return PropertyReport(checks=(CheckResult("domination", True),), grid=grid.describe())


def _phi_eval(phi, x: float) -> float:
    if callable(phi):
        return float(phi(x))
    return float(phi.apply(x))


def check_distributivity(
    phi, star: BinaryOp, mode: str = "sub", grid: GridSpec | None = None
) -> PropertyReport:
    """Grid check of phi(x star y) against phi(x) star phi(y).

    mode 'sub' demands phi(x star y) <= phi(x) star phi(y); 'super' the
    reverse.  phi may be a callable or a transform with .apply.
    """
    if mode not in ("sub", "super"):
        raise InputError("mode must be 'sub' or 'super'")
    if grid is None:
        grid = GridSpec(cap=star.cap, n=41, hi=1.0 if star.cap == 1.0 else 2.0)
    nodes = tuple(t for t in grid.nodes() if math.isfinite(t))
    name = f"{mode}distributive"
    for x in nodes:
        for y in nodes:
            lhs = _phi_eval(phi, eval_op(star, x, y))
            rhs = eval_op(star, min(_phi_eval(phi, x), star.cap), min(_phi_eval(phi, y), star.cap))
            bad = lhs > rhs + 1e-12 if mode == "sub" else lhs < rhs - 1e-12
            if bad:
                return PropertyReport(
                    checks=(CheckResult(name, False, (x, y)),), grid=grid.describe()
                )
    return PropertyReport(checks=(CheckResult(name, True),), grid=grid.describe())
