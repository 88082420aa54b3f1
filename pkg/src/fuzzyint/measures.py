"""Monotone measures and survival profiles of measurable functions.

A finite monotone measure is a table over all subsets of {0,...,n-1},
indexed by bitmask, with m(empty) = 0, m(full) > 0 and m monotone under
inclusion.  The continuous carrier uses distorted Lebesgue measures
g(length(A)) on [0, 1].

The survival profile of a pair (m, f) packages the two level functions

    weak(t)   = m({f >= t})        strict(t) = m({f > t})

together with the candidate thresholds where they can jump and, on the
continuous carrier, the refinement segments between candidates.  Both
level functions are evaluated exactly: finite carriers by bitmask lookup,
the continuous family by closed-form level-set lengths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .ops import CheckResult, InputError, PropertyReport
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
    is_continuous,
)

MAX_GROUND_SET = 20


# ---------------------------------------------------------------------------
# measures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteMonotoneMeasure:
    """Set function on 2**n subsets stored as a bitmask-indexed table."""

    n: int
    table: tuple[float, ...]

    def __post_init__(self):
        if not (1 <= self.n <= MAX_GROUND_SET):
            raise InputError(f"ground set size must be in 1..{MAX_GROUND_SET}")
        if len(self.table) != 1 << self.n:
            raise InputError("table must hold 2**n entries")
        if self.table[0] != 0.0:
            raise InputError("measure of the empty set must be 0")
        if not self.table[-1] > 0.0:
            raise InputError("measure of the full set must be positive")
        for v in self.table:
            if math.isnan(v) or v < 0.0:
                raise InputError(f"bad measure value {v!r}")

    @property
    def total(self) -> float:
        return self.table[-1]

    def value(self, subset: int) -> float:
        if not (0 <= subset < (1 << self.n)):
            raise InputError(f"subset mask {subset} out of range")
        return self.table[subset]


def measure_of(m: FiniteMonotoneMeasure, subset: int) -> float:
    return m.value(subset)


def counting_measure(n: int, normalized: bool = False) -> FiniteMonotoneMeasure:
    scale = 1.0 / n if normalized else 1.0
    table = tuple(bin(s).count("1") * scale for s in range(1 << n))
    return FiniteMonotoneMeasure(n, table)


@dataclass(frozen=True)
class DistortedLebesgue:
    """m(A) = distortion(length(A)) on the unit interval."""

    distortion: MonotoneTransform = field(default_factory=lambda: MonotoneTransform("identity"))

    def __post_init__(self):
        g = self.distortion
        if g.apply(0.0) != 0.0:
            raise InputError("distortion must send 0 to 0")
        if not g.apply(1.0) > 0.0:
            raise InputError("distortion must send 1 to a positive value")

    @property
    def total(self) -> float:
        return self.distortion.apply(1.0)


Measure = FiniteMonotoneMeasure | DistortedLebesgue


def validate_measure(m: Measure, grid: int = 101) -> PropertyReport:
    """Full invariant check; monotonicity runs over all covering pairs."""
    if isinstance(m, FiniteMonotoneMeasure):
        checks = [
            CheckResult("empty_zero", m.table[0] == 0.0),
            CheckResult("full_positive", m.total > 0.0),
        ]
        arr = np.asarray(m.table)
        masks = np.arange(1 << m.n)
        witness = None
        for b in range(m.n):
            lower = masks[(masks >> b) & 1 == 0]
            bad = np.nonzero(arr[lower] > arr[lower | (1 << b)])[0]
            if bad.size:
                s = int(lower[bad[0]])
                witness = (s, s | (1 << b))
                break
        checks.append(CheckResult("monotone", witness is None, witness))
        return PropertyReport(checks=tuple(checks), grid={"pairs": "all covering"})
    g = m.distortion
    checks = [
        CheckResult("zero_at_zero", g.apply(0.0) == 0.0),
        CheckResult("positive_at_one", g.apply(1.0) > 0.0),
    ]
    witness = None
    prev = None
    for i in range(grid):
        x = i / (grid - 1)
        y = g.apply(x)
        if prev is not None and y < prev[1]:
            witness = (prev[0], x)
            break
        prev = (x, y)
    checks.append(CheckResult("nondecreasing", witness is None, witness))
    return PropertyReport(checks=tuple(checks), grid={"n": grid})


# ---------------------------------------------------------------------------
# survival profiles
# ---------------------------------------------------------------------------


def _mk_segments(candidates, t_max: float) -> tuple[tuple[float, float], ...]:
    marks = sorted({0.0, t_max} | {c for c in candidates if 0.0 <= c <= t_max})
    return tuple(
        (marks[i - 1], marks[i]) for i in range(1, len(marks)) if marks[i] > marks[i - 1]
    )


@dataclass
class SurvivalProfile:
    """Level functions of one (measure, function) pair.

    weak/strict are exact query functions of the threshold t.  candidates
    are the thresholds where the profile can jump (finite carriers: the
    distinct values of f).  exact means the sup/inf of any nondecreasing
    pairing is attained on the candidates, so no refinement is needed;
    otherwise segments list the spans to search between candidates.
    """

    weak: Callable[[float], float]
    strict: Callable[[float], float]
    candidates: tuple[float, ...]
    t_max: float
    total: float
    exact: bool
    segments: tuple[tuple[float, float], ...] = ()
    # sup{t : {f >= t} is the whole carrier}; the minimum of f.  Exact by
    # construction, which matters because the level measure can round to
    # the total long before the level set is actually full.
    full_sup: float | None = None

    def compose(self, transform: MonotoneTransform) -> "SurvivalProfile":
        """Profile of transform(f) from the profile of f.

        Uses {T(f) >= t} = {f >= T^-1(t)} for strictly increasing T, with
        inverse images snapped to nearby candidates so candidate queries
        stay exact under float round-trips.
        """
        base_weak, base_strict = self.weak, self.strict
        cands = self.candidates
        floor = transform.at_zero()

        def pull_back(t: float) -> float:
            if t <= floor:
                return 0.0
            v = transform.invert(t)
            for c in cands:
                if abs(v - c) <= 1e-12 * max(1.0, abs(c)):
                    return c
            return v

        def weak(t: float) -> float:
            return base_weak(pull_back(t))

        def strict(t: float) -> float:
            if t < floor:
                return base_weak(0.0)
            return base_strict(pull_back(t))

        new_cands = tuple(sorted({transform.apply(c) for c in cands}))
        new_t_max = transform.apply(self.t_max)
        return SurvivalProfile(
            weak=weak,
            strict=strict,
            candidates=new_cands,
            t_max=new_t_max,
            total=self.total,
            exact=self.exact,
            segments=_mk_segments(new_cands, new_t_max),
            full_sup=None if self.full_sup is None else transform.apply(self.full_sup),
        )


def _finite_profile(m: FiniteMonotoneMeasure, f: FiniteFunction) -> SurvivalProfile:
    if f.n != m.n:
        raise InputError("function and measure disagree on carrier size")
    values = f.values
    table = m.table

    def weak(t: float) -> float:
        mask = 0
        for i, v in enumerate(values):
            if v >= t:
                mask |= 1 << i
        return table[mask]

    def strict(t: float) -> float:
        mask = 0
        for i, v in enumerate(values):
            if v > t:
                mask |= 1 << i
        return table[mask]

    cands = tuple(sorted(set(values)))
    return SurvivalProfile(
        weak=weak,
        strict=strict,
        candidates=cands,
        t_max=max(values),
        total=m.total,
        exact=True,
    )


def _pwl_level_lengths(f: PwlFunction, t: float) -> tuple[float, float]:
    """Exact lengths of {f >= t} and {f > t}."""
    weak_len = 0.0
    strict_len = 0.0
    xs, ys = f.xs, f.ys
    for i in range(1, len(xs)):
        x0, x1, y0, y1 = xs[i - 1], xs[i], ys[i - 1], ys[i]
        dx = x1 - x0
        if y0 == y1:
            # flat piece: full length at or above t, nothing strictly above
            if y0 >= t:
                weak_len += dx
            if y0 > t:
                strict_len += dx
            continue
        lo, hi = (y0, y1) if y0 < y1 else (y1, y0)
        if t <= lo:
            weak_len += dx
            strict_len += dx
        elif t < hi:
            frac = (hi - t) / (hi - lo)
            weak_len += dx * frac
            strict_len += dx * frac
        # t >= hi: at most the single endpoint, zero length
    return weak_len, strict_len


def _profile_of(m: DistortedLebesgue, f) -> SurvivalProfile:
    g = m.distortion.apply
    total = m.total

    if isinstance(f, TransformedFunction):
        return _profile_of(m, f.base).compose(f.transform)

    if isinstance(f, ConstFunction):
        c = f.c

        def weak(t: float, c=c) -> float:
            return total if t <= c else g(0.0)

        def strict(t: float, c=c) -> float:
            return total if t < c else g(0.0)

        return SurvivalProfile(weak, strict, (c,), c, total, exact=True, full_sup=c)

    if isinstance(f, PowerFunction):
        coef, p = f.coef, f.p

        def length(t: float) -> float:
            if t <= 0.0:
                return 1.0
            if t >= coef:
                return 0.0
            return 1.0 - (t / coef) ** (1.0 / p)

        def weak(t: float) -> float:
            return g(length(t))

        def strict(t: float) -> float:
            if t == 0.0:
                return g(1.0)
            return g(length(t))

        cands = (0.0, coef)
        return SurvivalProfile(
            weak, strict, cands, coef, total, False, _mk_segments(cands, coef), full_sup=0.0
        )

    if isinstance(f, PwlFunction):

        def weak(t: float) -> float:
            return g(_pwl_level_lengths(f, t)[0])

        def strict(t: float) -> float:
            return g(_pwl_level_lengths(f, t)[1])

        t_max = f.max_value()
        cands = tuple(sorted(set(f.ys)))
        return SurvivalProfile(
            weak, strict, cands, t_max, total, False, _mk_segments(cands, t_max), full_sup=min(f.ys)
        )

    if isinstance(f, CappedFunction):
        base = _profile_of(m, f.base)
        c = f.cap_value
        zero = g(0.0)

        def weak(t: float) -> float:
            return base.weak(t) if t <= c else zero

        def strict(t: float) -> float:
            return base.strict(t) if t < c else zero

        t_max = min(base.t_max, c)
        cands = tuple(sorted({v for v in base.candidates if v <= c} | {t_max}))
        return SurvivalProfile(
            weak,
            strict,
            cands,
            t_max,
            total,
            base.exact,
            _mk_segments(cands, t_max),
            full_sup=None if base.full_sup is None else min(base.full_sup, c),
        )

    if isinstance(f, FlooredFunction):
        base = _profile_of(m, f.base)
        c = f.floor_value

        def weak(t: float) -> float:
            return total if t <= c else base.weak(t)

        def strict(t: float) -> float:
            return total if t < c else base.strict(t)

        t_max = max(base.t_max, c)
        cands = tuple(sorted({v for v in base.candidates if v >= c} | {c}))
        return SurvivalProfile(
            weak,
            strict,
            cands,
            t_max,
            total,
            base.exact,
            _mk_segments(cands, t_max),
            full_sup=None if base.full_sup is None else max(base.full_sup, c),
        )

    if isinstance(f, LatticeCombo):
        # parts are nondecreasing, so each level set is a right interval
        # and the measure of the lattice combination is the lattice of
        # the part measures, distortion included
        parts = tuple(_profile_of(m, p) for p in f.parts)
        pick = min if f.kind == "min" else max

        def weak(t: float) -> float:
            return pick(p.weak(t) for p in parts)

        def strict(t: float) -> float:
            return pick(p.strict(t) for p in parts)

        t_max = pick(p.t_max for p in parts)
        cands = set()
        for p in parts:
            cands |= {v for v in p.candidates if v <= t_max}
        cands |= {t_max}
        cands = tuple(sorted(cands))
        sups = [p.full_sup for p in parts]
        full_sup = None if any(s is None for s in sups) else pick(sups)
        return SurvivalProfile(
            weak, strict, cands, t_max, total, False, _mk_segments(cands, t_max), full_sup=full_sup
        )

    raise InputError(f"no level-set rule for {type(f).__name__}")


def survival(m: Measure, f) -> SurvivalProfile:
    """Survival profile of f under m; exact on both carriers."""
    if isinstance(m, FiniteMonotoneMeasure):
        if not isinstance(f, FiniteFunction):
            raise InputError("finite measures pair with finite functions")
        return _finite_profile(m, f)
    if isinstance(m, DistortedLebesgue):
        if not is_continuous(f):
            raise InputError("distorted Lebesgue measures pair with unit-interval functions")
        return _profile_of(m, f)
    raise InputError(f"unknown measure type {type(m).__name__}")


def essinf(m: Measure, f, tol: float = 1e-12) -> float:
    """Essential infimum sup{t : m({f >= t}) = m(X)}.

    Finite carriers are exact; the continuous carrier brackets between
    candidates and bisects to tol.
    """
    prof = survival(m, f)
    total = prof.total
    if isinstance(m, FiniteMonotoneMeasure) or prof.exact:
        best = 0.0
        for c in prof.candidates:
            if prof.weak(c) == total:
                best = max(best, c)
        return best
    if prof.full_sup is not None:
        # Distortions are strictly increasing, so the level set is full
        # exactly up to min f.  Bisection on weak(t) == total is unreliable
        # here: the level length can round to 1.0 well above min f.
        return min(prof.full_sup, prof.t_max)
    lo = 0.0
    hi = None
    for c in prof.candidates:
        if c > 0.0 and prof.weak(c) == total:
            lo = max(lo, c)
    for c in prof.candidates + (prof.t_max,):
        if c > lo and prof.weak(c) < total:
            hi = c
            break
    if hi is None:
        return prof.t_max if prof.weak(prof.t_max) == total else lo
    a, b = lo, hi
    while b - a > tol:
        mid = 0.5 * (a + b)
        if prof.weak(mid) == total:
            a = mid
        else:
            b = mid
    return a
