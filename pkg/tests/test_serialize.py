"""Canonical JSON emission, digests, and lossless round trips."""

from __future__ import annotations

import json
import math

import pytest

from fuzzyint import (
    CappedFunction,
    ConstFunction,
    DistortedLebesgue,
    FiniteFunction,
    FiniteMonotoneMeasure,
    FlooredFunction,
    InputError,
    LatticeCombo,
    PowerFunction,
    PwlFunction,
    TheoremInstance,
    TransformedFunction,
    affine,
    compose,
    digest,
    drastic_op,
    dumps_17g,
    function_from_json,
    function_to_json,
    greatest_op,
    h_min,
    h_table,
    h_wmean,
    identity,
    instance_digest,
    instance_from_json,
    instance_to_json,
    luk_conorm_op,
    lukasiewicz_op,
    max_op,
    measure_from_json,
    measure_to_json,
    min_op,
    nary_from_json,
    nary_to_json,
    op_from_json,
    op_to_json,
    power,
    probsum_op,
    prod_op,
    smallest_op,
    sum_op,
    transform_from_json,
    transform_to_json,
    verify,
)


# ---------------------------------------------------------------------------
# canonical emission
# ---------------------------------------------------------------------------


def test_emission_is_single_line_sorted_and_17g():
    s = dumps_17g({"b": 0.1, "a": [1.0, float("inf")], "flag": True})
    assert "\n" not in s
    assert s.index('"a"') < s.index('"b"')
    assert '"inf"' in s
    assert json.loads(s)["b"] == pytest.approx(0.1)


def test_emission_round_trips_float_bits():
    x = 0.1 + 0.2  # 0.30000000000000004
    s = dumps_17g({"x": x})
    assert json.loads(s)["x"] == x


def test_emission_rejects_nan_and_negative_infinity():
    with pytest.raises(InputError):
        dumps_17g({"x": float("nan")})
    with pytest.raises(InputError):
        dumps_17g({"x": float("-inf")})


def test_digest_is_stable_and_order_insensitive():
    a = digest({"x": 1.0, "y": 2.0})
    b = digest({"y": 2.0, "x": 1.0})
    assert a == b
    assert len(a) == 16
    assert a != digest({"x": 1.0, "y": 2.000000001})


# ---------------------------------------------------------------------------
# operation round trips
# ---------------------------------------------------------------------------

ALL_OPS = [
    min_op(),
    min_op(1.0),
    prod_op(1.0),
    smallest_op(1.0),
    smallest_op(0.5),
    greatest_op(2.0),
    lukasiewicz_op(),
    drastic_op(),
    max_op(1.0),
    sum_op(),
    probsum_op(),
    luk_conorm_op(),
]


@pytest.mark.parametrize("op", ALL_OPS, ids=lambda o: f"{o.kind}-{o.neutral}-{o.cap}")
def test_op_round_trip(op):
    back = op_from_json(op_to_json(op))
    assert back == op


def test_op_json_spells_infinite_cap():
    d = op_to_json(min_op())
    assert d["cap"] == "inf"
    assert op_from_json(d).cap == math.inf


def test_unknown_op_kind_rejected():
    with pytest.raises(InputError):
        op_from_json({"kind": "banana", "neutral": 1.0, "cap": 1})


# ---------------------------------------------------------------------------
# transforms, measures, functions
# ---------------------------------------------------------------------------


def test_transform_round_trips():
    for t in (identity(), power(2.5), affine(2.0, 0.25),
              compose(power(2.0), affine(0.5, 0.1))):
        back = transform_from_json(transform_to_json(t))
        for x in (0.0, 0.3, 1.0):
            assert back.apply(x) == t.apply(x)


def test_measure_round_trips():
    m = FiniteMonotoneMeasure(2, (0.0, 0.2, 0.3, 1.0))
    back = measure_from_json(measure_to_json(m))
    assert back == m
    leb = DistortedLebesgue(power(2.0))
    back2 = measure_from_json(measure_to_json(leb))
    assert back2.distortion.apply(0.5) == 0.25


FUNCTION_CASES = [
    FiniteFunction((0.2, 0.8, 0.5)),
    ConstFunction(0.4),
    PowerFunction(2.0),
    PowerFunction(0.5, coef=0.8),
    PwlFunction((0.0, 0.4, 1.0), (0.1, 0.9, 0.3)),
    CappedFunction(PowerFunction(1.0), 0.6),
    FlooredFunction(PwlFunction((0.0, 1.0), (0.0, 1.0)), 0.2),
    LatticeCombo("min", (PowerFunction(1.0), ConstFunction(0.7))),
    TransformedFunction(PowerFunction(1.0), power(0.5)),
]


@pytest.mark.parametrize("f", FUNCTION_CASES, ids=lambda f: type(f).__name__)
def test_function_round_trip(f):
    back = function_from_json(function_to_json(f))
    assert digest(function_to_json(back)) == digest(function_to_json(f))


def test_nary_round_trips():
    for H in (h_min(3), h_wmean((0.25, 0.75)), h_table((0.0, 0.5, 1.0), tuple(
            min(a, b) for a in (0.0, 0.5, 1.0) for b in (0.0, 0.5, 1.0)))):
        back = nary_from_json(nary_to_json(H))
        assert back == H


# ---------------------------------------------------------------------------
# whole instances
# ---------------------------------------------------------------------------


def build_instances():
    m = FiniteMonotoneMeasure(2, (0.0, 0.2, 0.5, 1.0))
    leb = DistortedLebesgue(identity())
    return [
        TheoremInstance.make(
            "chebyshev", min_op(1.0), m,
            [FiniteFunction((0.2, 0.6)), FiniteFunction((0.1, 0.9))],
            star=min_op(1.0),
        ),
        TheoremInstance.make(
            "holder", prod_op(1.0), leb,
            [PowerFunction(1.0), PowerFunction(2.0)],
            star=prod_op(1.0), exponents={"p": 2.0, "q": 2.0},
        ),
        TheoremInstance.make(
            "jensen", min_op(), leb, [PowerFunction(1.0)], phi=[power(2.0)],
        ),
        TheoremInstance.make(
            "lyapunov", min_op(), leb, [PowerFunction(1.0)],
            exponents={"r": 0.5, "s": 2.5},
        ),
        TheoremInstance.make(
            "thm32", min_op(), m,
            [FiniteFunction((0.2, 0.6)), FiniteFunction((0.1, 0.9))],
            H=h_min(2),
            exponents={"xi": (1.0, 1.0, 1.0), "omega": (1.0, 1.0, 1.0)},
        ),
        TheoremInstance.make(
            "rev_chebyshev", max_op(1.0), m,
            [FiniteFunction((0.2, 0.6)), FiniteFunction((0.1, 0.9))],
            star=probsum_op(),
        ),
    ]


@pytest.mark.parametrize("inst", build_instances(), ids=lambda i: i.theorem_id)
def test_instance_round_trip_preserves_digest_and_verdict(inst):
    d = instance_to_json(inst)
    back = instance_from_json(d)
    assert instance_digest(back) == instance_digest(inst)
    v1, v2 = verify(inst), verify(back)
    assert v1.holds == v2.holds
    assert v1.margin == v2.margin


def test_instance_json_is_self_contained():
    inst = build_instances()[0]
    blob = dumps_17g(instance_to_json(inst))
    back = instance_from_json(json.loads(blob))
    assert instance_digest(back) == instance_digest(inst)


def test_instance_digest_separates_distinct_instances():
    digests = {instance_digest(i) for i in build_instances()}
    assert len(digests) == len(build_instances())
