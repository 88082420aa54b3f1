"""Shared helpers for the test suite.

Random objects are always built from an explicit numpy Generator so any
failing case can be reproduced from the seed alone.
"""

from __future__ import annotations

import numpy as np
import pytest

from fuzzyint import FiniteFunction, FiniteMonotoneMeasure, random_table_measure


def rng_of(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed))


def random_finite_function(rng: np.random.Generator, n: int) -> FiniteFunction:
    return FiniteFunction(tuple(float(v) for v in rng.uniform(0.0, 1.0, size=n)))


def random_measure(rng: np.random.Generator, n: int, normalized: bool = True) -> FiniteMonotoneMeasure:
    return random_table_measure(rng, n, normalized=normalized)


@pytest.fixture
def rng() -> np.random.Generator:
    return rng_of(20260825)
