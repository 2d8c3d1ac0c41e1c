"""Shared instances and random-instance generators for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from contestlab import Contest, ContestEnvironment, CostFunction


@pytest.fixture
def single_type_env():
    """Complete information: one linear type with unit scale, two opponents."""
    return ContestEnvironment(2, (CostFunction.linear(1.0),), (1.0,))


@pytest.fixture
def two_type_env():
    """The worked two-type instance: N=2, scales (2, 1), equal probabilities."""
    return ContestEnvironment(
        2, (CostFunction.linear(2.0), CostFunction.linear(1.0)), (0.5, 0.5)
    )


@pytest.fixture
def top_prize_contest():
    """Winner-takes-all with unit budget over three ranks."""
    return Contest((0.0, 0.0, 1.0))


def random_probs(rng, k: int) -> tuple[float, ...]:
    return tuple(rng.dirichlet(np.ones(k)))


def random_thetas(rng, k: int) -> tuple[float, ...]:
    """Strictly decreasing scales with comfortable gaps."""
    lowest = rng.uniform(0.3, 1.0)
    increments = rng.uniform(0.1, 1.0, size=k - 1) if k > 1 else np.array([])
    values = lowest + np.concatenate(([0.0], np.cumsum(increments)))
    return tuple(float(v) for v in values[::-1])


def random_linear_env(rng, n_max: int = 6, k_max: int = 4) -> ContestEnvironment:
    n = int(rng.integers(1, n_max + 1))
    k = int(rng.integers(1, k_max + 1))
    types = tuple(CostFunction.linear(t) for t in random_thetas(rng, k))
    return ContestEnvironment(n, types, random_probs(rng, k))


def random_parametric_env(rng, exponent: float, n_max: int = 6, k_max: int = 4, k_min: int = 1):
    n = int(rng.integers(1, n_max + 1))
    k = int(rng.integers(k_min, k_max + 1))
    types = tuple(CostFunction.power(t, exponent) for t in random_thetas(rng, k))
    return ContestEnvironment(n, types, random_probs(rng, k))


def random_monotone_contest(rng, n: int, budget: float = 1.0) -> Contest:
    """Random nondecreasing ladder spending the whole budget."""
    increments = rng.exponential(size=n)
    prizes = np.concatenate(([0.0], np.cumsum(increments)))
    prizes *= budget / prizes[1:].sum()
    return Contest(tuple(float(v) for v in prizes))


def random_spread_contest(rng, n: int, budget: float = 1.0, min_gap: float = 0.1) -> Contest:
    """Strictly increasing ladder: every gap at least min_gap of the average."""
    increments = rng.uniform(min_gap, 1.0, size=n)
    prizes = np.concatenate(([0.0], np.cumsum(increments)))
    prizes *= budget / prizes[1:].sum()
    return Contest(tuple(float(v) for v in prizes))
