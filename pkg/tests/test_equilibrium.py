"""Solver recursion, closed forms, CDF queries, and inverse-transform sampling."""

import numpy as np
import pytest

from contestlab import (
    ArgumentError,
    CapabilityError,
    Contest,
    ContestEnvironment,
    CostFunction,
    boundaries_closed_form,
    exante_cdf,
    prize_expectation,
    sample,
    solve,
    type_cdf,
    type_index,
    utilities_closed_form,
)
from conftest import random_linear_env, random_monotone_contest, random_parametric_env


class TestSolve:
    def test_single_type(self, single_type_env, top_prize_contest):
        eqm = solve(single_type_env, top_prize_contest)
        assert eqm.boundaries == pytest.approx((0.0, 1.0), abs=1e-12)
        assert eqm.utilities == pytest.approx((0.0,), abs=1e-12)

    def test_two_type_hand_instance(self, two_type_env, top_prize_contest):
        eqm = solve(two_type_env, top_prize_contest)
        assert eqm.utilities == pytest.approx((0.0, 0.125), abs=1e-12)
        assert eqm.boundaries == pytest.approx((0.0, 0.125, 0.875), abs=1e-12)

    def test_scaling_the_budget_scales_linearly(self, two_type_env):
        eqm = solve(two_type_env, Contest((0.0, 0.0, 2.0)))
        assert eqm.utilities == pytest.approx((0.0, 0.25), abs=1e-12)
        assert eqm.boundaries == pytest.approx((0.0, 0.25, 1.75), abs=1e-12)

    def test_rejects_degenerate_contest(self, two_type_env):
        with pytest.raises(ArgumentError):
            solve(two_type_env, Contest((0.0, 0.0, 0.0)))

    def test_rejects_invalid_environment(self, top_prize_contest):
        env = ContestEnvironment(
            2, (CostFunction.linear(1.0), CostFunction.linear(1.0)), (0.5, 0.5)
        )
        with pytest.raises(ArgumentError):
            solve(env, top_prize_contest)

    def test_rejects_mismatched_opponent_counts(self, two_type_env):
        with pytest.raises(ArgumentError):
            solve(two_type_env, Contest((0.0, 1.0)))

    def test_boundaries_strictly_increase(self):
        rng = np.random.default_rng(29)
        for _ in range(20):
            env = random_linear_env(rng)
            contest = random_monotone_contest(rng, env.n_others)
            eqm = solve(env, contest)
            assert all(b < a for b, a in zip(eqm.boundaries, eqm.boundaries[1:]))
            assert all(u2 >= u1 for u1, u2 in zip(eqm.utilities, eqm.utilities[1:]))

    def test_indifference_on_support(self):
        rng = np.random.default_rng(31)
        for exponent in (0.5, 1.0, 2.0):
            env = random_parametric_env(rng, exponent, k_min=2)
            contest = random_monotone_contest(rng, env.n_others)
            eqm = solve(env, contest)
            for k in range(1, env.n_types + 1):
                xs = np.linspace(eqm.boundaries[k - 1], eqm.boundaries[k], 200)
                payoff = prize_expectation(contest, exante_cdf(eqm, xs)) - env.types[
                    k - 1
                ].evaluate(xs)
                residual = np.max(np.abs(payoff - eqm.utilities[k - 1]))
                assert residual <= 1e-8 * contest.top_prize


class TestClosedForms:
    def test_two_type_utilities(self, two_type_env, top_prize_contest):
        assert utilities_closed_form(two_type_env, top_prize_contest) == pytest.approx(
            (0.0, 0.125), abs=1e-12
        )

    def test_single_type_utility_is_zero(self, single_type_env, top_prize_contest):
        assert utilities_closed_form(single_type_env, top_prize_contest) == (0.0,)

    def test_two_type_boundaries(self, two_type_env, top_prize_contest):
        assert boundaries_closed_form(two_type_env, top_prize_contest) == pytest.approx(
            (0.125, 0.875), abs=1e-12
        )

    def test_quadratic_base_boundaries(self, top_prize_contest):
        env = ContestEnvironment(
            2, (CostFunction.power(2.0, 2.0), CostFunction.power(1.0, 2.0)), (0.5, 0.5)
        )
        expected = (np.sqrt(0.125), np.sqrt(0.875))
        assert boundaries_closed_form(env, top_prize_contest) == pytest.approx(
            expected, abs=1e-12
        )

    def test_single_type_boundary(self, top_prize_contest):
        env = ContestEnvironment(2, (CostFunction.linear(4.0),), (1.0,))
        assert boundaries_closed_form(env, top_prize_contest) == pytest.approx(
            (0.25,), abs=1e-12
        )

    def test_closed_forms_match_solver(self):
        rng = np.random.default_rng(37)
        for exponent in (0.5, 1.0, 2.0):
            for _ in range(8):
                env = random_parametric_env(rng, exponent)
                contest = random_monotone_contest(rng, env.n_others)
                eqm = solve(env, contest)
                np.testing.assert_allclose(
                    utilities_closed_form(env, contest), eqm.utilities, atol=1e-9
                )
                np.testing.assert_allclose(
                    boundaries_closed_form(env, contest), eqm.boundaries[1:], atol=1e-9
                )

    def test_three_type_cross_check(self, top_prize_contest):
        env = ContestEnvironment(
            2,
            tuple(CostFunction.linear(t) for t in (4.0, 2.0, 1.0)),
            (1 / 3, 1 / 3, 1 / 3),
        )
        eqm = solve(env, top_prize_contest)
        np.testing.assert_allclose(
            utilities_closed_form(env, top_prize_contest), eqm.utilities, atol=1e-10
        )

    def test_requires_parametric_environment(self, top_prize_contest):
        env = ContestEnvironment(
            2,
            (CostFunction.power(2.0, 2.0), CostFunction.linear(1.0)),
            (0.5, 0.5),
        )
        with pytest.raises(CapabilityError):
            utilities_closed_form(env, top_prize_contest)
        with pytest.raises(CapabilityError):
            boundaries_closed_form(env, top_prize_contest)


class TestTypeIndex:
    def test_endpoints(self, two_type_env):
        assert type_index(two_type_env, 0.0) == 1
        assert type_index(two_type_env, 1.0) == 2

    def test_breakpoint_goes_to_upper_segment(self, two_type_env):
        assert type_index(two_type_env, 0.5) == 2

    def test_rejects_out_of_range(self, two_type_env):
        with pytest.raises(ArgumentError):
            type_index(two_type_env, 1.5)


class TestTypeCdf:
    def test_boundary_values(self, two_type_env, top_prize_contest):
        eqm = solve(two_type_env, top_prize_contest)
        for k in (1, 2):
            assert type_cdf(eqm, k, eqm.boundaries[k - 1]) == 0.0
            assert type_cdf(eqm, k, eqm.boundaries[k]) == 1.0

    def test_single_type_square_root_shape(self, single_type_env, top_prize_contest):
        eqm = solve(single_type_env, top_prize_contest)
        assert type_cdf(eqm, 1, 0.25) == pytest.approx(0.5, abs=1e-10)

    def test_nondecreasing_and_continuous(self, two_type_env):
        # strictly positive prize gaps keep the mixing density bounded, so a
        # 1e-4 grid resolves continuity; a zero bottom gap would put a
        # square-root singularity at b_0 and defeat any fixed grid
        contest = Contest((0.0, 0.4, 0.6))
        eqm = solve(two_type_env, contest)
        for k in (1, 2):
            xs = np.arange(
                eqm.boundaries[k - 1] - 0.01, eqm.boundaries[k] + 0.01, 1e-4
            )
            values = type_cdf(eqm, k, xs)
            assert np.all(np.diff(values) >= -1e-12)
            assert np.max(np.abs(np.diff(values))) <= 1e-3

    def test_nondecreasing_at_singular_endpoint(self, two_type_env, top_prize_contest):
        eqm = solve(two_type_env, top_prize_contest)
        for k in (1, 2):
            xs = np.linspace(eqm.boundaries[k - 1], eqm.boundaries[k], 4000)
            values = type_cdf(eqm, k, xs)
            assert np.all(np.diff(values) >= -1e-12)


class TestExanteCdf:
    def test_segment_junctions(self, two_type_env, top_prize_contest):
        eqm = solve(two_type_env, top_prize_contest)
        for k in (1, 2):
            assert exante_cdf(eqm, eqm.boundaries[k]) == pytest.approx(
                two_type_env.cumulative[k], abs=1e-10
            )

    def test_hand_value_at_first_boundary(self, two_type_env, top_prize_contest):
        eqm = solve(two_type_env, top_prize_contest)
        assert exante_cdf(eqm, 0.125) == pytest.approx(0.5, abs=1e-10)

    def test_clamps_outside_support(self, two_type_env, top_prize_contest):
        eqm = solve(two_type_env, top_prize_contest)
        assert exante_cdf(eqm, -0.5) == 0.0
        assert exante_cdf(eqm, 2.0) == 1.0


class TestSample:
    def test_endpoints_map_to_boundaries(self, two_type_env, top_prize_contest):
        eqm = solve(two_type_env, top_prize_contest)
        for k in (1, 2):
            assert sample(eqm, k, 0.0) == pytest.approx(eqm.boundaries[k - 1], abs=1e-12)
            assert sample(eqm, k, 1.0) == pytest.approx(eqm.boundaries[k], abs=1e-12)

    def test_single_type_midpoint(self, single_type_env, top_prize_contest):
        eqm = solve(single_type_env, top_prize_contest)
        assert sample(eqm, 1, 0.5) == pytest.approx(0.25, abs=1e-12)

    def test_rejects_out_of_range_draw(self, two_type_env, top_prize_contest):
        eqm = solve(two_type_env, top_prize_contest)
        with pytest.raises(ArgumentError):
            sample(eqm, 1, 1.5)

    @pytest.mark.parametrize("k", [1, 2])
    def test_kolmogorov_smirnov_band(self, two_type_env, top_prize_contest, k):
        # empirical CDF of inverse-transform draws must track the analytic CDF
        eqm = solve(two_type_env, top_prize_contest)
        rng = np.random.default_rng(424242)
        n = 100_000
        draws = np.sort(np.asarray(sample(eqm, k, rng.random(n))))
        theory = np.asarray(type_cdf(eqm, k, draws))
        grid = np.arange(1, n + 1) / n
        statistic = max(
            float(np.max(grid - theory)), float(np.max(theory - (grid - 1.0 / n)))
        )
        assert statistic <= 1.358 / np.sqrt(n)
