"""Continuum equilibrium, quantile discretization, and CDF convergence."""

import numpy as np
import pytest

from contestlab import (
    ArgumentError,
    Contest,
    ContinuumEnvironment,
    boundaries_closed_form,
    continuum_effort_cdf,
    continuum_strategy,
    convergence_report,
    discretize,
    solve,
    validate_environment,
)


@pytest.fixture
def uniform_example():
    """Marginal costs uniform on [1, 2], one opponent, single unit prize.

    Hand-solved: effort of type theta is log(2/theta), top effort log 2, and
    the population effort CDF is 2 - 2 exp(-x) on [0, log 2].
    """
    return ContinuumEnvironment.uniform(1, 1.0, 2.0), Contest((0.0, 1.0))


class TestContinuumStrategy:
    def test_top_type_exerts_nothing(self, uniform_example):
        cenv, contest = uniform_example
        assert continuum_strategy(cenv, contest, 2.0) == 0.0

    def test_hand_values(self, uniform_example):
        cenv, contest = uniform_example
        assert continuum_strategy(cenv, contest, 1.0) == pytest.approx(
            np.log(2.0), abs=1e-10
        )
        assert continuum_strategy(cenv, contest, 1.5) == pytest.approx(
            np.log(4.0 / 3.0), abs=1e-10
        )

    def test_decreasing_in_theta(self, uniform_example):
        cenv, contest = uniform_example
        thetas = np.linspace(1.0, 2.0, 21)
        efforts = [continuum_strategy(cenv, contest, float(t)) for t in thetas]
        assert all(a > b for a, b in zip(efforts, efforts[1:]))

    def test_rejects_theta_outside_support(self, uniform_example):
        cenv, contest = uniform_example
        with pytest.raises(ArgumentError):
            continuum_strategy(cenv, contest, 0.5)


class TestContinuumEffortCdf:
    def test_zero_below_support(self, uniform_example):
        cenv, contest = uniform_example
        assert continuum_effort_cdf(cenv, contest, 0.0) == 0.0
        assert continuum_effort_cdf(cenv, contest, -1.0) == 0.0

    def test_saturates_at_top_effort(self, uniform_example):
        cenv, contest = uniform_example
        assert continuum_effort_cdf(cenv, contest, np.log(2.0)) == pytest.approx(1.0, abs=1e-9)

    def test_hand_value(self, uniform_example):
        cenv, contest = uniform_example
        assert continuum_effort_cdf(cenv, contest, 0.2) == pytest.approx(
            2.0 - 2.0 * np.exp(-0.2), abs=1e-9
        )

    def test_nondecreasing(self, uniform_example):
        cenv, contest = uniform_example
        xs = np.linspace(0.0, 0.75, 31)
        values = [continuum_effort_cdf(cenv, contest, float(x)) for x in xs]
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))


class TestDistributionFamilies:
    def test_power_family_quantile_roundtrip(self):
        cenv = ContinuumEnvironment.power(2, 1.0, 3.0, shape=2.0)
        for q in np.linspace(0.0, 1.0, 11):
            assert cenv.cdf(cenv.quantile(float(q))) == pytest.approx(float(q), abs=1e-12)

    def test_tabulated_family_roundtrip(self):
        cenv = ContinuumEnvironment.tabulated(
            1, [(1.0, 0.0), (1.5, 0.4), (2.0, 1.0)]
        )
        for q in (0.1, 0.4, 0.75):
            assert cenv.cdf(cenv.quantile(q)) == pytest.approx(q, abs=1e-10)

    def test_rejects_bad_support(self):
        with pytest.raises(ArgumentError):
            ContinuumEnvironment.uniform(1, 2.0, 1.0)
        with pytest.raises(ArgumentError):
            ContinuumEnvironment.uniform(1, 0.0, 1.0)


class TestDiscretize:
    def test_two_atoms_sit_at_quartile_midpoints(self, uniform_example):
        cenv, _ = uniform_example
        env = discretize(cenv, 2)
        assert tuple(cf.theta for cf in env.types) == pytest.approx((1.75, 1.25))
        assert env.probs == (0.5, 0.5)

    def test_single_atom_is_the_median(self, uniform_example):
        cenv, _ = uniform_example
        env = discretize(cenv, 1)
        assert env.types[0].theta == pytest.approx(1.5)

    def test_probabilities_sum_to_one(self, uniform_example):
        cenv, _ = uniform_example
        for n in (1, 3, 10, 64):
            env = discretize(cenv, n)
            assert sum(env.probs) == pytest.approx(1.0, abs=1e-12)
            assert validate_environment(env).passed

    def test_step_cdf_converges_pointwise(self, uniform_example):
        cenv, _ = uniform_example
        thetas = np.linspace(1.05, 1.95, 7)
        previous = None
        for n in (8, 64, 512):
            env = discretize(cenv, n)
            atoms = np.array([cf.theta for cf in env.types])
            worst = max(
                abs(np.mean(atoms <= t) - cenv.cdf(float(t))) for t in thetas
            )
            if previous is not None:
                assert worst < previous
            previous = worst


class TestConvergence:
    def test_uniform_example_gaps_shrink(self, uniform_example):
        cenv, contest = uniform_example
        report = convergence_report(cenv, contest, [4, 16, 64, 256])
        gaps = [gap for _, gap in report.entries]
        assert all(b < a for a, b in zip(gaps, gaps[1:]))
        assert gaps[-1] < 0.05
        assert report.max_effort == pytest.approx(np.log(2.0), abs=1e-10)

    def test_gap_vanishes_beyond_the_support(self, uniform_example):
        cenv, contest = uniform_example
        xs = np.linspace(1.1 * np.log(2.0), 2.0, 5)
        report = convergence_report(cenv, contest, [8], x_grid=xs)
        assert report.entries[0][1] == pytest.approx(0.0, abs=1e-12)

    def test_boundary_points_approach_the_strategy(self, uniform_example):
        cenv, contest = uniform_example
        for theta in (1.25, 1.5, 1.75):
            target = continuum_strategy(cenv, contest, theta)
            gaps = []
            for n in (4, 16, 64, 256):
                env = discretize(cenv, n)
                atoms = [cf.theta for cf in env.types]
                bracketing = sum(1 for t in atoms if t > theta)
                bounds = boundaries_closed_form(env, contest)
                b_val = bounds[bracketing - 1] if bracketing >= 1 else 0.0
                gaps.append(abs(b_val - target))
            assert all(b < a for a, b in zip(gaps, gaps[1:]))
            assert gaps[-1] < 5e-3

    def test_power_family_converges_too(self):
        cenv = ContinuumEnvironment.power(1, 1.0, 2.0, shape=2.0)
        contest = Contest((0.0, 1.0))
        report = convergence_report(cenv, contest, [4, 32], grid_points=129)
        gaps = [gap for _, gap in report.entries]
        assert gaps[-1] < gaps[0]
        assert gaps[-1] < 0.05

    def test_tabulated_family_converges_too(self):
        cenv = ContinuumEnvironment.tabulated(
            1, [(1.0, 0.0), (1.4, 0.35), (1.7, 0.7), (2.0, 1.0)]
        )
        contest = Contest((0.0, 1.0))
        report = convergence_report(cenv, contest, [4, 32], grid_points=129)
        gaps = [gap for _, gap in report.entries]
        assert gaps[-1] < gaps[0]

    def test_jobs_do_not_change_gaps(self, uniform_example):
        cenv, contest = uniform_example
        serial = convergence_report(cenv, contest, [4, 16], grid_points=65)
        threaded = convergence_report(cenv, contest, [4, 16], grid_points=65, jobs=2)
        assert serial.entries == threaded.entries

    def test_rejects_unordered_n_list(self, uniform_example):
        cenv, contest = uniform_example
        with pytest.raises(ArgumentError):
            convergence_report(cenv, contest, [16, 4])

    def test_solver_failures_carry_the_atom_count(self, uniform_example, monkeypatch):
        import contestlab.continuum as continuum_module

        cenv, contest = uniform_example

        def broken_solve(env, c):
            raise ArgumentError("synthetic failure")

        monkeypatch.setattr(continuum_module, "solve", broken_solve)
        with pytest.raises(Exception, match="n=4"):
            convergence_report(cenv, contest, [4])


class TestFiniteContinuumAgreement:
    def test_finite_solution_tracks_strategy_at_midpoints(self, uniform_example):
        # at large n the k-th boundary sits close to the strategy of the type
        # just below it
        cenv, contest = uniform_example
        env = discretize(cenv, 128)
        eqm = solve(env, contest)
        for k in (16, 64, 100):
            theta_k = env.types[k - 1].theta
            assert eqm.boundaries[k] == pytest.approx(
                continuum_strategy(cenv, contest, theta_k), abs=5e-3
            )
