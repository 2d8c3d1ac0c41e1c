"""Expected equilibrium effort, by quadrature and in closed form.

The workhorse identity: the win probability of an arbitrary agent is uniform
on [0, 1], so expected effort is the integral over t of the effort an agent
exerts when its win probability is t. That integrand is continuous on [0, 1]
but kinked at the type breakpoints P_k, so quadrature proceeds segment by
segment. Under linear costs the same integral collapses to a dot product
alpha . v whose coefficients depend only on the type distribution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._quad import QUAD_TOL, adaptive
from .costs import ContestEnvironment
from .equilibrium import Equilibrium
from .errors import ArgumentError, CapabilityError
from .kernels import Contest, binom_pmf, binom_tail, prize_expectation


@dataclass(frozen=True)
class AlphaVector:
    """Marginal expected effort per unit of each prize under linear costs.

    coefficients[m-1] is the response of expected effort to prize m. With a
    single type all coefficients equal 1/((N+1) theta); with two or more types
    the top coefficient strictly dominates every other one.
    """

    coefficients: tuple[float, ...]
    env: ContestEnvironment

    def dot(self, contest: Contest) -> float:
        return float(
            np.dot(np.asarray(self.coefficients), np.asarray(contest.prizes[1:]))
        )


def _check_solved(env: ContestEnvironment, contest: Contest, eqm) -> Equilibrium:
    if not isinstance(eqm, Equilibrium):
        raise ArgumentError("expected a solved Equilibrium")
    if eqm.env != env or eqm.contest != contest:
        raise ArgumentError("equilibrium was solved for a different environment or contest")
    return eqm


def expected_effort(
    env: ContestEnvironment,
    contest: Contest,
    eqm: Equilibrium,
    tol: float = QUAD_TOL,
) -> float:
    """Expected effort of an arbitrary agent, integrated segment by segment.

    Each segment [P_{k-1}, P_k] uses a 64-node Gauss-Legendre panel with
    adaptive bisection when two refinement levels disagree beyond tol;
    integrating across the kinks at P_k would degrade convergence, so they are
    always panel endpoints.
    """
    _check_solved(env, contest, eqm)
    total = 0.0
    for k in range(1, env.n_types + 1):
        total += _segment_integral(env, contest, eqm, k, tol)
    return total


def expected_effort_per_type(eqm: Equilibrium, k: int, tol: float = QUAD_TOL) -> float:
    """Expected effort of an agent conditional on being type k."""
    env = eqm.env
    env.type_at(k)
    p_k = env.probs[k - 1]
    return _segment_integral(env, eqm.contest, eqm, k, tol) / p_k


def _segment_integral(env, contest, eqm, k, tol) -> float:
    cf = env.types[k - 1]
    u_k = eqm.utilities[k - 1]
    lo, hi = env.cumulative[k - 1], env.cumulative[k]

    def integrand(ts: np.ndarray) -> np.ndarray:
        levels = np.atleast_1d(prize_expectation(contest, ts)) - u_k
        return np.atleast_1d(cf.inverse(np.maximum(levels, 0.0)))

    return adaptive(integrand, lo, hi, tol=tol)


def alpha_coefficients(env: ContestEnvironment, cost_space: bool = False) -> AlphaVector:
    """Closed-form effort coefficients for a linear parametric type-space.

    alpha_m combines binomial tails of N+1 trials at each breakpoint with the
    increments of the inverse scales. The coefficients use only the scales and
    the type distribution, never the prize values. With cost_space=True the
    linear-base requirement is waived: the same numbers then price expected
    effort *cost* for any parametric base (see expected_cost).
    """
    if not env.parametric:
        raise CapabilityError("alpha coefficients need a parametric type-space")
    if not cost_space and env.base_exponent != 1.0:
        raise CapabilityError(
            "alpha coefficients price effort only under a linear base; "
            "use cost_space=True for the cost-space reading"
        )
    n = env.n_others
    thetas = env.thetas
    n_types = env.n_types
    coeffs = []
    for m in range(1, n + 1):
        acc = 1.0 / thetas[-1]
        for k in range(1, n_types):
            p_k = env.cumulative[k]
            weight = binom_tail(n + 1, m, p_k, "at_least") + (n - m) * binom_pmf(n + 1, m, p_k)
            acc -= weight * (1.0 / thetas[k] - 1.0 / thetas[k - 1])
        coeffs.append(acc / (n + 1))
    return AlphaVector(coefficients=tuple(coeffs), env=env)


def expected_cost(env: ContestEnvironment, contest: Contest) -> float:
    """Expected equilibrium effort *cost* of an arbitrary agent.

    Re-reading the game as one where agents choose their cost level directly
    makes the cost-space game linear in the scales, so the alpha coefficients
    price it for any parametric base: E[c(X)] = sum_m alpha_m v_m, independent
    of the base cost.
    """
    if not env.parametric:
        raise CapabilityError("expected cost in closed form needs a parametric type-space")
    if env.n_others != contest.n_opponents:
        raise ArgumentError("environment and contest disagree on the number of opponents")
    return alpha_coefficients(env, cost_space=True).dot(contest)
