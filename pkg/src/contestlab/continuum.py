"""Continuum-type equilibrium and convergence of finite discretizations.

With a continuum of marginal-cost types and linear costs, the symmetric
equilibrium is a pure strategy: a type theta exerts the integral, from theta
up to the top of the support, of the prize-curve slope at that type's win
probability, weighted by the type density over the marginal cost. Quantile
discretizations of the type CDF produce finite environments whose mixed
equilibria converge to this pure one, which this module measures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.interpolate import PchipInterpolator

from ._quad import adaptive
from .costs import ContestEnvironment, CostFunction
from .equilibrium import exante_cdf, solve
from .errors import ArgumentError, ContestError, NumericError
from .kernels import Contest, prize_expectation_derivative

UNIFORM = "uniform"
POWER = "power"
TABULATED = "tabulated"


@dataclass(frozen=True)
class ContinuumEnvironment:
    """Marginal-cost types on [theta_lo, theta_hi] with CDF from a small family.

    family "uniform" spreads mass evenly; "power" uses ((t - lo)/(hi - lo))**shape;
    "tabulated" interpolates supplied (theta, G) samples monotonically. Costs
    are linear in effort with slope theta, matching the finite-model convention
    that larger scales are less efficient.
    """

    n_others: int
    theta_lo: float
    theta_hi: float
    family: str = UNIFORM
    shape: float = 1.0
    points: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.n_others, (int, np.integer)) or self.n_others < 1:
            raise ArgumentError(f"n_others must be a positive integer, got {self.n_others!r}")
        if not (0.0 < self.theta_lo < self.theta_hi) or not math.isfinite(self.theta_hi):
            raise ArgumentError(
                f"need 0 < theta_lo < theta_hi, got ({self.theta_lo!r}, {self.theta_hi!r})"
            )
        if self.family not in (UNIFORM, POWER, TABULATED):
            raise ArgumentError(f"unknown type-distribution family {self.family!r}")
        if self.family == POWER and not self.shape > 0.0:
            raise ArgumentError(f"power family needs a positive shape, got {self.shape!r}")
        if self.family == TABULATED:
            if self.points is None or len(self.points) < 2:
                raise ArgumentError("tabulated CDFs need at least two sample points")
            pts = tuple((float(t), float(g)) for t, g in self.points)
            ts = [p[0] for p in pts]
            gs = [p[1] for p in pts]
            if ts[0] != self.theta_lo or ts[-1] != self.theta_hi:
                raise ArgumentError("tabulated CDF must span the full support")
            if gs[0] != 0.0 or gs[-1] != 1.0:
                raise ArgumentError("tabulated CDF must run from 0 to 1")
            if any(b <= a for a, b in zip(ts, ts[1:])) or any(
                b <= a for a, b in zip(gs, gs[1:])
            ):
                raise ArgumentError("tabulated CDF samples must be strictly increasing")
            object.__setattr__(self, "points", pts)

    @classmethod
    def uniform(cls, n_others: int, theta_lo: float, theta_hi: float) -> "ContinuumEnvironment":
        return cls(n_others, float(theta_lo), float(theta_hi), family=UNIFORM)

    @classmethod
    def power(cls, n_others: int, theta_lo: float, theta_hi: float, shape: float) -> "ContinuumEnvironment":
        return cls(n_others, float(theta_lo), float(theta_hi), family=POWER, shape=float(shape))

    @classmethod
    def tabulated(cls, n_others: int, points) -> "ContinuumEnvironment":
        pts = tuple((float(t), float(g)) for t, g in points)
        return cls(n_others, pts[0][0], pts[-1][0], family=TABULATED, points=pts)

    @cached_property
    def _interp(self) -> PchipInterpolator:
        ts = np.array([p[0] for p in self.points])
        gs = np.array([p[1] for p in self.points])
        return PchipInterpolator(ts, gs, extrapolate=False)

    @cached_property
    def _interp_density(self):
        return self._interp.derivative()

    def cdf(self, theta):
        arr = np.clip(np.asarray(theta, dtype=float), self.theta_lo, self.theta_hi)
        u = (arr - self.theta_lo) / (self.theta_hi - self.theta_lo)
        if self.family == UNIFORM:
            out = u
        elif self.family == POWER:
            out = np.power(u, self.shape)
        else:
            out = self._interp(arr)
        return float(out) if np.ndim(theta) == 0 else out

    def pdf(self, theta):
        arr = np.clip(np.asarray(theta, dtype=float), self.theta_lo, self.theta_hi)
        span = self.theta_hi - self.theta_lo
        if self.family == UNIFORM:
            out = np.full_like(arr, 1.0 / span)
        elif self.family == POWER:
            u = (arr - self.theta_lo) / span
            out = self.shape * np.power(u, self.shape - 1.0) / span
        else:
            out = self._interp_density(arr)
        return float(out) if np.ndim(theta) == 0 else out

    def quantile(self, q: float) -> float:
        if not 0.0 <= q <= 1.0:
            raise ArgumentError(f"quantile level must lie in [0, 1], got {q!r}")
        span = self.theta_hi - self.theta_lo
        if self.family == UNIFORM:
            return self.theta_lo + q * span
        if self.family == POWER:
            return self.theta_lo + span * q ** (1.0 / self.shape)
        lo, hi = self.theta_lo, self.theta_hi
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if self.cdf(mid) < q:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)


def continuum_strategy(cenv: ContinuumEnvironment, contest: Contest, theta: float) -> float:
    """Pure-strategy equilibrium effort of type theta.

    The integral of the prize-curve slope at win probability 1 - G(t), scaled
    by the density over the marginal cost, from theta to the top of the
    support. Decreasing in theta and identically zero at the top type. For
    tabulated distributions the integration is split at the interpolation
    knots, where the density has kinks.
    """
    if cenv.n_others != contest.n_opponents:
        raise ArgumentError("environment and contest disagree on the number of opponents")
    if not cenv.theta_lo <= theta <= cenv.theta_hi:
        raise ArgumentError(
            f"theta must lie in [{cenv.theta_lo}, {cenv.theta_hi}], got {theta!r}"
        )

    def integrand(ts: np.ndarray) -> np.ndarray:
        win = 1.0 - np.clip(cenv.cdf(ts), 0.0, 1.0)
        return (
            np.atleast_1d(prize_expectation_derivative(contest, win))
            * np.atleast_1d(cenv.pdf(ts))
            / ts
        )

    pieces = [float(theta), cenv.theta_hi]
    if cenv.family == TABULATED:
        pieces += [knot for knot, _ in cenv.points if theta < knot < cenv.theta_hi]
    pieces = sorted(set(pieces))
    tol = 1e-11 / max(len(pieces) - 1, 1)
    return sum(adaptive(integrand, a, b, tol=tol) for a, b in zip(pieces, pieces[1:]))


def _effort_cdf(cenv, contest, x: float, upper: float) -> float:
    if x <= 0.0:
        return 0.0
    if x >= upper:
        return 1.0
    lo, hi = cenv.theta_lo, cenv.theta_hi
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        # effort decreases in theta, so overshooting means theta(x) is larger
        if continuum_strategy(cenv, contest, mid) > x:
            lo = mid
        else:
            hi = mid
    return 1.0 - cenv.cdf(0.5 * (lo + hi))


def continuum_effort_cdf(cenv: ContinuumEnvironment, contest: Contest, x: float) -> float:
    """CDF of equilibrium effort: one minus the type CDF at the inverse strategy.

    The strategy is strictly decreasing, so its inverse is recovered by
    bisection over the support; below zero the CDF is 0 and above the lowest
    type's effort it is 1.
    """
    upper = continuum_strategy(cenv, contest, cenv.theta_lo)
    return _effort_cdf(cenv, contest, float(x), upper)


def discretize(cenv: ContinuumEnvironment, n: int) -> ContestEnvironment:
    """Replace the type CDF by n equal-probability atoms at quantile midpoints.

    Atom k sits at the quantile of level (2(n-k)+1)/(2n), so scales decrease
    with k matching the finite-model ordering (least efficient first) and stay
    strictly inside the support; the induced step CDF converges pointwise to
    the continuum CDF as n grows.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ArgumentError(f"n must be a positive integer, got {n!r}")
    thetas = [cenv.quantile((2 * (n - k) + 1) / (2 * n)) for k in range(1, n + 1)]
    types = tuple(CostFunction.linear(theta) for theta in thetas)
    return ContestEnvironment(
        n_others=cenv.n_others,
        types=types,
        probs=(1.0 / n,) * n,
    )


@dataclass(frozen=True)
class ConvergenceReport:
    """Sup-norm gaps between finite and continuum effort CDFs, per atom count."""

    entries: tuple[tuple[int, float], ...]
    max_effort: float  # top of the continuum effort support
    grid_points: int


def convergence_report(
    cenv: ContinuumEnvironment,
    contest: Contest,
    n_list,
    x_grid=None,
    grid_points: int = 513,
    jobs: int = 1,
) -> ConvergenceReport:
    """Measure sup |F_n - F| over x_grid for each atom count in n_list.

    For each n the continuum CDF is discretized, the finite equilibrium is
    solved, and its population effort CDF is compared pointwise against the
    continuum one. Solver failures are re-raised with the offending n
    attached. The default grid covers the effort support with a 5% overshoot
    and grid_points points. Per-n solves are independent, so jobs > 1 spreads
    them over threads without changing the result.
    """
    ns = [int(n) for n in n_list]
    if not ns or any(b <= a for a, b in zip(ns, ns[1:])):
        raise ArgumentError(f"n_list must be nonempty and increasing, got {n_list!r}")

    upper = continuum_strategy(cenv, contest, cenv.theta_lo)
    if x_grid is None:
        if grid_points < 2:
            raise ArgumentError(f"grid_points must be at least 2, got {grid_points!r}")
        xs = np.linspace(0.0, 1.05 * upper, int(grid_points))
    else:
        xs = np.asarray(x_grid, dtype=float)
        if xs.size == 0:
            raise ArgumentError("x_grid must be nonempty")
    continuum_vals = np.array([_effort_cdf(cenv, contest, float(x), upper) for x in xs])

    def gap_for(n: int) -> float:
        try:
            env = discretize(cenv, n)
            eqm = solve(env, contest)
        except ContestError as exc:
            raise NumericError(f"discretization n={n} failed: {exc}") from exc
        finite_vals = np.atleast_1d(exante_cdf(eqm, xs))
        return float(np.max(np.abs(finite_vals - continuum_vals)))

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            gaps = list(pool.map(gap_for, ns))
    else:
        gaps = [gap_for(n) for n in ns]
    return ConvergenceReport(
        entries=tuple(zip(ns, gaps)),
        max_effort=upper,
        grid_points=int(xs.size),
    )
