"""Fixed-order Gauss-Legendre panels with adaptive bisection.

The integrands fed through here are smooth except possibly at panel
endpoints (segment breakpoints are never interior), so a 64-node rule per
panel converges fast; bisection kicks in only when two refinement levels
disagree.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(64)

QUAD_TOL = 1e-10


def gauss_panel(f: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> float:
    """64-node Gauss-Legendre approximation of the integral of f over [a, b]."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return half * float(np.dot(_WEIGHTS, f(mid + half * _NODES)))


def adaptive(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float = QUAD_TOL,
    max_depth: int = 32,
) -> float:
    """Integrate f over [a, b], bisecting panels until refinement stabilizes.

    f must accept a vector of evaluation points. The interval is accepted
    once a panel and its two halves agree within tol (split across halves on
    recursion); max_depth caps the recursion near integrable endpoint
    singularities such as sqrt-type integrands.
    """
    if b <= a:
        return 0.0
    return _refine(f, a, b, gauss_panel(f, a, b), tol, max_depth)


def _refine(f, a, b, coarse, tol, depth):
    mid = 0.5 * (a + b)
    left = gauss_panel(f, a, mid)
    right = gauss_panel(f, mid, b)
    fine = left + right
    if abs(fine - coarse) <= tol or depth <= 0 or mid <= a or mid >= b:
        return fine
    half_tol = 0.5 * tol
    return _refine(f, a, mid, left, half_tol, depth - 1) + _refine(
        f, mid, b, right, half_tol, depth - 1
    )
