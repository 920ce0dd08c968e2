"""Chebyshev polynomials of the first and second kind.

All evaluation goes through the three-term recurrence

    T_0 = 1,  T_1 = x,  T_{k+1} = 2 x T_k - T_{k-1}
    U_0 = 1,  U_1 = 2x,  U_{k+1} = 2 x U_k - U_{k-1}

which stays valid for arguments outside [-1, 1], where most of the surface
geometry lives.  The trigonometric closed forms cos(n arccos x) and
sin((n+1) arccos x)/sin(arccos x) are used only as oracles in the test suite.

On the monotone branch [cos(pi/n), inf) the map T_n is a bijection onto
[-1, inf); ``invert_T`` computes its inverse by bracketed bisection refined
with Newton steps.  Two classical identities used downstream are exposed as
residual functions so they can be certified on grids:

    T_n(u) - cos(n t) = 2^(n-1) prod_j (u - cos(t - 2 pi j / n))
    U_{2m}(x) - 1 = 2 T_{m+1}(x) U_{m-1}(x)
"""

from __future__ import annotations

import math

import numpy as np

# Degrees are small in this package (surface order n <= 64, so polynomial
# degree <= 2n - 2 = 126).  The recurrence is accurate in that range; reject
# anything larger instead of silently degrading.
MAX_DEGREE = 128


def _check_degree(n: int) -> None:
    if not isinstance(n, (int, np.integer)):
        raise TypeError(f"degree must be an integer, got {type(n).__name__}")
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    if n > MAX_DEGREE:
        raise ValueError(f"degree {n} exceeds supported cap {MAX_DEGREE}")


def eval_T(n: int, x):
    """Evaluate T_n(x) by the three-term recurrence.

    Args:
        n: polynomial degree, 0 <= n <= MAX_DEGREE.
        x: scalar or ndarray of evaluation points.

    Returns:
        float for scalar input, ndarray otherwise.
    """
    _check_degree(n)
    xa = np.asarray(x, dtype=float)
    if n == 0:
        out = np.ones_like(xa)
    elif n == 1:
        out = xa.copy()
    else:
        prev = np.ones_like(xa)
        cur = xa.copy()
        for _ in range(n - 1):
            prev, cur = cur, 2.0 * xa * cur - prev
        out = cur
    return float(out) if np.isscalar(x) or xa.ndim == 0 else out


def eval_U(n: int, x):
    """Evaluate U_n(x) by the three-term recurrence.

    U_{-1} = 0 is accepted so callers can treat degree offsets uniformly.
    """
    if n == -1:
        xa = np.asarray(x, dtype=float)
        out = np.zeros_like(xa)
        return float(out) if np.isscalar(x) or xa.ndim == 0 else out
    _check_degree(n)
    xa = np.asarray(x, dtype=float)
    if n == 0:
        out = np.ones_like(xa)
    else:
        prev = np.ones_like(xa)
        cur = 2.0 * xa
        for _ in range(n - 1):
            prev, cur = cur, 2.0 * xa * cur - prev
        out = cur
    return float(out) if np.isscalar(x) or xa.ndim == 0 else out


def eval_T_derivative(n: int, x):
    """Derivative of T_n, computed as n * U_{n-1}(x).  Requires n >= 1."""
    if n < 1:
        raise ValueError(f"derivative formula needs degree >= 1, got {n}")
    u = eval_U(n - 1, x)
    return n * u


def invert_T(n: int, y, tol: float = 1e-12):
    """Inverse of T_n on the monotone branch [cos(pi/n), inf).

    Solves T_n(u) = y for u >= cos(pi/n) to absolute tolerance ``tol`` in u.
    The initial bracket [cos(pi/n), max(1, (2y)^(1/n) + 1)] is expanded by
    doubling until it contains the root, narrowed by bisection, and polished
    with Newton steps guarded to stay inside the bracket.  Newton stalls at
    the flat point u = cos(pi/n) (where T_n' vanishes), which the bisection
    phase already resolves.

    Args:
        n: surface order, n >= 2.
        y: right-hand side, scalar or ndarray; every entry must be >= -1.
        tol: absolute tolerance on u.

    Returns:
        float for scalar input, ndarray otherwise.
    """
    if n < 2:
        raise ValueError(f"invert_T needs n >= 2, got {n}")
    ya = np.asarray(y, dtype=float)
    if np.any(ya < -1.0):
        raise ValueError("invert_T: T_n on the monotone branch never goes below -1")
    scalar = np.isscalar(y) or ya.ndim == 0
    ya = np.atleast_1d(ya)

    # T_n(u) - y by recurrence is pure rounding noise near the flat point
    # u = cos(pi/n), which sends bisection on a random walk.  For y in
    # [-1, 1] write y = cos(n theta_y) and use the factored form of
    # T_n(u) - cos(n theta_y): every factor keeps full relative precision,
    # so the sign of the residual stays trustworthy down to ulp distance.
    theta_y = np.arccos(np.clip(ya, -1.0, 1.0)) / n
    in_band = ya <= 1.0

    def residual(u):
        res = eval_T(n, u) - ya
        prod = np.full_like(u, 2.0 ** (n - 1))
        for j in range(n):
            prod = prod * (u - np.cos(theta_y - 2.0 * math.pi * j / n))
        return np.where(in_band, prod, res)

    lo = np.full_like(ya, math.cos(math.pi / n))
    hi = np.maximum(1.0, (2.0 * np.maximum(ya, 0.0)) ** (1.0 / n) + 1.0)
    too_low = eval_T(n, hi) < ya
    while np.any(too_low):
        hi = np.where(too_low, 2.0 * hi, hi)
        too_low = eval_T(n, hi) < ya

    # Bisection: bracket width shrinks by 2 per step; 100 steps reach the
    # floating-point floor for any bracket arising from y <= ~1e300.
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        below = residual(mid) < 0.0
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all(hi - lo <= tol * 1e-3):
            break

    u = 0.5 * (lo + hi)
    for _ in range(4):
        slope = eval_T_derivative(n, u)
        safe = slope > 0
        step = np.where(safe, residual(u) / np.where(safe, slope, 1.0), 0.0)
        cand = u - step
        inside = (cand >= lo) & (cand <= hi)
        u = np.where(inside, cand, u)

    return float(u[0]) if scalar else u


def psi_factorization_residual(n: int, u, theta):
    """Residual of T_n(u) - cos(n t) = 2^(n-1) prod_j (u - cos(t - 2 pi j/n)).

    Returns |lhs - rhs| elementwise; the identity is exact, so the residual
    measures only rounding.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    ua = np.asarray(u, dtype=float)
    ta = np.asarray(theta, dtype=float)
    lhs = eval_T(n, ua) - np.cos(n * ta)
    rhs = np.full(np.broadcast(ua, ta).shape, 2.0 ** (n - 1))
    for j in range(n):
        rhs = rhs * (ua - np.cos(ta - 2.0 * math.pi * j / n))
    out = np.abs(lhs - rhs)
    return float(out) if out.ndim == 0 else out


def kaw_identity_residual(m: int, x):
    """Residual of U_{2m}(x) - 1 = 2 T_{m+1}(x) U_{m-1}(x), valid for m >= 1."""
    if m < 1:
        raise ValueError(f"identity holds for m >= 1, got {m}")
    lhs = eval_U(2 * m, x)
    rhs = 2.0 * np.asarray(eval_T(m + 1, x)) * np.asarray(eval_U(m - 1, x))
    out = np.abs(lhs - 1.0 - rhs)
    return float(out) if out.ndim == 0 else out
