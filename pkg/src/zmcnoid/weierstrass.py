"""Holomorphic data and the closed-form lift for the n-noid family.

The surface of order n comes from the sphere data g = z^(n-1),
omega = i dz / (z^n - 1)^2 with punctures at the n-th roots of unity.  The
vector-valued form

    alpha = (-2 g, 1 + g^2, i (1 - g^2)) omega

is exact up to periods; its primitive F = (X0, X1, X2) has the closed form
implemented in ``lift_closed_form`` (principal log branch, real part zero at
z = 0).  The surface itself is the real part, written in polar coordinates by
``f_polar``.  Points of Lorentz-Minkowski 3-space are ordered (t, x, y) with
inner product <v, w> = -v_t w_t + v_x w_x + v_y w_y.

``integrate_lift_numeric`` is the independent oracle: it integrates alpha
along a polyline by adaptive Gauss-Kronrod quadrature and never touches the
closed form.  ``period_residual`` certifies that loop integrals around the
punctures are purely imaginary, so the real part is single valued.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .quadrature import integrate_polyline

PUNCTURE_GUARD = 1e-12
POLAR_GUARD = 1e-14
PATH_CLEARANCE = 0.05


class PunctureError(ValueError):
    """Evaluation requested too close to a puncture z = zeta^j."""


class PathError(ValueError):
    """Integration path passes too close to a puncture."""


class LorentzVec3(NamedTuple):
    """Point of Lorentz-Minkowski 3-space, ordered (t, x, y)."""

    t: float
    x: float
    y: float


def lorentz_inner(v, w) -> float:
    """Inner product of signature (-, +, +) in the (t, x, y) ordering."""
    return float(-v[0] * w[0] + v[1] * w[1] + v[2] * w[2])


def lorentz_cross(v, w):
    """Lorentzian cross product: <cross(v, w), c> equals det(v, w, c).

    Equals the Euclidean cross product with the t component negated.
    """
    c = np.cross(np.asarray(v, dtype=float), np.asarray(w, dtype=float))
    c[..., 0] = -c[..., 0]
    return c


class HolomorphicLift(NamedTuple):
    """Value of the primitive F = (X0, X1, X2) of alpha."""

    X0: complex
    X1: complex
    X2: complex


@dataclass(frozen=True)
class JorgeMeeksData:
    """Order parameter and derived puncture data for the n-noid."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 2:
            raise ValueError(f"surface order must be an integer >= 2, got {self.n!r}")

    @property
    def zeta(self) -> complex:
        return complex(math.cos(2 * math.pi / self.n), math.sin(2 * math.pi / self.n))

    @property
    def punctures(self) -> np.ndarray:
        j = np.arange(self.n)
        return np.exp(2j * math.pi * j / self.n)


def _check_punctures(data: JorgeMeeksData, z) -> None:
    zn = np.asarray(z, dtype=complex) ** data.n - 1.0
    if np.any(np.abs(zn) <= PUNCTURE_GUARD):
        raise PunctureError(
            f"|z^{data.n} - 1| <= {PUNCTURE_GUARD:g}; alpha has a double pole there"
        )


def alpha(data: JorgeMeeksData, z):
    """The three components of alpha at z (scalar or ndarray).

    Returns an array of shape (3,) + shape(z).  The triple is isotropic:
    -a0^2 + a1^2 + a2^2 = 0 identically.
    """
    _check_punctures(data, z)
    n = data.n
    za = np.asarray(z, dtype=complex)
    den = (za ** n - 1.0) ** 2
    a0 = -2j * za ** (n - 1) / den
    a1 = 1j * (1.0 + za ** (2 * n - 2)) / den
    a2 = -(1.0 - za ** (2 * n - 2)) / den
    return np.stack([a0, a1, a2])


def lift_closed_form(data: JorgeMeeksData, z) -> HolomorphicLift:
    """Closed form of the primitive F(z) = (X0, X1, X2), principal log branch.

    With this branch Re F(0) = (0, 0, 0), so Re F is the surface itself with
    no further normalization.  Scalar z only; use ``alpha`` +
    ``integrate_lift_numeric`` for independent values.
    """
    _check_punctures(data, z)
    n = data.n
    zc = complex(z)
    zn = zc ** n - 1.0
    logs = [np.log(complex(zc - p)) for p in data.punctures]
    c = (n - 1) / n ** 2

    X0 = 2j / (n * zn)
    s1 = sum(
        (data.punctures[j] - data.punctures[j].conjugate()) * logs[j]
        for j in range(1, n)
    )
    X1 = -1j * (zc * (zc ** (n - 2) + 1.0) / (n * zn) + c * s1)
    s2 = sum(
        (data.punctures[j] + data.punctures[j].conjugate()) * logs[j]
        for j in range(n)
    )
    X2 = -zc * (zc ** (n - 2) - 1.0) / (n * zn) + c * s2
    return HolomorphicLift(complex(X0), complex(X1), complex(X2))


def _segment_puncture_distance(a: complex, b: complex, p: complex) -> float:
    d = b - a
    L2 = abs(d) ** 2
    if L2 == 0.0:
        return abs(p - a)
    s = ((p - a) * d.conjugate()).real / L2
    s = min(1.0, max(0.0, s))
    return abs(p - (a + s * d))


def integrate_lift_numeric(
    data: JorgeMeeksData,
    z,
    waypoints=(),
    abs_tol: float = 1e-11,
    max_depth: int = 40,
) -> HolomorphicLift:
    """Quadrature value of F(z) = int_0^z alpha along 0 -> waypoints -> z.

    The polyline must keep distance > PATH_CLEARANCE from every puncture;
    real parts are path independent, imaginary parts depend on the homotopy
    class of the chosen polyline.
    """
    vertices = [0j, *map(complex, waypoints), complex(z)]
    if all(v == vertices[0] for v in vertices):
        return HolomorphicLift(0j, 0j, 0j)
    for a, b in zip(vertices[:-1], vertices[1:]):
        for p in data.punctures:
            dist = _segment_puncture_distance(a, b, complex(p))
            if dist <= PATH_CLEARANCE:
                raise PathError(
                    f"integration segment [{a}, {b}] passes within "
                    f"{dist:.3g} of puncture {p:.6g}"
                )
    val = integrate_polyline(
        lambda w: alpha(data, w), vertices, abs_tol=abs_tol, max_depth=max_depth
    )
    return HolomorphicLift(complex(val[0]), complex(val[1]), complex(val[2]))


def loop_integral(
    data: JorgeMeeksData, j: int, radius: float | None = None, samples: int = 512
):
    """Loop integral of alpha around puncture zeta^j (positively oriented).

    Trapezoid rule on a circle of the given radius (default half the minimal
    puncture spacing); the node count is doubled once and the two values must
    agree, which for this analytic periodic integrand certifies convergence.

    Returns the complex triple of loop integrals.
    """
    n = data.n
    if not 0 <= j < n:
        raise ValueError(f"puncture index {j} out of range for n={n}")
    if radius is None:
        radius = 0.5 * math.sin(math.pi / n)
    if not 0.0 < radius < math.sin(math.pi / n):
        raise ValueError(
            f"radius must lie in (0, sin(pi/n)) = (0, {math.sin(math.pi / n):.6g}) "
            "so the loop encloses exactly one puncture"
        )
    if samples < 64:
        raise ValueError("need at least 64 trapezoid nodes")
    center = complex(data.punctures[j])

    def trapezoid(m: int):
        t = np.linspace(0.0, 2 * math.pi, m, endpoint=False)
        ring = np.exp(1j * t)
        zs = center + radius * ring
        dz = 1j * radius * ring
        return (alpha(data, zs) * dz).mean(axis=-1) * 2 * math.pi

    coarse = trapezoid(samples)
    fine = trapezoid(2 * samples)
    drift = np.max(np.abs(fine - coarse))
    if drift > 1e-10 * (1.0 + np.max(np.abs(fine))):
        raise ValueError(
            f"trapezoid refinement moved the loop integral by {drift:.3g}; "
            "increase samples"
        )
    return fine


def period_residual(
    data: JorgeMeeksData,
    j: int,
    radius: float | None = None,
    samples: int = 512,
) -> float:
    """Max over components of |Re loop integral| about puncture j."""
    loop = loop_integral(data, j, radius=radius, samples=samples)
    return float(np.max(np.abs(loop.real)))


def f_polar(data: JorgeMeeksData, r, theta):
    """The surface in polar coordinates z = r e^(i theta).

    Scalars give a LorentzVec3; arrays give an ndarray of shape
    broadcast(r, theta) + (3,) in (t, x, y) order.  The denominator
    r^(2n) - 2 r^n cos(n theta) + 1 must stay above POLAR_GUARD.
    """
    n = data.n
    ra = np.asarray(r, dtype=float)
    ta = np.asarray(theta, dtype=float)
    scalar = ra.ndim == 0 and ta.ndim == 0
    rn = ra ** n
    den = ra ** (2 * n) - 2.0 * rn * np.cos(n * ta) + 1.0
    if np.any(den <= POLAR_GUARD):
        raise PunctureError(
            f"r^(2n) - 2 r^n cos(n theta) + 1 <= {POLAR_GUARD:g}: too close to a puncture"
        )
    D = n * den
    c = (n - 1) / n ** 2

    x0 = 2.0 * rn * np.sin(n * ta) / D
    x1 = -((ra ** (2 * n - 1) + ra) * np.sin(ta)
           + (ra ** (n + 1) + ra ** (n - 1)) * np.sin((n - 1) * ta)) / D
    x2 = (-(ra ** (2 * n - 1) + ra) * np.cos(ta)
          + (ra ** (n + 1) + ra ** (n - 1)) * np.cos((n - 1) * ta)) / D
    for j in range(1, n):
        ang = 2.0 * math.pi * j / n
        x1 = x1 + c * np.log(ra * ra - 2.0 * ra * np.cos(ta - ang) + 1.0) * math.sin(ang)
    for j in range(n):
        ang = 2.0 * math.pi * j / n
        x2 = x2 + c * np.log(ra * ra - 2.0 * ra * np.cos(ta - ang) + 1.0) * math.cos(ang)

    if scalar:
        return LorentzVec3(float(x0), float(x1), float(x2))
    return np.stack(np.broadcast_arrays(x0, x1, x2), axis=-1)


def companion_minimal(data: JorgeMeeksData, z):
    """Companion Euclidean minimal surface (Re X1, Re X2, -Im X0)."""
    F = lift_closed_form(data, z)
    return (F.X1.real, F.X2.real, -F.X0.imag)


def metrics(data: JorgeMeeksData, z):
    """Conformal factors of the Lorentzian and Euclidean induced metrics.

    Returns (ds2, ds2E) = ((1 - |g|^2)^2, (1 + |g|^2)^2) |omega/dz|^2, the
    coefficients of |dz|^2.  ds2 vanishes exactly on |z| = 1, the fold.
    """
    _check_punctures(data, z)
    n = data.n
    zc = complex(z)
    g2 = abs(zc) ** (2 * (n - 1))
    w2 = 1.0 / abs(zc ** n - 1.0) ** 4
    return ((1.0 - g2) ** 2 * w2, (1.0 + g2) ** 2 * w2)
