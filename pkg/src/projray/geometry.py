"""Metrics and symmetric-space structure on complex projective space.

All functions take :class:`~projray.linalg.Ray` values; the overlap
``|<x, y>|`` of the canonical unit representatives drives every metric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotTangent, OrthogonalRays, OutsideSectionDomain, ZeroVector
from .linalg import BallPoint, Ray, as_square, as_vector, check_same_dim, trace_norm

TOL_ORTH = 1e-10


def _angle(x: Ray, y: Ray) -> float:
    """arccos |<x, y>| via atan2, accurate for nearly equal rays as well."""
    if x.dim != y.dim:
        raise DimensionMismatch("rays live in different dimensions", dims=[x.dim, y.dim])
    s = np.vdot(x.rep, y.rep)
    perp = float(np.linalg.norm(y.rep - s * x.rep))
    return math.atan2(perp, abs(s))


def chordal_distance(x: Ray, y: Ray) -> float:
    """Quotient of the sphere metric: sqrt(2 (1 - |<x, y>|)) = 2 sin(d_R / 2), in [0, sqrt 2]."""
    return 2.0 * math.sin(_angle(x, y) / 2.0)


def riemannian_distance(x: Ray, y: Ray) -> float:
    """arccos |<x, y>|, in [0, pi/2]; pi/2 exactly when the rays are orthogonal."""
    return _angle(x, y)


def projector_distance(x: Ray, y: Ray) -> float:
    """Trace-norm distance of the rank-one projectors, 2 sqrt(1 - |<x, y>|^2) = 2 sin d_R."""
    return 2.0 * math.sin(_angle(x, y))


def projector_distance_svd(x: Ray, y: Ray) -> float:
    """Same quantity as :func:`projector_distance`, computed from singular values."""
    if x.dim != y.dim:
        raise DimensionMismatch("rays live in different dimensions", dims=[x.dim, y.dim])
    return trace_norm(x.projector() - y.projector())


def ball_distance(w1: BallPoint, w2: BallPoint) -> float:
    """Trace-norm distance of P_w1 and P_w2; a metric on the ball modulo phase."""
    if w1.dim != w2.dim:
        raise DimensionMismatch("ball points live in different dimensions", dims=[w1.dim, w2.dim])
    return trace_norm(w1.projector() - w2.projector())


def h_value(v, x) -> float:
    """|<v, x>| for a Ray or BallPoint x."""
    v = as_vector(v)
    rep = x.rep if isinstance(x, (Ray, BallPoint)) else as_vector(x)
    check_same_dim(v, rep)
    return float(abs(np.vdot(rep, v)))


def ell_value(v, A) -> float:
    """tr(A P_v) = <A v, v>; real for hermitian A."""
    v = as_vector(v)
    A = as_square(A)
    if A.shape[0] != v.shape[0]:
        raise DimensionMismatch("operator and vector dimensions differ", dims=[A.shape[0], v.shape[0]])
    return float(np.real(np.vdot(v, A @ v)))


def reflect(center: Ray, y: Ray) -> Ray:
    """Point reflection of y through center: [-y + 2 <y, x> x]."""
    if center.dim != y.dim:
        raise DimensionMismatch("rays live in different dimensions", dims=[center.dim, y.dim])
    x = center.rep
    return Ray(-y.rep + 2 * np.vdot(x, y.rep) * x)


def midpoint(x: Ray, y: Ray, tol_orth: float = TOL_ORTH) -> Ray:
    """Metric midpoint of two non-orthogonal rays.

    With y rescaled so that <y, x> = 1, put v = y - x (orthogonal to x) and
    w = (sqrt(1 + |v|^2) - 1)/|v|^2 v; the midpoint is [x + w].  The factor is
    evaluated as 1/(sqrt(1 + |v|^2) + 1), which stays finite at v = 0.
    """
    if x.dim != y.dim:
        raise DimensionMismatch("rays live in different dimensions", dims=[x.dim, y.dim])
    xh = x.rep
    s = np.vdot(xh, y.rep)  # <y, x>
    if abs(s) <= tol_orth:
        raise OrthogonalRays("midpoint undefined for orthogonal rays", overlap=float(abs(s)))
    v = y.rep / s - xh
    nv2 = float(np.real(np.vdot(v, v)))
    if nv2 == 0.0:
        return x
    w = v / (math.sqrt(1.0 + nv2) + 1.0)
    return Ray(xh + w)


@dataclass(frozen=True)
class TangentVector:
    """A tangent vector at ``base``: ``direction`` is orthogonal to base.rep.

    Its norm is the geodesic length reached by :func:`exp_map`.
    """

    base: Ray
    direction: np.ndarray

    def __post_init__(self):
        d = as_vector(self.direction)
        check_same_dim(d, self.base.rep)
        off = abs(np.vdot(self.base.rep, d))
        if off > TOL_ORTH * max(1.0, float(np.linalg.norm(d))):
            raise NotTangent("direction is not orthogonal to the base point", residual=float(off))
        d = d.copy()
        d.setflags(write=False)
        object.__setattr__(self, "direction", d)

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.direction))

    @property
    def beyond_half_pi(self) -> bool:
        """Geodesics longer than pi/2 leave the region where the length equals d_R."""
        return self.length > math.pi / 2


def exp_map(t: TangentVector) -> Ray:
    r = t.length
    if r == 0.0:
        return t.base
    return Ray(math.cos(r) * t.base.rep + math.sin(r) * t.direction / r)


def log_map(x: Ray, y: Ray, tol_orth: float = TOL_ORTH) -> TangentVector:
    """Tangent vector at x whose exponential is y (the inverse of exp_map off the cut locus)."""
    if x.dim != y.dim:
        raise DimensionMismatch("rays live in different dimensions", dims=[x.dim, y.dim])
    s = np.vdot(x.rep, y.rep)
    if abs(s) <= tol_orth:
        raise OrthogonalRays("logarithm undefined for orthogonal rays", overlap=float(abs(s)))
    yh = y.rep * (np.conj(s) / abs(s))  # now <yh, x> = |<y, x>| > 0
    c = min(1.0, abs(s))
    u = yh - c * x.rep
    nu = np.linalg.norm(u)
    if nu == 0.0:
        return TangentVector(x, np.zeros_like(x.rep))
    u = u - np.vdot(x.rep, u) * x.rep
    return TangentVector(x, math.acos(c) * u / np.linalg.norm(u))


def dyadic_chain(x: Ray, y: Ray, depth: int, tol_orth: float = TOL_ORTH) -> list[Ray]:
    """The 2**depth + 1 rays at parameters k / 2**depth on the geodesic from x to y.

    Built only by repeated midpoints.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if x.dim != y.dim:
        raise DimensionMismatch("rays live in different dimensions", dims=[x.dim, y.dim])
    if abs(np.vdot(x.rep, y.rep)) <= tol_orth:
        raise OrthogonalRays("dyadic chain undefined for orthogonal rays",
                             overlap=float(abs(np.vdot(x.rep, y.rep))))
    if depth == 0:
        return [x, y]
    m = midpoint(x, y, tol_orth)
    left = dyadic_chain(x, m, depth - 1, tol_orth)
    right = dyadic_chain(m, y, depth - 1, tol_orth)
    return left[:-1] + right


def phase_normalized_section(g, v0, tol: float = 1e-12) -> np.ndarray:
    """Representative t g (|t| = 1) of the class of g in PU with <t g v0, v0> > 0.

    Defined on the open set where <g v0, v0> != 0; constant on phase cosets.
    """
    g = as_square(g)
    v0 = as_vector(v0)
    if g.shape[0] != v0.shape[0]:
        raise DimensionMismatch("operator and vector dimensions differ", dims=[g.shape[0], v0.shape[0]])
    nv = np.linalg.norm(v0)
    if nv == 0.0:
        raise ZeroVector("v0 must be nonzero")
    u = v0 / nv
    f = np.vdot(u, g @ u)  # <g u, u>
    if abs(f) <= tol:
        raise OutsideSectionDomain("outside section domain Omega", overlap=float(abs(f)))
    return (abs(f) / f) * g
