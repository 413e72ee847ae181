"""The powered-distance objective ``sum_i (|M - A_i|^2 + h)^(lambda/2)``."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidParameter, OutOfRange, SingularEvaluation
from .polytopes import VertexSet
from .summation import pairwise_norm, pairwise_sum

# Points closer than this (times the circumradius) to a vertex count as on it.
SINGULAR_RTOL = 1e-14


@dataclass(frozen=True)
class PowerSumParams:
    """Exponent ``lam`` and nonnegative offset ``h``."""

    lam: float
    h: float = 0.0

    def __post_init__(self):
        lam, h = float(self.lam), float(self.h)
        if not math.isfinite(lam):
            raise InvalidParameter("lambda must be finite")
        if not (h >= 0 and math.isfinite(h)):
            raise InvalidParameter(f"h must be a finite nonnegative number, got {self.h}")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "h", h)

    @property
    def is_even_integer(self) -> bool:
        return is_even_integer(self.lam)

    def may_be_singular(self) -> bool:
        return self.lam < 0 and self.h == 0


@dataclass(frozen=True, eq=False)
class SphereSpec:
    """The sphere (circle in 2D) that the moving point lives on."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = np.array(self.center, dtype=float).reshape(-1)
        R = float(self.radius)
        if not (R > 0 and math.isfinite(R)):
            raise InvalidParameter(f"sphere radius must be positive, got {self.radius}")
        c.setflags(write=False)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", R)

    @classmethod
    def circumsphere(cls, vs: VertexSet) -> "SphereSpec":
        return cls(vs.center, vs.circumradius)

    @classmethod
    def concentric(cls, vs: VertexSet, radius: float) -> "SphereSpec":
        return cls(vs.center, radius)

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    def project(self, points) -> np.ndarray:
        """Radial projection of points (not the center) onto the sphere."""
        p = np.asarray(points, dtype=float) - self.center
        n = np.linalg.norm(p, axis=-1, keepdims=True)
        return self.center + self.radius * p / n

    def is_concentric_with(self, vs: VertexSet, rtol: float = 1e-12) -> bool:
        return bool(np.linalg.norm(self.center - vs.center) <= rtol * vs.circumradius)

    def is_circumsphere_of(self, vs: VertexSet, rtol: float = 1e-12) -> bool:
        return (self.is_concentric_with(vs, rtol)
                and abs(self.radius - vs.circumradius) <= rtol * vs.circumradius)


def is_even_integer(x: float) -> bool:
    return float(x).is_integer() and int(x) % 2 == 0


def _power(base: np.ndarray, exponent: float) -> np.ndarray:
    """``base ** exponent`` with an exact integer-power path."""
    if float(exponent).is_integer() and exponent >= 0:
        return base ** int(exponent)
    with np.errstate(divide="ignore"):
        return np.power(base, exponent)


def squared_distances(vertices: np.ndarray, points: np.ndarray) -> np.ndarray:
    """``|points[j] - vertices[i]|^2`` with shape ``(..., n_vertices)``."""
    diff = points[..., None, :] - vertices
    return pairwise_sum(diff * diff)


def values_at(vertices, points, lam: float, h: float = 0.0, *,
              singular_scale: float | None = None, on_singular: str = "raise") -> np.ndarray:
    """Objective at every row of ``points`` (shape ``(..., d)``).

    When ``lam < 0`` and ``h == 0``, points within ``SINGULAR_RTOL *
    singular_scale`` of a vertex raise :class:`SingularEvaluation`, or get
    ``inf`` when ``on_singular == "inf"``.
    """
    vertices = np.asarray(vertices, dtype=float)
    points = np.asarray(points, dtype=float)
    d2 = squared_distances(vertices, points)
    if lam < 0 and h == 0:
        scale = singular_scale if singular_scale is not None else float(
            np.max(np.linalg.norm(vertices - vertices.mean(axis=0), axis=1)) or 1.0)
        hit = np.min(d2, axis=-1) <= (SINGULAR_RTOL * scale) ** 2
        if np.any(hit):
            if on_singular == "raise":
                raise SingularEvaluation(
                    "negative exponent evaluated at a vertex: the sum is unbounded there")
            out = pairwise_sum(_power(np.where(d2 > 0, d2, 1.0), lam / 2.0))
            return np.where(hit, np.inf, out)
    return pairwise_sum(_power(d2 + h, lam / 2.0))


def _check_point(vs: VertexSet, m) -> np.ndarray:
    m = np.asarray(m, dtype=float).reshape(-1)
    if m.shape[0] != vs.dim:
        raise DimensionMismatch(f"point has dimension {m.shape[0]}, vertex set {vs.dim}")
    if not np.all(np.isfinite(m)):
        raise InvalidParameter("point coordinates must be finite")
    return m


def evaluate(vs: VertexSet, m, p: PowerSumParams) -> float:
    """``sum_i (|m - A_i|^2 + h)^(lam/2)``.

    >>> from powerdist.polytopes import PolytopeFamily, generate
    >>> evaluate(generate(PolytopeFamily.ngon(4)), [1.0, 0.0], PowerSumParams(2.0))
    8.0
    """
    m = _check_point(vs, m)
    v = values_at(vs.vertices, m[None, :], p.lam, p.h, singular_scale=vs.circumradius)[0]
    return float(v)


def euclidean_gradients(vertices, points, lam: float, h: float = 0.0) -> np.ndarray:
    """Euclidean gradient of the objective at each row of ``points``.

    For ``0 < lam < 2`` and ``h == 0`` the sum has a cusp at each vertex; a
    point exactly on a vertex gets that vertex's term dropped.
    """
    vertices = np.asarray(vertices, dtype=float)
    points = np.asarray(points, dtype=float)
    if lam == 0:
        return np.zeros_like(points)
    diff = points[..., None, :] - vertices
    d2h = pairwise_sum(diff * diff) + h
    w = lam * _power(d2h, lam / 2.0 - 1.0)
    # a term sitting on its vertex (h == 0) contributes its zero subgradient
    w = np.where(d2h > 0, w, 0.0)
    return pairwise_sum(np.moveaxis(w[..., None] * diff, -2, -1))


def project_tangent(grad: np.ndarray, points: np.ndarray, center: np.ndarray) -> np.ndarray:
    """Remove the radial component of ``grad`` at ``points`` on a sphere."""
    u = points - center
    u = u / pairwise_norm(u)[..., None]
    return grad - pairwise_sum(grad * u)[..., None] * u


def tangential_gradient(vs: VertexSet, m, sphere: SphereSpec, p: PowerSumParams) -> np.ndarray:
    """Gradient of :func:`evaluate` at ``m`` projected onto the sphere's tangent space."""
    m = _check_point(vs, m)
    if sphere.dim != vs.dim:
        raise DimensionMismatch("sphere and vertex set disagree in dimension")
    dist = float(np.linalg.norm(m - sphere.center))
    if abs(dist - sphere.radius) > 1e-9 * sphere.radius:
        raise InvalidParameter(f"point is not on the sphere (|m - O| = {dist}, R = {sphere.radius})")
    # raises on the pole
    values_at(vs.vertices, m[None, :], p.lam, p.h, singular_scale=vs.circumradius)
    g = euclidean_gradients(vs.vertices, m[None, :], p.lam, p.h)
    return project_tangent(g, m[None, :], sphere.center)[0]


def closed_form_even(n: int, R: float, r: float, k: int) -> float:
    """Constant value of ``sum |P A_i|^(2k)`` for a regular ``n``-gon of
    circumradius ``r`` and ``P`` on a concentric circle of radius ``R``.

    ``n * sum_j C(k, 2j) C(2j, j) (R^2 + r^2)^(k - 2j) (R r)^(2j)``, valid for
    ``1 <= k <= n - 1``. At ``R == r`` it reduces to ``n * C(2k, k) * r^(2k)``.
    """
    if int(n) != n or n < 3:
        raise InvalidParameter(f"n must be an integer >= 3, got {n}")
    if int(k) != k:
        raise InvalidParameter(f"k must be an integer, got {k}")
    n, k = int(n), int(k)
    if not (1 <= k <= n - 1):
        raise OutOfRange(f"the sum is constant only for 1 <= k <= n - 1 (n={n}, k={k})")
    if not (R > 0 and r > 0):
        raise InvalidParameter("radii must be positive")
    a = R * R + r * r
    b = R * r
    terms = (math.comb(k, 2 * j) * math.comb(2 * j, j) * a ** (k - 2 * j) * b ** (2 * j)
             for j in range(k // 2 + 1))
    return n * math.fsum(terms)
