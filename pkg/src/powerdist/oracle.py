"""Brute-force grid extrema, independent of any gradient code."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._workers import chunk_slices, ordered_map
from .errors import DimensionMismatch, InvalidParameter
from .extrema import candidate_catalog
from .polytopes import VertexSet
from .powersum import PowerSumParams, SphereSpec, values_at
from .sampling import fibonacci_sphere, random_directions

GRID_CHUNK = 16_384


@dataclass(frozen=True, eq=False)
class GridReport:
    """Extreme values of the sum over a finite point set on the sphere."""

    min_value: float
    max_value: float
    argmin: np.ndarray
    argmax: np.ndarray
    grid_size: int

    def to_dict(self) -> dict:
        return {
            "minValue": self.min_value,
            "maxValue": self.max_value,
            "argmin": [float(x) for x in self.argmin],
            "argmax": [float(x) for x in self.argmax],
            "gridSize": self.grid_size,
        }


def _extrema(vs: VertexSet, pts: np.ndarray, p: PowerSumParams, threads) -> GridReport:
    def run(sl):
        v = values_at(vs.vertices, pts[sl], p.lam, p.h, singular_scale=vs.circumradius)
        i, j = int(np.argmin(v)), int(np.argmax(v))
        return (v[i], sl.start + i), (v[j], sl.start + j)

    parts = ordered_map(run, chunk_slices(len(pts), GRID_CHUNK), threads)
    # first occurrence wins on ties, independent of chunking
    lo = min((p[0] for p in parts), key=lambda t: (t[0], t[1]))
    hi = max((p[1] for p in parts), key=lambda t: (t[0], -t[1]))
    return GridReport(float(lo[0]), float(hi[0]), pts[lo[1]].copy(), pts[hi[1]].copy(), len(pts))


def _singular(vs: VertexSet, sphere: SphereSpec, p: PowerSumParams) -> bool:
    return p.may_be_singular() and sphere.is_circumsphere_of(vs)


def grid_extrema_circle(vs: VertexSet, circle: SphereSpec, p: PowerSumParams, N: int = 100_000,
                        threads: int | None = None) -> GridReport:
    """Extrema over ``N`` equispaced angles on a circle.

    When the sum has poles on the circle, the grid is shifted by half a step
    from the first vertex direction so no grid point lands on a vertex.
    """
    if vs.dim != 2 or circle.dim != 2:
        raise DimensionMismatch("grid_extrema_circle needs a planar configuration")
    if N < 16:
        raise InvalidParameter("N must be at least 16")
    offset = 0.0
    if _singular(vs, circle, p):
        d = vs.vertices[0] - vs.center
        offset = math.atan2(d[1], d[0]) / (2.0 * math.pi / N) + 0.5
    t = 2.0 * math.pi * (np.arange(N) + offset) / N
    pts = circle.center + circle.radius * np.column_stack([np.cos(t), np.sin(t)])
    return _extrema(vs, pts, p, threads)


def grid_extrema_sphere(vs: VertexSet, sphere: SphereSpec, p: PowerSumParams, N: int = 100_000,
                        seed: int = 0, threads: int | None = None) -> GridReport:
    """Extrema over a Fibonacci lattice (3D) or seeded random directions
    (higher dimensions), with the candidate orbit points appended.

    Candidate vertex projections are left out when they are poles.
    """
    if vs.dim < 3 or sphere.dim != vs.dim:
        raise DimensionMismatch("grid_extrema_sphere needs matching dimensions >= 3")
    if N < 1:
        raise InvalidParameter("N must be positive")
    dirs = fibonacci_sphere(N) if vs.dim == 3 else random_directions(N, vs.dim, seed)
    pts = sphere.center + sphere.radius * dirs
    if sphere.is_concentric_with(vs):
        excl = ("vertexProjections",) if _singular(vs, sphere, p) else ()
        pts = np.vstack([pts, candidate_catalog(vs, sphere).points(exclude=excl)])
    return _extrema(vs, pts, p, threads)


def lattice_resolution(N: int, dim: int) -> float:
    """Typical angular gap of an ``N``-point grid: ``2 pi / N`` on a circle,
    ``sqrt(4 pi / N)`` on the 2-sphere."""
    if dim == 2:
        return 2.0 * math.pi / N
    return math.sqrt(4.0 * math.pi / N)
