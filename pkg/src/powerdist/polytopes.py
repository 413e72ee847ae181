"""Vertex coordinates of regular polytopes and distance spectra.

Every generator is deterministic. Coordinates are built in a canonical
orientation, rescaled to the requested circumradius and translated to the
requested center.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InvalidParameter

PHI = (1.0 + math.sqrt(5.0)) / 2.0

NGON = "ngon"
SIMPLEX = "simplex"
CROSS_POLYTOPE = "cross-polytope"
HYPERCUBE = "hypercube"
ICOSAHEDRON = "icosahedron"
DODECAHEDRON = "dodecahedron"

KINDS = (NGON, SIMPLEX, CROSS_POLYTOPE, HYPERCUBE, ICOSAHEDRON, DODECAHEDRON)

_ALIASES = {
    "ngon": NGON, "polygon": NGON,
    "simplex": SIMPLEX,
    "cross-polytope": CROSS_POLYTOPE, "crosspolytope": CROSS_POLYTOPE,
    "cross": CROSS_POLYTOPE, "orthoplex": CROSS_POLYTOPE,
    "hypercube": HYPERCUBE, "cube": HYPERCUBE,
    "icosahedron": ICOSAHEDRON, "icosa": ICOSAHEDRON,
    "dodecahedron": DODECAHEDRON, "dodeca": DODECAHEDRON,
}

# Relative tolerance for grouping equal distances in a spectrum.
SPECTRUM_RTOL = 1e-9


@dataclass(frozen=True)
class PolytopeFamily:
    """A regular polytope family plus its size parameter.

    ``param`` is the vertex count ``n`` for :data:`NGON`, the dimension for
    the simplex / cross-polytope / hypercube, and unused for the two
    three-dimensional solids.
    """

    kind: str
    param: int | None = None

    def __post_init__(self):
        kind = _ALIASES.get(str(self.kind).lower())
        if kind is None:
            raise InvalidParameter(f"unknown polytope family {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if kind in (ICOSAHEDRON, DODECAHEDRON):
            object.__setattr__(self, "param", None)
            return
        if self.param is None or int(self.param) != self.param:
            raise InvalidParameter(f"{kind} needs an integer size parameter")
        object.__setattr__(self, "param", int(self.param))
        if kind == NGON and self.param < 3:
            raise InvalidParameter(f"ngon needs n >= 3, got {self.param}")
        if kind != NGON and self.param < 2:
            raise InvalidParameter(f"{kind} needs dim >= 2, got {self.param}")

    @classmethod
    def ngon(cls, n: int) -> "PolytopeFamily":
        return cls(NGON, n)

    @classmethod
    def simplex(cls, dim: int) -> "PolytopeFamily":
        return cls(SIMPLEX, dim)

    @classmethod
    def cross_polytope(cls, dim: int) -> "PolytopeFamily":
        return cls(CROSS_POLYTOPE, dim)

    @classmethod
    def hypercube(cls, dim: int) -> "PolytopeFamily":
        return cls(HYPERCUBE, dim)

    @classmethod
    def icosahedron(cls) -> "PolytopeFamily":
        return cls(ICOSAHEDRON)

    @classmethod
    def dodecahedron(cls) -> "PolytopeFamily":
        return cls(DODECAHEDRON)

    @property
    def dim(self) -> int:
        if self.kind == NGON:
            return 2
        if self.kind in (ICOSAHEDRON, DODECAHEDRON):
            return 3
        return self.param

    @property
    def vertex_count(self) -> int:
        return {
            NGON: lambda: self.param,
            SIMPLEX: lambda: self.param + 1,
            CROSS_POLYTOPE: lambda: 2 * self.param,
            HYPERCUBE: lambda: 2 ** self.param,
            ICOSAHEDRON: lambda: 12,
            DODECAHEDRON: lambda: 20,
        }[self.kind]()

    def __str__(self) -> str:
        return self.kind if self.param is None else f"{self.kind}({self.param})"


@dataclass(frozen=True, eq=False)
class VertexSet:
    """The vertices ``A_i`` of a polytope with center ``O`` and circumradius ``r``.

    Arrays are stored read-only.
    """

    family: PolytopeFamily
    vertices: np.ndarray
    center: np.ndarray
    circumradius: float

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        c = np.array(self.center, dtype=float).reshape(-1)
        if v.ndim != 2 or v.shape[1] != c.shape[0]:
            raise DimensionMismatch("vertices and center disagree in dimension")
        if v.shape[1] < 2:
            raise InvalidParameter("dimension must be at least 2")
        if not (np.all(np.isfinite(v)) and np.all(np.isfinite(c))):
            raise InvalidParameter("coordinates must be finite")
        r = float(self.circumradius)
        if not r > 0:
            raise InvalidParameter("circumradius must be positive")
        if v.shape[0] != self.family.vertex_count:
            raise InvalidParameter(
                f"{self.family} has {self.family.vertex_count} vertices, got {v.shape[0]}")
        dev = np.max(np.abs(np.linalg.norm(v - c, axis=1) - r)) / r
        if dev >= 1e-12:
            raise InvalidParameter(f"vertices off the circumsphere by {dev:.2e} (relative)")
        v.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "circumradius", r)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    def __len__(self) -> int:
        return self.vertices.shape[0]

    def directions(self) -> np.ndarray:
        """Unit vectors from the center towards each vertex."""
        d = self.vertices - self.center
        return d / np.linalg.norm(d, axis=1)[:, None]


@dataclass(frozen=True)
class DistanceSpectrum:
    """Sorted ``(distance, multiplicity)`` pairs."""

    entries: tuple[tuple[float, int], ...] = field(default_factory=tuple)

    @property
    def distances(self) -> list[float]:
        return [d for d, _ in self.entries]

    @property
    def multiplicities(self) -> list[int]:
        return [m for _, m in self.entries]

    @property
    def total(self) -> int:
        return sum(self.multiplicities)


def _ngon(n: int) -> np.ndarray:
    t = 2.0 * np.pi * np.arange(n) / n
    return np.column_stack([np.cos(t), np.sin(t)])


def _simplex(dim: int) -> np.ndarray:
    # Rows of the Helmert basis: e_i - centroid, written in an orthonormal
    # basis of the hyperplane sum(x) = 0 in R^(dim+1).
    m = dim + 1
    v = np.zeros((m, dim))
    for k in range(1, m):
        col = np.zeros(m)
        col[:k] = 1.0
        col[k] = -float(k)
        v[:, k - 1] = col / math.sqrt(k * (k + 1))
    return v / math.sqrt(dim / (dim + 1.0))


def _cross_polytope(dim: int) -> np.ndarray:
    eye = np.eye(dim)
    return np.vstack([eye, -eye])


def _hypercube(dim: int) -> np.ndarray:
    signs = np.array(list(itertools.product((1.0, -1.0), repeat=dim)))
    return signs / math.sqrt(dim)


def _cyclic(a: float, b: float, c: float) -> list[tuple[float, float, float]]:
    return [(a, b, c), (c, a, b), (b, c, a)]


def _icosahedron() -> np.ndarray:
    pts = []
    for s1, s2 in itertools.product((1.0, -1.0), repeat=2):
        pts += _cyclic(0.0, s1, s2 * PHI)
    v = np.array(pts)
    return v / math.sqrt(1.0 + PHI * PHI)


def _dodecahedron() -> np.ndarray:
    # Oriented so that its vertices point at the face centers of _icosahedron().
    pts = list(itertools.product((1.0, -1.0), repeat=3))
    for s1, s2 in itertools.product((1.0, -1.0), repeat=2):
        pts += _cyclic(0.0, s1 * PHI, s2 / PHI)
    v = np.array(pts, dtype=float)
    return v / math.sqrt(3.0)


def unit_vertices(family: PolytopeFamily) -> np.ndarray:
    """Canonical vertices on the unit sphere centered at the origin."""
    return {
        NGON: lambda: _ngon(family.param),
        SIMPLEX: lambda: _simplex(family.param),
        CROSS_POLYTOPE: lambda: _cross_polytope(family.param),
        HYPERCUBE: lambda: _hypercube(family.param),
        ICOSAHEDRON: _icosahedron,
        DODECAHEDRON: _dodecahedron,
    }[family.kind]()


def generate(family: PolytopeFamily, circumradius: float = 1.0, center=None) -> VertexSet:
    """Vertices of ``family`` inscribed in the sphere of the given radius and center.

    Raises
    ------
    InvalidParameter
        For a nonpositive radius (family parameters are checked by
        :class:`PolytopeFamily`).
    DimensionMismatch
        If ``center`` does not have the family's dimension.
    """
    r = float(circumradius)
    if not (r > 0 and math.isfinite(r)):
        raise InvalidParameter(f"circumradius must be positive, got {circumradius}")
    dim = family.dim
    c = np.zeros(dim) if center is None else np.asarray(center, dtype=float).reshape(-1)
    if c.shape[0] != dim:
        raise DimensionMismatch(f"center has dimension {c.shape[0]}, family needs {dim}")
    v = unit_vertices(family) * r + c
    return VertexSet(family, v, c, r)


def group_distances(distances, tol: float) -> DistanceSpectrum:
    """Group sorted distances whose consecutive gaps are at most ``tol``."""
    d = np.sort(np.asarray(distances, dtype=float))
    groups: list[list[float]] = []
    for x in d:
        if groups and x - groups[-1][-1] <= tol:
            groups[-1].append(x)
        else:
            groups.append([x])
    return DistanceSpectrum(tuple((float(np.mean(g)), len(g)) for g in groups))


def distance_spectrum(vs: VertexSet, p) -> DistanceSpectrum:
    """Distances from ``p`` to every vertex, grouped with multiplicities.

    Two distances are merged when they differ by at most
    ``1e-9 * circumradius``.
    """
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.shape[0] != vs.dim:
        raise DimensionMismatch(f"point has dimension {p.shape[0]}, vertex set {vs.dim}")
    d = np.linalg.norm(vs.vertices - p, axis=1)
    return group_distances(d, SPECTRUM_RTOL * vs.circumradius)


def dual_family(family: PolytopeFamily) -> PolytopeFamily | None:
    """The polar-dual family for the two dual pairs handled here, else ``None``."""
    if family.kind == HYPERCUBE:
        return PolytopeFamily.cross_polytope(family.param)
    if family.kind == CROSS_POLYTOPE:
        return PolytopeFamily.hypercube(family.param)
    if family.kind == ICOSAHEDRON:
        return PolytopeFamily.dodecahedron()
    if family.kind == DODECAHEDRON:
        return PolytopeFamily.icosahedron()
    return None
