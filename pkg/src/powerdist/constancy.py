"""Deciding for which exponents the powered sum is constant on a sphere.

Three independent tools live here:

* :func:`spread_on_sphere` samples the sum and measures its spread.
* :func:`slice_constancy_even` decides constancy for an even exponent exactly
  (up to roundoff). On any circle the sum is a trigonometric polynomial of
  degree ``lam / 2``, so a short DFT settles it. Two non-parallel families of
  parallel slices cover the sphere.
* :func:`max_constancy_bound` bounds how many exponents can give a constant
  sum, by counting terms of an exponential sum built from two distance
  spectra.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import polytopes as P
from ._workers import chunk_slices, ordered_map
from .errors import DegenerateSlice, DegenerateSpectrum, DimensionMismatch, InvalidParameter
from .extrema import candidate_catalog, facet_normals
from .polytopes import VertexSet, group_distances
from .powersum import PowerSumParams, SphereSpec, is_even_integer, values_at
from .sampling import sphere_probes
from .summation import pairwise_sum
from .tolerances import CONSTANT_RTOL, DFT_RTOL, NONCONSTANT_RTOL

CONSTANT = "constant"
NONCONSTANT = "nonconstant"
INDETERMINATE = "indeterminate"

PROBES_PER_CHUNK = 4096
CHEBYSHEV_SPAN = 0.8        # slice offsets stay within this fraction of the radius


def classify_spread(spread_rel: float) -> str:
    if spread_rel < CONSTANT_RTOL:
        return CONSTANT
    if spread_rel > NONCONSTANT_RTOL:
        return NONCONSTANT
    return INDETERMINATE


@dataclass(frozen=True)
class ConstancyReport:
    """Sampled spread of the sum over a sphere for one exponent."""

    lam: float
    spread_abs: float
    spread_rel: float
    probe_count: int
    seed: int
    h: float = 0.0

    @property
    def status(self) -> str:
        return classify_spread(self.spread_rel)

    @property
    def is_constant(self) -> bool:
        return self.spread_rel < CONSTANT_RTOL

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "h": self.h,
            "spreadAbs": self.spread_abs,
            "spreadRel": self.spread_rel,
            "isConstant": self.is_constant,
            "status": self.status,
            "probeCount": self.probe_count,
            "seed": self.seed,
        }


def _check_sphere(vs: VertexSet, sphere: SphereSpec) -> None:
    if sphere.dim != vs.dim:
        raise DimensionMismatch("sphere and vertex set disagree in dimension")


def spread_on_sphere(vs: VertexSet, sphere: SphereSpec, p: PowerSumParams, probes: int = 10_000,
                     seed: int = 0, threads: int | None = None) -> ConstancyReport:
    """Max minus min of the sum over probe points plus every candidate point.

    Probes are equispaced on a circle, a Fibonacci lattice in 3D and seeded
    random directions above. The result is bit-identical for any thread count.

    Raises
    ------
    SingularEvaluation
        If a probe sits on a vertex while ``lam < 0`` and ``h == 0``.
    """
    _check_sphere(vs, sphere)
    if probes < 1:
        raise InvalidParameter("probes must be positive")
    pts = sphere.center + sphere.radius * sphere_probes(probes, vs.dim, seed)
    if sphere.is_concentric_with(vs):
        pts = np.vstack([pts, candidate_catalog(vs, sphere).points()])

    def run(sl):
        return values_at(vs.vertices, pts[sl], p.lam, p.h, singular_scale=vs.circumradius)

    vals = np.concatenate(ordered_map(run, chunk_slices(len(pts), PROBES_PER_CHUNK), threads))
    spread = float(np.max(vals) - np.min(vals))
    mean = float(pairwise_sum(vals)) / len(vals)
    return ConstancyReport(lam=p.lam, spread_abs=spread, spread_rel=spread / mean,
                           probe_count=len(pts), seed=int(seed), h=p.h)


@dataclass(frozen=True)
class ExponentialSum:
    """``Theta(lam) = sum_i a_i * b_i ** lam`` with every ``b_i > 0``."""

    coefficients: tuple[tuple[float, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        terms = tuple((float(a), float(b)) for a, b in self.coefficients)
        if any(not (b > 0 and math.isfinite(b)) for _, b in terms):
            raise InvalidParameter("every base b_i must be positive and finite")
        object.__setattr__(self, "coefficients", terms)

    def __len__(self) -> int:
        return len(self.coefficients)

    def signs(self, lam) -> np.ndarray:
        """Sign of ``Theta`` at each ``lam``, computed without overflow."""
        lam = np.asarray(lam, dtype=float)
        terms = [(a, b) for a, b in self.coefficients if a != 0]
        if not terms:
            return np.zeros(lam.shape)
        a = np.array([t[0] for t in terms])
        logb = np.log([t[1] for t in terms])
        expo = lam[..., None] * logb
        expo -= np.max(expo, axis=-1, keepdims=True)
        return np.sign(pairwise_sum(a * np.exp(expo)))

    def __call__(self, lam) -> np.ndarray:
        lam = np.asarray(lam, dtype=float)
        if not self.coefficients:
            return np.zeros(lam.shape)
        a = np.array([t[0] for t in self.coefficients])
        b = np.array([t[1] for t in self.coefficients])
        return pairwise_sum(a * b ** lam[..., None])


def count_sign_changes(es: ExponentialSum, lam_lo: float, lam_hi: float,
                       grid_size: int = 10_000) -> int:
    """Sign alternations of ``es`` over a uniform grid (exact zeros skipped).

    This is a lower bound on the number of real roots in the interval, which
    in turn is at most ``len(es) - 1``.
    """
    if not lam_lo < lam_hi:
        raise InvalidParameter("need lam_lo < lam_hi")
    if grid_size < 2:
        raise InvalidParameter("grid_size must be at least 2")
    s = es.signs(np.linspace(lam_lo, lam_hi, int(grid_size)))
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def _spectrum_terms(vs: VertexSet, point, h: float) -> list[tuple[float, int]]:
    d = np.linalg.norm(vs.vertices - point, axis=1)
    d = d[d > P.SPECTRUM_RTOL * vs.circumradius] if h == 0 else d
    spec = group_distances(np.sqrt(d * d + h), P.SPECTRUM_RTOL * vs.circumradius)
    return list(spec.entries)


def bound_sum(vs: VertexSet, sphere: SphereSpec, h: float = 0.0) -> ExponentialSum:
    """Difference of the sum at a vertex projection and at a facet-center
    projection, as an exponential sum in ``lam``.

    A constant sum makes this vanish, so each constant exponent is a root.
    Zero distances are dropped (they contribute nothing for ``lam > 0``) and
    equal bases are merged.
    """
    _check_sphere(vs, sphere)
    catalog = candidate_catalog(vs, sphere)
    b = catalog.labels
    first, second = catalog[b[0]][0], catalog[b[1]][0]
    merged: list[list[float]] = []
    for sign, pt in ((1.0, first), (-1.0, second)):
        for base, mult in _spectrum_terms(vs, pt, h):
            for m in merged:
                if abs(m[1] - base) <= P.SPECTRUM_RTOL * vs.circumradius:
                    m[0] += sign * mult
                    break
            else:
                merged.append([sign * mult, base])
    merged.sort(key=lambda t: t[1])
    return ExponentialSum(tuple((a, b) for a, b in merged if a != 0))


def max_constancy_bound(vs: VertexSet, sphere: SphereSpec, h: float = 0.0) -> int:
    """Upper bound on the number of real exponents giving a constant sum.

    Raises
    ------
    DegenerateSpectrum
        If the two spectra cancel term by term.
    """
    es = bound_sum(vs, sphere, h)
    if len(es) == 0:
        raise DegenerateSpectrum("the two distance spectra coincide; no bound follows")
    return len(es) - 1


@dataclass(frozen=True, eq=False)
class SliceFamily:
    """Two hyperplane normals and the offsets of the parallel slices.

    Each offset is a signed distance from the sphere center along a normal;
    the same offsets are used for both normals.
    """

    normal1: np.ndarray
    normal2: np.ndarray
    offsets: tuple[float, ...]

    def __post_init__(self):
        n1 = np.array(self.normal1, dtype=float).reshape(-1)
        n2 = np.array(self.normal2, dtype=float).reshape(-1)
        if n1.shape != n2.shape:
            raise DimensionMismatch("slice normals disagree in dimension")
        n1 = n1 / np.linalg.norm(n1)
        n2 = n2 / np.linalg.norm(n2)
        if abs(abs(float(n1 @ n2)) - 1.0) < 1e-9:
            raise InvalidParameter("slice normals must not be parallel")
        offs = tuple(float(o) for o in self.offsets)
        if not offs:
            raise InvalidParameter("need at least one slice offset")
        for a in (n1, n2):
            a.setflags(write=False)
        object.__setattr__(self, "normal1", n1)
        object.__setattr__(self, "normal2", n2)
        object.__setattr__(self, "offsets", offs)


def chebyshev_offsets(radius: float, count: int) -> np.ndarray:
    j = np.arange(count)
    return CHEBYSHEV_SPAN * radius * np.cos(math.pi * (j + 0.5) / count)


def slice_count(lam: float) -> int:
    """Offsets per family that make the slice test exact for exponent ``lam``."""
    return int(lam) // 2 + 2


def default_slices(vs: VertexSet, sphere: SphereSpec, lam: float) -> SliceFamily:
    """Slices parallel to two facets (icosahedron, dodecahedron), to two
    coordinate planes (cube, cross-polytope) or orthogonal to two vertices
    (simplex)."""
    kind = vs.family.kind
    if vs.dim < 3:
        raise InvalidParameter("slicing needs dimension at least 3")
    if kind in (P.ICOSAHEDRON, P.DODECAHEDRON):
        normals = facet_normals(vs)
        n1 = normals[0]
        n2 = next(v for v in normals[1:] if abs(abs(v @ n1) - 1) > 1e-6)
    elif kind == P.SIMPLEX:
        n1, n2 = vs.directions()[:2]
    else:
        eye = np.eye(vs.dim)
        n1, n2 = eye[0], eye[1]
    return SliceFamily(n1, n2, tuple(chebyshev_offsets(sphere.radius, slice_count(lam))))


def _complement(basis: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Orthonormal rows spanning ``span(basis)`` minus the direction ``u``."""
    proj = basis - np.outer(basis @ u, u)
    _, s, vt = np.linalg.svd(proj)
    return vt[: basis.shape[0] - 1]


def _sub_normals(normals, basis: np.ndarray) -> list[np.ndarray]:
    """Two non-parallel unit normals inside ``span(basis)``."""
    chosen: list[np.ndarray] = []
    for v in list(normals) + list(basis):
        w = basis.T @ (basis @ v)
        nw = np.linalg.norm(w)
        if nw < 0.1:
            continue
        w = w / nw
        if any(abs(w @ c) > 0.99 for c in chosen):
            continue
        chosen.append(w)
        if len(chosen) == 2:
            break
    return chosen


def _circle_bins_ok(vertices, centers, radii, planes, lam: float, h: float) -> bool:
    """DFT test on a batch of circles: bins ``1..lam/2`` vanish on each."""
    L = int(lam) // 2
    N = int(lam) + 2
    t = 2.0 * math.pi * np.arange(N) / N
    e1, e2 = planes[:, 0], planes[:, 1]
    pts = (centers[:, None, :]
           + radii[:, None, None] * (np.cos(t)[None, :, None] * e1[:, None, :]
                                     + np.sin(t)[None, :, None] * e2[:, None, :]))
    vals = values_at(vertices, pts, lam, h)
    F = np.abs(np.fft.rfft(vals, axis=-1))
    return bool(np.all(F[:, 1:L + 1] < DFT_RTOL * F[:, :1]))


def circle_is_constant(vertices, center, radius: float, plane, lam: float, h: float = 0.0) -> bool:
    """Exact constancy test of an even-exponent sum on one circle.

    ``plane`` holds two orthonormal rows spanning the circle's plane.
    """
    return _circle_bins_ok(np.asarray(vertices, dtype=float),
                           np.asarray(center, dtype=float)[None, :],
                           np.array([float(radius)]), np.asarray(plane, dtype=float)[None],
                           lam, h)


def _slice_check(vertices, center, radius, basis, normals, offsets, lam, h) -> bool:
    """Recursive slice test of the sphere ``(center, radius)`` inside the
    affine span of ``basis`` (orthonormal rows)."""
    k = basis.shape[0]
    if k == 2:
        return circle_is_constant(vertices, center, radius, basis, lam, h)
    fam = _sub_normals(normals, basis)
    if len(fam) < 2:
        raise DegenerateSlice("could not find two independent slice normals")
    if k == 3:
        centers, radii, planes = [], [], []
        for u in fam:
            plane = _complement(basis, u)
            for s in offsets:
                centers.append(center + s * u)
                radii.append(math.sqrt(radius * radius - s * s))
                planes.append(plane)
        return _circle_bins_ok(vertices, np.array(centers), np.array(radii),
                               np.array(planes), lam, h)
    for u in fam:
        sub = _complement(basis, u)
        for s in offsets:
            rho = math.sqrt(radius * radius - s * s)
            inner = chebyshev_offsets(rho, slice_count(lam))
            if not _slice_check(vertices, center + s * u, rho, sub, normals, inner, lam, h):
                return False
    return True


def slice_constancy_even(vs: VertexSet, sphere: SphereSpec, lam: int,
                         slices: SliceFamily | None = None, h: float = 0.0) -> bool:
    """Exact constancy decision for an even exponent via slice circles.

    On every slice circle the sum is a trigonometric polynomial of degree
    ``lam / 2``; it is sampled at ``lam + 2`` equispaced angles and all
    non-constant DFT bins must be below ``DFT_RTOL`` times the mean bin. The
    top-level slices come from ``slices``; higher dimensions are sliced
    further with Chebyshev-spaced offsets. Along one family, each harmonic
    coefficient is a polynomial of degree at most ``lam / 2`` in the offset,
    so ``lam / 2 + 2`` offsets per family make the test exact.

    Raises
    ------
    DegenerateSlice
        If an offset does not cut the sphere in a circle of positive radius.
    """
    _check_sphere(vs, sphere)
    if not (is_even_integer(lam) and lam >= 2):
        raise InvalidParameter(f"lambda must be an even integer >= 2, got {lam}")
    c, R = sphere.center, sphere.radius
    if vs.dim == 2:
        return circle_is_constant(vs.vertices, c, R, np.eye(2), lam, h)
    if slices is None:
        slices = default_slices(vs, sphere, lam)
    if slices.normal1.shape[0] != vs.dim:
        raise DimensionMismatch("slice normals disagree with the vertex dimension")
    offsets = np.array(slices.offsets)
    if np.any(np.abs(offsets) >= R):
        raise DegenerateSlice(f"slice offsets must lie strictly inside (-{R}, {R})")
    return _slice_check(vs.vertices, c, R, np.eye(vs.dim), (slices.normal1, slices.normal2),
                        offsets, lam, h)


def constancy_set_even(vs: VertexSet, sphere: SphereSpec, lambda_max: int,
                       h: float = 0.0) -> list[int]:
    """Every even ``lam`` in ``[2, lambda_max]`` for which the sum is constant.

    >>> from powerdist.polytopes import PolytopeFamily, generate
    >>> vs = generate(PolytopeFamily.ngon(5))
    >>> constancy_set_even(vs, SphereSpec.circumsphere(vs), 12)
    [2, 4, 6, 8]
    """
    if lambda_max < 2:
        raise InvalidParameter("lambda_max must be at least 2")
    return [lam for lam in range(2, int(lambda_max) + 1, 2)
            if slice_constancy_even(vs, sphere, lam, h=h)]


def proven_constancy_set(family: P.PolytopeFamily) -> list[int]:
    """Even exponents for which constancy is a theorem (not only a computation)."""
    kind = family.kind
    if kind == P.NGON:
        return list(range(2, 2 * family.param - 1, 2))
    if kind == P.SIMPLEX:
        return [2, 4]
    if kind in (P.CROSS_POLYTOPE, P.HYPERCUBE, P.ICOSAHEDRON):
        return [2, 4, 6]
    return [2, 4, 6, 8, 10]
