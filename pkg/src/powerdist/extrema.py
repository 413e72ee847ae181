"""Locating and classifying extremizers of the powered sum on a sphere."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull

from . import polytopes as P
from ._workers import chunk_slices, ordered_map
from .errors import InvalidParameter, NoConvergence, NotDualPair, UnsupportedFamily
from .polytopes import PolytopeFamily, VertexSet
from .powersum import (PowerSumParams, SphereSpec, euclidean_gradients, is_even_integer,
                       project_tangent, values_at)
from .sampling import random_directions
from .summation import pairwise_norm, pairwise_sum
from .tolerances import CONSTANT_RTOL, ORBIT_ATOL

VERTEX_PROJECTIONS = "vertexProjections"
VERTEX_ANTIPODES = "vertexAntipodes"
FACE_CENTER_PROJECTIONS = "faceCenterProjections"
ARC_MIDPOINTS = "arcMidpoints"
CONSTANT = "constant"
UNCLASSIFIED = "unclassified"

# Projected-gradient line search.
ARMIJO_C = 1e-4
SHRINK = 0.5
INITIAL_STEP = 0.1          # times the sphere radius
GRAD_RTOL = 1e-13           # stop when |grad| * R <= GRAD_RTOL * |f|
MAX_ITER = 100_000
MAX_BACKTRACK = 80
POLISH_RTOL = 1e-6         # switch to gradient-norm acceptance below this
STARTS_PER_CHUNK = 8


@dataclass(frozen=True, eq=False)
class CandidateCatalog:
    """Symmetry orbits of points on the sphere that the theorems single out.

    ``orbits`` maps an orbit label to an ``(k, d)`` array of points on the
    sphere. Empty orbits are omitted.
    """

    sphere: SphereSpec
    orbits: dict = field(default_factory=dict)

    @property
    def labels(self) -> list[str]:
        return list(self.orbits)

    def points(self, exclude=()) -> np.ndarray:
        arrs = [v for k, v in self.orbits.items() if k not in exclude]
        return np.vstack(arrs) if arrs else np.zeros((0, self.sphere.dim))

    def __getitem__(self, label: str) -> np.ndarray:
        return self.orbits[label]

    def classify(self, point, atol: float = ORBIT_ATOL) -> tuple[str, float]:
        """Nearest orbit label (or ``"unclassified"``) and the angle to it."""
        best_label, best = UNCLASSIFIED, math.inf
        for label, pts in self.orbits.items():
            a = float(np.min(angular_distance(point, pts, self.sphere.center)))
            if a < best:
                best_label, best = label, a
        return (best_label if best < atol else UNCLASSIFIED), best


def angular_distance(p, q, center) -> np.ndarray:
    """Angle at ``center`` between ``p`` and each row of ``q`` (stable near 0)."""
    u = np.asarray(p, dtype=float) - center
    v = np.asarray(q, dtype=float) - center
    u = u / np.linalg.norm(u, axis=-1, keepdims=True)
    v = v / np.linalg.norm(v, axis=-1, keepdims=True)
    chord = np.linalg.norm(u - v, axis=-1)
    return 2.0 * np.arcsin(np.clip(chord / 2.0, 0.0, 1.0))


def _unique_directions(dirs: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    keep: list[np.ndarray] = []
    for d in dirs:
        if not any(np.linalg.norm(d - k) <= tol for k in keep):
            keep.append(d)
    out = np.array(keep)
    order = np.lexsort(np.round(out, 9).T[::-1])
    return out[order]


def facet_normals(vs: VertexSet) -> np.ndarray:
    """Outward unit normals of the facets of the convex hull, one per facet."""
    hull = ConvexHull(vs.vertices - vs.center)
    normals = hull.equations[:, :-1]
    normals = normals / np.linalg.norm(normals, axis=1)[:, None]
    return _unique_directions(normals)


def candidate_catalog(vs: VertexSet, sphere: SphereSpec) -> CandidateCatalog:
    """Vertex projections ``B_i`` plus the facet-center orbit, on ``sphere``.

    The facet-center orbit is labeled ``arcMidpoints`` for polygons,
    ``vertexAntipodes`` for simplices and ``faceCenterProjections`` otherwise.
    """
    if not sphere.is_concentric_with(vs):
        raise InvalidParameter("candidate orbits need a sphere concentric with the polytope")
    c, R = sphere.center, sphere.radius
    orbits = {VERTEX_PROJECTIONS: c + R * vs.directions()}
    kind = vs.family.kind
    if kind == P.SIMPLEX:
        orbits[VERTEX_ANTIPODES] = c - R * vs.directions()
    else:
        label = ARC_MIDPOINTS if kind == P.NGON else FACE_CENTER_PROJECTIONS
        orbits[label] = c + R * facet_normals(vs)
    for pts in orbits.values():
        pts.setflags(write=False)
    return CandidateCatalog(sphere, orbits)


@dataclass(frozen=True)
class RegimePrediction:
    """Extremizer orbits a theorem predicts for one family and exponent."""

    family: PolytopeFamily
    lam: float
    interval: tuple[float, float]
    interval_closed: tuple[bool, bool]
    predicted_max: str
    predicted_min: str
    boundary: str = "bounded"

    @property
    def is_constant(self) -> bool:
        return self.predicted_max == CONSTANT


def _other_orbit(kind: str) -> str:
    if kind == P.NGON:
        return ARC_MIDPOINTS
    if kind == P.SIMPLEX:
        return VERTEX_ANTIPODES
    return FACE_CENTER_PROJECTIONS


def predict_regime(family: PolytopeFamily, lam: float, *, circumscribed: bool = False,
                   h: float = 0.0) -> RegimePrediction:
    """Predicted max/min orbits for ``family`` at exponent ``lam``.

    Regimes: ``lam < 0``; a middle band ``[0, top]`` where even exponents give
    a constant sum and odd "half-periods" ``2m < lam < 2m + 2`` alternate; and
    ``lam`` above the band. ``top`` is ``2n`` (half-open) for an ``n``-gon, 4
    for the simplex and 6 for the cross-polytope and hypercube.
    """
    kind = family.kind
    if kind in (P.ICOSAHEDRON, P.DODECAHEDRON):
        raise UnsupportedFamily(f"no extremum classification is known for the {kind}")
    lam = float(lam)
    B, X = VERTEX_PROJECTIONS, _other_orbit(kind)
    top = {P.NGON: 2 * (family.param or 0), P.SIMPLEX: 4}.get(kind, 6)
    # the polygon's middle band is [0, 2n); the others are closed [0, top]
    in_band = 0 <= lam < top if kind == P.NGON else 0 <= lam <= top

    if lam < 0:
        unbounded = circumscribed and h == 0
        return RegimePrediction(family, lam, (-math.inf, 0.0), (False, False), B, X,
                                "unbounded" if unbounded else "bounded")
    if in_band:
        if is_even_integer(lam):
            return RegimePrediction(family, lam, (lam, lam), (True, True), CONSTANT, CONSTANT)
        m = math.floor(lam / 2)
        mx, mn = (X, B) if m % 2 == 0 else (B, X)
        return RegimePrediction(family, lam, (2.0 * m, 2.0 * m + 2), (False, False), mx, mn)
    if kind == P.NGON:
        mx, mn = (B, X) if family.param % 2 == 0 else (X, B)
        return RegimePrediction(family, lam, (float(top), math.inf), (True, False), mx, mn)
    if kind == P.SIMPLEX:
        return RegimePrediction(family, lam, (float(top), math.inf), (False, False), X, B)
    return RegimePrediction(family, lam, (float(top), math.inf), (False, False), B, X)


@dataclass(frozen=True, eq=False)
class ExtremumReport:
    """Best maximizer and minimizer found on the sphere, with orbit labels.

    ``max_value`` is ``inf`` when the sum is unbounded above (negative exponent,
    ``h == 0`` and the sphere through the vertices); ``argmax`` is then the
    offending vertex.
    """

    lam: float
    h: float
    argmax: np.ndarray
    max_value: float
    argmin: np.ndarray
    min_value: float
    max_label: str
    min_label: str
    max_angular_error: float
    min_angular_error: float
    unbounded: bool
    starts: int
    seed: int
    iterations: int
    converged: bool = True

    @property
    def angular_error(self) -> float:
        return max(self.max_angular_error, self.min_angular_error)

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "h": self.h,
            "argmax": [float(x) for x in self.argmax],
            "maxValue": None if math.isinf(self.max_value) else self.max_value,
            "argmin": [float(x) for x in self.argmin],
            "minValue": self.min_value,
            "maxLabel": self.max_label,
            "minLabel": self.min_label,
            "maxAngularError": self.max_angular_error,
            "minAngularError": self.min_angular_error,
            "unbounded": self.unbounded,
            "starts": self.starts,
            "seed": self.seed,
            "iterations": self.iterations,
            "converged": self.converged,
        }


def _retract(y: np.ndarray, center: np.ndarray, R: float) -> np.ndarray:
    u = y - center
    return center + R * u / pairwise_norm(u)[:, None]


def _descend(vertices, center, R, lam, h, x0, sign, scale):
    """Projected steepest descent of ``sign * f`` from every row of ``x0``.

    Far from a critical point steps use Armijo backtracking on ``f``. Once
    ``|grad| * R < POLISH_RTOL * |f|`` the achievable decrease in ``f`` drops
    under its roundoff, so steps are accepted on a decrease of ``|grad|``
    instead. Returns final points, final ``f`` values, per-start iteration
    counts and convergence flags; rows evolve independently.
    """
    def phi(pts):
        return sign * values_at(vertices, pts, lam, h, singular_scale=scale, on_singular="inf")

    def grad(pts):
        g = euclidean_gradients(vertices, pts, lam, h)
        return sign * project_tangent(g, pts, center)

    x = np.array(x0, dtype=float)
    fx = phi(x)
    S = x.shape[0]
    done = ~np.isfinite(fx)
    converged = np.ones(S, dtype=bool)
    iters = np.zeros(S, dtype=int)
    for _ in range(MAX_ITER):
        active = np.flatnonzero(~done)
        if active.size == 0:
            break
        g = grad(x[active])
        gn = pairwise_norm(g)
        small = gn * R <= GRAD_RTOL * np.abs(fx[active])
        done[active[small]] = True
        keep = ~small
        active, g, gn = active[keep], g[keep], gn[keep]
        if active.size == 0:
            break
        iters[active] += 1
        direction = -g / gn[:, None]
        polish = gn * R < POLISH_RTOL * np.abs(fx[active])
        t = np.full(active.size, INITIAL_STEP * R)
        pending = np.ones(active.size, dtype=bool)
        for _ in range(MAX_BACKTRACK):
            idx = np.flatnonzero(pending)
            if idx.size == 0:
                break
            rows = active[idx]
            trial = _retract(x[rows] + t[idx, None] * direction[idx], center, R)
            half = _retract(x[rows] + SHRINK * t[idx, None] * direction[idx], center, R)
            f_trial, f_half = phi(trial), phi(half)
            pol = polish[idx]
            ok = np.empty(idx.size, dtype=bool)
            better = np.empty(idx.size, dtype=bool)
            # Armijo on the value; an accepted step can overshoot to ~2x the
            # exact minimizer, so the half step is kept when it is better.
            armijo = ~pol
            f0 = fx[rows[armijo]]
            # strict: at a cusp the required decrease can round away to nothing
            ok[armijo] = ((f_trial[armijo] <= f0 - ARMIJO_C * t[idx[armijo]] * gn[idx[armijo]])
                          & (f_trial[armijo] < f0))
            better[armijo] = f_half[armijo] < f_trial[armijo]
            if np.any(pol):
                g_trial = pairwise_norm(grad(trial[pol]))
                g_half = pairwise_norm(grad(half[pol]))
                ok[pol] = g_trial < gn[idx[pol]]
                better[pol] = g_half < g_trial
            acc = np.flatnonzero(ok)
            new_x = np.where(better[acc, None], half[acc], trial[acc])
            new_f = np.where(better[acc], f_half[acc], f_trial[acc])
            x[rows[acc]] = new_x
            fx[rows[acc]] = new_f
            pending[idx[acc]] = False
            t[idx[~ok]] *= SHRINK
        # no acceptable step above roundoff: stationary to working precision
        done[active[pending]] = True
    else:
        converged = done.copy()
    return x, sign * fx, iters, converged


def _search(vertices, center, R, lam, h, starts, sign, scale, threads):
    chunks = chunk_slices(starts.shape[0], STARTS_PER_CHUNK)
    parts = ordered_map(
        lambda sl: _descend(vertices, center, R, lam, h, starts[sl], sign, scale),
        chunks, threads)
    x = np.vstack([p[0] for p in parts])
    f = np.concatenate([p[1] for p in parts])
    it = np.concatenate([p[2] for p in parts])
    conv = np.concatenate([p[3] for p in parts])
    return x, f, it, conv


def find_extrema(vs: VertexSet, sphere: SphereSpec, p: PowerSumParams, starts: int = 16,
                 seed: int = 0, threads: int | None = None) -> ExtremumReport:
    """Multistart projected-gradient search for the max and min on ``sphere``.

    Starts are ``starts`` seeded random points followed by every candidate
    orbit point. Each extremum is labeled with the nearest candidate orbit
    when it lies within ``ORBIT_ATOL`` radians of it.

    Raises
    ------
    NoConvergence
        If any start exceeds the iteration cap; the partial report is attached.
    """
    if sphere.dim != vs.dim:
        raise InvalidParameter("sphere and vertex set disagree in dimension")
    if starts < 1:
        raise InvalidParameter("need at least one random start")
    catalog = candidate_catalog(vs, sphere)
    c, R = sphere.center, sphere.radius
    lam, h = p.lam, p.h
    singular = p.may_be_singular() and sphere.is_circumsphere_of(vs, rtol=1e-12)

    rand = c + R * random_directions(starts, vs.dim, seed)
    excluded = (VERTEX_PROJECTIONS,) if singular else ()
    x0 = np.vstack([rand, catalog.points(exclude=excluded)])

    xmin, fmin, it_min, conv_min = _search(vs.vertices, c, R, lam, h, x0, 1.0,
                                           vs.circumradius, threads)
    i_min = int(np.argmin(fmin))
    argmin, min_value = xmin[i_min], float(fmin[i_min])

    if singular:
        argmax, max_value = catalog[VERTEX_PROJECTIONS][0], math.inf
        it_max, conv_max = np.zeros(1, dtype=int), np.ones(1, dtype=bool)
    else:
        xmax, fmax, it_max, conv_max = _search(vs.vertices, c, R, lam, h, x0, -1.0,
                                               vs.circumradius, threads)
        i_max = int(np.argmax(fmax))
        argmax, max_value = xmax[i_max], float(fmax[i_max])

    max_label, max_err = catalog.classify(argmax)
    min_label, min_err = catalog.classify(argmin)
    if not singular:
        mean = 0.5 * (max_value + min_value)
        if mean > 0 and (max_value - min_value) / mean < CONSTANT_RTOL:
            max_label = min_label = CONSTANT

    converged = bool(np.all(conv_min) and np.all(conv_max))
    report = ExtremumReport(
        lam=lam, h=h, argmax=argmax, max_value=max_value, argmin=argmin,
        min_value=min_value, max_label=max_label, min_label=min_label,
        max_angular_error=max_err, min_angular_error=min_err, unbounded=singular,
        starts=int(x0.shape[0]), seed=int(seed),
        iterations=int(max(np.max(it_min), np.max(it_max))), converged=converged)
    if not converged:
        raise NoConvergence(f"a local search exceeded {MAX_ITER} iterations", report)
    return report


def _orbit_of(catalog: CandidateCatalog, label: str, point) -> np.ndarray:
    if label in catalog.orbits:
        return catalog[label]
    return np.asarray(point, dtype=float)[None, :]


def _orbits_match(a: np.ndarray, b: np.ndarray, center, atol: float) -> bool:
    def covered(x, y):
        return all(np.min(angular_distance(p, y, center)) < atol for p in x)
    return covered(a, b) and covered(b, a)


def verify_duality(primal: VertexSet, dual: VertexSet, sphere: SphereSpec, lam: float,
                   h: float = 0.0, starts: int = 16, seed: int = 0,
                   threads: int | None = None) -> bool:
    """Check that argmax/argmin orbits swap between a polytope and its dual.

    ``primal`` and ``dual`` must be a cube/cross-polytope or
    icosahedron/dodecahedron pair, inscribed in concentric spheres and aligned
    so that the dual's vertices point at the primal's facet centers. Returns
    ``True`` when both sums are constant, or when the primal's argmax orbit is
    the dual's argmin orbit and vice versa.
    """
    expected = P.dual_family(primal.family)
    if expected is None or expected != dual.family:
        raise NotDualPair(f"{primal.family} and {dual.family} are not a dual pair")
    if not np.allclose(primal.center, dual.center, atol=1e-12 * primal.circumradius):
        raise NotDualPair("primal and dual are not concentric")
    if not _orbits_match(facet_normals(primal), dual.directions(), np.zeros(primal.dim),
                         ORBIT_ATOL):
        raise NotDualPair("dual vertices do not point at the primal facet centers")

    p = PowerSumParams(lam, h)
    a = find_extrema(primal, sphere, p, starts=starts, seed=seed, threads=threads)
    b = find_extrema(dual, sphere, p, starts=starts, seed=seed, threads=threads)
    a_const = a.max_label == CONSTANT
    b_const = b.max_label == CONSTANT
    if a_const or b_const:
        return a_const and b_const
    ca, cb = candidate_catalog(primal, sphere), candidate_catalog(dual, sphere)
    c = sphere.center
    max_a, min_a = _orbit_of(ca, a.max_label, a.argmax), _orbit_of(ca, a.min_label, a.argmin)
    max_b, min_b = _orbit_of(cb, b.max_label, b.argmax), _orbit_of(cb, b.min_label, b.argmin)
    return (_orbits_match(max_a, min_b, c, ORBIT_ATOL)
            and _orbits_match(min_a, max_b, c, ORBIT_ATOL))
