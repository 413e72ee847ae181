from __future__ import annotations

import math

import numpy as np
import pytest

from powerdist.errors import InvalidParameter, NotDualPair, UnsupportedFamily
from powerdist.extrema import (ARC_MIDPOINTS, CONSTANT, FACE_CENTER_PROJECTIONS,
                               VERTEX_ANTIPODES, VERTEX_PROJECTIONS, angular_distance,
                               candidate_catalog, find_extrema, predict_regime, verify_duality)
from powerdist.oracle import grid_extrema_circle, grid_extrema_sphere
from powerdist.polytopes import PolytopeFamily, VertexSet, generate
from powerdist.powersum import PowerSumParams, SphereSpec, evaluate, tangential_gradient

B, X, F, A = VERTEX_PROJECTIONS, ARC_MIDPOINTS, FACE_CENTER_PROJECTIONS, VERTEX_ANTIPODES

MATRIX_FAMILIES = ([PolytopeFamily.ngon(n) for n in range(3, 11)]
                   + [PolytopeFamily.simplex(d) for d in range(2, 7)]
                   + [PolytopeFamily.cross_polytope(d) for d in range(2, 7)]
                   + [PolytopeFamily.hypercube(d) for d in range(2, 7)])
PROBE_LAMBDAS = [-3, -1, -0.5, 0.7, 1, 3, 4.2, 5, 6.5, 7, 9]


def _same_set(a, b, tol=1e-12):
    a, b = np.asarray(a), np.asarray(b)
    return len(a) == len(b) and all(np.min(np.linalg.norm(b - p, axis=1)) < tol for p in a)


def test_catalog_square():
    vs = generate(PolytopeFamily.ngon(4))
    cat = candidate_catalog(vs, SphereSpec.circumsphere(vs))
    s = 1 / math.sqrt(2)
    assert _same_set(cat[B], [[1, 0], [0, 1], [-1, 0], [0, -1]])
    assert _same_set(cat[X], [[s, s], [-s, s], [-s, -s], [s, -s]])


def test_catalog_cross_polytope_face_centers():
    vs = generate(PolytopeFamily.cross_polytope(3))
    cat = candidate_catalog(vs, SphereSpec.concentric(vs, 2.0))
    want = [2 / math.sqrt(3) * np.array([a, b, c]) for a in (-1, 1) for b in (-1, 1)
            for c in (-1, 1)]
    assert _same_set(cat[F], want)


def test_catalog_hypercube_face_centers():
    vs = generate(PolytopeFamily.hypercube(3))
    cat = candidate_catalog(vs, SphereSpec.circumsphere(vs))
    assert _same_set(cat[F], np.vstack([np.eye(3), -np.eye(3)]))


@pytest.mark.parametrize("family, sizes", [
    (PolytopeFamily.ngon(7), {B: 7, X: 7}),
    (PolytopeFamily.simplex(4), {B: 5, A: 5}),
    (PolytopeFamily.cross_polytope(5), {B: 10, F: 32}),
    (PolytopeFamily.hypercube(4), {B: 16, F: 8}),
    (PolytopeFamily.icosahedron(), {B: 12, F: 20}),
    (PolytopeFamily.dodecahedron(), {B: 20, F: 12}),
], ids=str)
def test_catalog_orbit_sizes_and_sphere(family, sizes):
    vs = generate(family, 1.3, center=np.arange(family.dim, dtype=float))
    sphere = SphereSpec.concentric(vs, 2.1)
    cat = candidate_catalog(vs, sphere)
    assert {k: len(v) for k, v in cat.orbits.items()} == sizes
    r = np.linalg.norm(cat.points() - sphere.center, axis=1)
    assert np.allclose(r, 2.1, rtol=1e-12, atol=0)


def test_catalog_needs_concentric_sphere():
    vs = generate(PolytopeFamily.ngon(4))
    with pytest.raises(InvalidParameter):
        candidate_catalog(vs, SphereSpec([0.1, 0.0], 1.0))


@pytest.mark.parametrize("family, lam, mx, mn", [
    (PolytopeFamily.ngon(5), -1, B, X),
    (PolytopeFamily.ngon(5), 4, CONSTANT, CONSTANT),
    (PolytopeFamily.ngon(4), 1, X, B),
    (PolytopeFamily.ngon(4), 3, B, X),
    (PolytopeFamily.ngon(4), 9, B, X),
    (PolytopeFamily.ngon(5), 11, X, B),
    (PolytopeFamily.simplex(3), 3, B, A),
    (PolytopeFamily.simplex(3), 5, A, B),
    (PolytopeFamily.cross_polytope(4), 5, F, B),
    (PolytopeFamily.cross_polytope(4), 7, B, F),
    (PolytopeFamily.hypercube(3), 7, B, F),
    (PolytopeFamily.hypercube(3), 6, CONSTANT, CONSTANT),
], ids=str)
def test_predict_regime(family, lam, mx, mn):
    pred = predict_regime(family, lam)
    assert (pred.predicted_max, pred.predicted_min) == (mx, mn)


def test_predict_regime_unbounded_flag():
    fam = PolytopeFamily.ngon(6)
    assert predict_regime(fam, -1, circumscribed=True).boundary == "unbounded"
    assert predict_regime(fam, -1, circumscribed=True, h=0.1).boundary == "bounded"
    assert predict_regime(fam, -1).boundary == "bounded"


@pytest.mark.parametrize("family, lam, interval", [
    (PolytopeFamily.ngon(4), 8, (8.0, math.inf)),      # 2n starts the top regime
    (PolytopeFamily.simplex(3), 4, (4.0, 4.0)),
    (PolytopeFamily.hypercube(3), 6, (6.0, 6.0)),
    (PolytopeFamily.hypercube(3), 0, (0.0, 0.0)),
    (PolytopeFamily.cross_polytope(3), 5.5, (4.0, 6.0)),
], ids=str)
def test_predict_regime_boundaries(family, lam, interval):
    assert predict_regime(family, lam).interval == interval


@pytest.mark.parametrize("family", [PolytopeFamily.icosahedron(), PolytopeFamily.dodecahedron()],
                         ids=str)
def test_predict_regime_unsupported(family):
    with pytest.raises(UnsupportedFamily):
        predict_regime(family, 3)


def test_find_extrema_square():
    vs = generate(PolytopeFamily.ngon(4))
    rep = find_extrema(vs, SphereSpec.circumsphere(vs), PowerSumParams(-1, 0.1))
    assert (rep.max_label, rep.min_label) == (B, X)
    assert rep.angular_error < 1e-6 and rep.max_value >= rep.min_value


def test_find_extrema_simplex3_lambda5():
    vs = generate(PolytopeFamily.simplex(3))
    rep = find_extrema(vs, SphereSpec.circumsphere(vs), PowerSumParams(5))
    assert (rep.max_label, rep.min_label) == (A, B)


def test_find_extrema_cross_polytope_value():
    vs = generate(PolytopeFamily.cross_polytope(3))
    R = 1.5
    rep = find_extrema(vs, SphereSpec.concentric(vs, R), PowerSumParams(-2))
    assert rep.min_label == F
    c = 2 * R / math.sqrt(3)
    closed = 3 * (1 / (R * R + 1 - c) + 1 / (R * R + 1 + c))
    # also the min of a 10^6-point Fibonacci grid
    assert closed == pytest.approx(2.5785123966942147, rel=1e-15)
    assert rep.min_value == pytest.approx(closed, rel=1e-9)


def test_find_extrema_constant():
    vs = generate(PolytopeFamily.hypercube(4))
    rep = find_extrema(vs, SphereSpec.concentric(vs, 1.2), PowerSumParams(4, 0.3))
    assert rep.max_label == rep.min_label == CONSTANT


def test_find_extrema_unbounded():
    vs = generate(PolytopeFamily.ngon(5))
    rep = find_extrema(vs, SphereSpec.circumsphere(vs), PowerSumParams(-1))
    assert rep.unbounded and math.isinf(rep.max_value) and rep.to_dict()["maxValue"] is None


@pytest.mark.parametrize("family", [PolytopeFamily.ngon(3), PolytopeFamily.simplex(3),
                                    PolytopeFamily.hypercube(4)], ids=str)
@pytest.mark.parametrize("lam", [-1, -3])
def test_unbounded_near_vertex(family, lam):
    vs = generate(family)
    v = vs.vertices[0]
    w = np.zeros(vs.dim)
    w[np.argmin(np.abs(v))] = 1.0
    w -= (w @ v) * v
    w /= np.linalg.norm(w)
    m = math.cos(1e-6) * v + math.sin(1e-6) * w
    assert evaluate(vs, m, PowerSumParams(lam)) > 1e5


def test_find_extrema_rejects_bad_input():
    vs = generate(PolytopeFamily.ngon(4))
    with pytest.raises(InvalidParameter):
        find_extrema(vs, SphereSpec.circumsphere(vs), PowerSumParams(1), starts=0)
    with pytest.raises(InvalidParameter):
        find_extrema(vs, SphereSpec([0, 0, 0], 1.0), PowerSumParams(1))


def test_find_extrema_deterministic():
    vs = generate(PolytopeFamily.cross_polytope(5))
    sphere = SphereSpec.concentric(vs, 1.4)
    reps = [find_extrema(vs, sphere, PowerSumParams(5.5, 0.2), starts=20, seed=9, threads=t)
            for t in (1, 1, 4)]
    assert reps[0].to_dict() == reps[1].to_dict() == reps[2].to_dict()


@pytest.mark.parametrize("family", MATRIX_FAMILIES + [PolytopeFamily.icosahedron(),
                                                      PolytopeFamily.dodecahedron()], ids=str)
@pytest.mark.parametrize("lam, h", [(-1, 0.3), (3, 0.0), (7.5, 0.0), (-2.5, 0.1)])
def test_catalog_points_are_critical(family, lam, h):
    vs = generate(family)
    sphere = SphereSpec.concentric(vs, 1.3)
    p = PowerSumParams(lam, h)
    for pt in candidate_catalog(vs, sphere).points():
        g = tangential_gradient(vs, pt, sphere, p)
        assert np.linalg.norm(g) < 1e-8 * max(1.0, evaluate(vs, pt, p))


@pytest.mark.parametrize("family", MATRIX_FAMILIES, ids=str)
@pytest.mark.parametrize("h", [0.0, 0.3])
def test_invariant_matrix(family, h):
    vs = generate(family)
    sphere = SphereSpec.circumsphere(vs)
    catalog = candidate_catalog(vs, sphere)
    for lam in PROBE_LAMBDAS:
        pred = predict_regime(family, lam, circumscribed=True, h=h)
        p = PowerSumParams(lam, h)
        rep = find_extrema(vs, sphere, p)
        assert (rep.max_label, rep.min_label) == (pred.predicted_max, pred.predicted_min), lam
        if vs.dim == 2:
            grid = grid_extrema_circle(vs, sphere, p)
        else:
            grid = grid_extrema_sphere(vs, sphere, p)
        assert rep.min_value == pytest.approx(grid.min_value, rel=1e-7)
        if vs.dim == 2:
            d = angular_distance(grid.argmin, catalog[pred.predicted_min], sphere.center)
            assert np.min(d) <= 2 * math.pi / 100_000
        if pred.boundary == "unbounded":
            assert rep.unbounded
        else:
            assert rep.max_value == pytest.approx(grid.max_value, rel=1e-7)


def test_duality_cube_cross_polytope():
    cube = generate(PolytopeFamily.hypercube(3))
    cross = generate(PolytopeFamily.cross_polytope(3))
    sphere = SphereSpec.concentric(cube, 1.5)
    assert verify_duality(cube, cross, sphere, -1)
    assert verify_duality(cube, cross, sphere, 4)
    assert verify_duality(cross, cube, sphere, 7, 0.2)


def test_duality_rejects_non_pairs():
    cube = generate(PolytopeFamily.hypercube(3))
    with pytest.raises(NotDualPair):
        verify_duality(cube, generate(PolytopeFamily.simplex(3)), SphereSpec.circumsphere(cube), 1)
    with pytest.raises(NotDualPair):
        verify_duality(cube, generate(PolytopeFamily.cross_polytope(3), center=[0.1, 0, 0]),
                       SphereSpec.circumsphere(cube), 1)


def test_duality_rejects_misaligned():
    cube = generate(PolytopeFamily.hypercube(3))
    c = math.cos(0.3)
    s = math.sin(0.3)
    rot = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])
    cross = generate(PolytopeFamily.cross_polytope(3))
    turned = VertexSet(cross.family, cross.vertices @ rot.T, cross.center, cross.circumradius)
    with pytest.raises(NotDualPair):
        verify_duality(cube, turned, SphereSpec.circumsphere(cube), 1)
