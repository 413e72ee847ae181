from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from powerdist.errors import DimensionMismatch, InvalidParameter
from powerdist.polytopes import (PolytopeFamily, VertexSet, distance_spectrum, dual_family,
                                 generate)

ALL_FAMILIES = (
    [PolytopeFamily.ngon(n) for n in range(3, 13)]
    + [PolytopeFamily.simplex(d) for d in range(2, 8)]
    + [PolytopeFamily.cross_polytope(d) for d in range(2, 8)]
    + [PolytopeFamily.hypercube(d) for d in range(2, 8)]
    + [PolytopeFamily.icosahedron(), PolytopeFamily.dodecahedron()]
)


def _sorted_rows(a):
    a = np.round(np.asarray(a, dtype=float), 12) + 0.0
    return a[np.lexsort(a.T[::-1])]


def test_square_vertices():
    vs = generate(PolytopeFamily.ngon(4))
    want = [[1, 0], [0, 1], [-1, 0], [0, -1]]
    np.testing.assert_allclose(_sorted_rows(vs.vertices), _sorted_rows(want), atol=1e-15)


def test_cross_polytope_is_signed_basis():
    vs = generate(PolytopeFamily.cross_polytope(3))
    eye = np.eye(3)
    np.testing.assert_allclose(_sorted_rows(vs.vertices), _sorted_rows(np.vstack([eye, -eye])))


def test_simplex3_edge_length():
    vs = generate(PolytopeFamily.simplex(3))
    d = np.linalg.norm(vs.vertices[:, None] - vs.vertices[None], axis=-1)[np.triu_indices(4, 1)]
    np.testing.assert_allclose(d, math.sqrt(8.0 / 3.0), rtol=1e-12)


def test_hypercube_half_coordinates():
    vs = generate(PolytopeFamily.hypercube(4), circumradius=1.0)
    np.testing.assert_allclose(np.abs(vs.vertices), 0.5)


@pytest.mark.parametrize("family", ALL_FAMILIES, ids=str)
def test_generated_sets_satisfy_invariants(family):
    vs = generate(family, circumradius=2.5, center=np.arange(family.dim, dtype=float))
    assert len(vs) == family.vertex_count
    dev = np.abs(np.linalg.norm(vs.vertices - vs.center, axis=1) - 2.5) / 2.5
    assert dev.max() < 1e-12
    assert not vs.vertices.flags.writeable


@pytest.mark.parametrize("family", ALL_FAMILIES, ids=str)
def test_vertex_transitive_spectra(family):
    vs = generate(family)
    ref = distance_spectrum(vs, vs.vertices[0])
    assert ref.total == len(vs)
    assert all(b > a for a, b in zip(ref.distances, ref.distances[1:]))
    for v in vs.vertices[1:]:
        s = distance_spectrum(vs, v)
        assert s.multiplicities == ref.multiplicities
        np.testing.assert_allclose(s.distances, ref.distances, atol=1e-9)


@pytest.mark.parametrize("d", range(2, 8))
def test_distinct_distance_counts(d):
    r = 1.3
    def nonzero(fam):
        vs = generate(fam, r)
        return distance_spectrum(vs, vs.vertices[0]).distances[1:]
    assert len(nonzero(PolytopeFamily.simplex(d))) == 1
    cp = nonzero(PolytopeFamily.cross_polytope(d))
    np.testing.assert_allclose(cp, [math.sqrt(2) * r, 2 * r])
    assert len(nonzero(PolytopeFamily.hypercube(d))) == d


def test_dodecahedron_spectra():
    vs = generate(PolytopeFamily.dodecahedron())
    assert distance_spectrum(vs, vs.vertices[0]).multiplicities == [1, 3, 6, 6, 3, 1]
    ico = generate(PolytopeFamily.icosahedron())
    # icosahedron vertices point at the dodecahedron face centers
    face = ico.vertices[0]
    assert distance_spectrum(vs, face).multiplicities == [5, 5, 5, 5]


def test_icosahedron_spectra():
    vs = generate(PolytopeFamily.icosahedron())
    assert distance_spectrum(vs, vs.vertices[0]).multiplicities == [1, 5, 5, 1]
    dod = generate(PolytopeFamily.dodecahedron())
    assert distance_spectrum(vs, dod.vertices[0]).multiplicities == [3, 3, 3, 3]


def test_square_spectrum_from_vertex():
    vs = generate(PolytopeFamily.ngon(4))
    s = distance_spectrum(vs, [1.0, 0.0])
    assert s.multiplicities == [1, 2, 1]
    np.testing.assert_allclose(s.distances, [0, math.sqrt(2), 2], atol=1e-15)


@pytest.mark.parametrize("kind, param", [("ngon", 2), ("simplex", 1), ("hypercube", 1),
                                         ("cross-polytope", 0), ("ngon", None), ("tesseract", 4)])
def test_invalid_families(kind, param):
    with pytest.raises(InvalidParameter):
        PolytopeFamily(kind, param)


@pytest.mark.parametrize("radius", [0.0, -1.0, float("inf")])
def test_invalid_radius(radius):
    with pytest.raises(InvalidParameter):
        generate(PolytopeFamily.ngon(5), radius)


def test_dimension_mismatch():
    vs = generate(PolytopeFamily.ngon(5))
    with pytest.raises(DimensionMismatch):
        distance_spectrum(vs, [0.0, 0.0, 0.0])
    with pytest.raises(DimensionMismatch):
        generate(PolytopeFamily.ngon(5), center=[0.0, 0.0, 0.0])


def test_vertexset_rejects_off_sphere_points():
    v = generate(PolytopeFamily.ngon(4)).vertices.copy()
    v[0] *= 1.0 + 1e-9
    with pytest.raises(InvalidParameter):
        VertexSet(PolytopeFamily.ngon(4), v, [0.0, 0.0], 1.0)


def test_aliases_and_str():
    assert PolytopeFamily("cube", 3) == PolytopeFamily.hypercube(3)
    assert str(PolytopeFamily.cross_polytope(4)) == "cross-polytope(4)"
    assert str(PolytopeFamily("dodeca")) == "dodecahedron"


def test_dual_pairs():
    assert dual_family(PolytopeFamily.hypercube(4)) == PolytopeFamily.cross_polytope(4)
    assert dual_family(PolytopeFamily.icosahedron()) == PolytopeFamily.dodecahedron()
    assert dual_family(PolytopeFamily.simplex(3)) is None


def test_generation_is_deterministic():
    a = generate(PolytopeFamily.dodecahedron()).vertices
    b = generate(PolytopeFamily.dodecahedron()).vertices
    assert np.array_equal(a, b)


@given(st.sampled_from(ALL_FAMILIES), st.floats(0.01, 100.0),
       st.lists(st.floats(-10, 10), min_size=7, max_size=7))
def test_invariants_for_any_radius_and_center(family, r, c):
    vs = generate(family, r, c[:family.dim])
    dev = np.abs(np.linalg.norm(vs.vertices - vs.center, axis=1) - r) / r
    assert dev.max() < 1e-12
