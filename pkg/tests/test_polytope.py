import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mldeg.lattice_core import affine_rank
from mldeg.models import dilated_cube_model
from mldeg.polytope import (DegenerateConfiguration, DimensionMismatch, FaceDescriptor, FaceMismatch,
                            PointConfiguration, WeightLengthMismatch, cayley_configuration,
                            f_vector, face_lattice, facets, is_triangulation, lattice_points_of_face,
                            normalized_volume, placing_triangulation, regular_subdivision,
                            simplex_volume)
from mldeg.tropical import TropicalWeights, cayley_subdivision_check, euler_polynomials, tropical_system

from conftest import golden, random_model

CUBE = dilated_cube_model(3, 2).configuration()
SEGMENT = PointConfiguration.from_points([(0,), (1,)])
UNIT_SQUARE = PointConfiguration.from_points([(0, 0), (1, 0), (0, 1), (1, 1)])


def test_cube_f_vector():
    faces = face_lattice(CUBE)
    assert f_vector(faces) == [8, 12, 6, 1]
    assert len(CUBE.points) == 27


def test_segment_faces():
    faces = face_lattice(SEGMENT)
    assert sorted(F.member_indices for F in faces) == [(0,), (0, 1), (1,)]


def test_four_cycle_has_24_facets(four_cycle):
    assert len(facets(four_cycle.configuration())) == 24


def test_lattice_points_of_faces():
    faces = face_lattice(CUBE)
    assert all(len(lattice_points_of_face(CUBE, F)) == 9 for F in faces if F.face_dim == 2)
    assert all(len(lattice_points_of_face(CUBE, F)) == 1 for F in faces if F.face_dim == 0)
    square = dilated_cube_model(2, 2).configuration()
    edges = [F for F in face_lattice(square) if F.face_dim == 1]
    assert len(edges) == 4 and all(len(lattice_points_of_face(square, F)) == 3 for F in edges)


def test_face_mismatch():
    F = FaceDescriptor((0, 0, 1), 0, (0, 1), 2)
    with pytest.raises(FaceMismatch):
        lattice_points_of_face(CUBE, F)


def test_normalized_volumes(four_cycle):
    assert normalized_volume(CUBE) == 48
    assert normalized_volume(SEGMENT) == 1
    assert normalized_volume(four_cycle.configuration()) == 64


def test_degenerate_volume():
    with pytest.raises(DegenerateConfiguration):
        normalized_volume(PointConfiguration.from_points([(0, 0), (1, 1), (2, 2)]))


def test_cayley_two_segments():
    C = cayley_configuration([SEGMENT, SEGMENT])
    assert C.dim == 3 and len(C.points) == 4
    D = cayley_configuration([SEGMENT, SEGMENT], drop_last=True)
    assert sorted(D.points) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert normalized_volume(D) == 2


def test_cayley_single():
    C = cayley_configuration([UNIT_SQUARE])
    assert C.points == tuple(p + (1,) for p in UNIT_SQUARE.points)


def test_cayley_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        cayley_configuration([SEGMENT, UNIT_SQUARE])


def test_cayley_of_cube_euler_polynomials():
    M = golden("cube_ones")
    F = next(F for F in facets(M.configuration()) if F.normal == (0, 0, 1))
    W = TropicalWeights.random(M, F, seed=0)
    polys = euler_polynomials(tropical_system(M, [1] * 27, F, W))
    C = cayley_configuration([PointConfiguration.from_points(sorted(p.terms)) for p in polys], drop_last=True)
    assert len(C.points) == sum(len(p.terms) for p in polys)


def test_subdivision_one_lifted_vertex():
    S = regular_subdivision(UNIT_SQUARE, [0, 0, 0, 1])
    assert sorted(S.cells) == [(0, 1, 2), (1, 2, 3)]
    assert is_triangulation(S, UNIT_SQUARE)


def test_subdivision_flat_weights():
    S = regular_subdivision(UNIT_SQUARE, [0, 0, 0, 0])
    assert S.cells == ((0, 1, 2, 3),)
    assert not is_triangulation(S, UNIT_SQUARE)


def test_weight_length():
    with pytest.raises(WeightLengthMismatch):
        regular_subdivision(UNIT_SQUARE, [0, 1])


@pytest.mark.slow
def test_cube_cayley_subdivision_seed_1():
    M = golden("cube_ones")
    F = next(F for F in facets(M.configuration()) if F.normal == (0, 0, 1))
    res = cayley_subdivision_check(M, F, TropicalWeights.random(M, F, seed=1))
    # recorded for this seed; random weights do not give a triangulation
    assert res.is_triangulation is False


@settings(max_examples=5, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_volume_independent_of_placing_order(seed):
    rng = random.Random(seed)
    order = list(range(27))
    rng.shuffle(order)
    simplices = placing_triangulation(CUBE, order)
    assert sum(simplex_volume(CUBE, s) for s in simplices) == 48


@pytest.mark.parametrize("name", ["cube_ones", "binary_4cycle", "independence_c1", "square", "segre_tropical"])
def test_face_lattice_soundness(name):
    P = golden(name).configuration()
    for F in face_lattice(P):
        vals = [F.value(p) for p in P.points]
        assert min(vals) >= F.offset
        assert tuple(P.labels[i] for i, v in enumerate(vals) if v == F.offset) == F.member_indices
        assert affine_rank([P.points[P.position(j)] for j in F.member_indices]) == F.face_dim


@pytest.mark.parametrize("seed", range(10))
def test_facet_volume_bound(seed):
    M = random_model(seed)
    P = M.configuration()
    vol = normalized_volume(P)
    for F in facets(P):
        sub = P.restrict(F.member_indices).lattice_coordinates()
        if F.face_dim > 0:
            assert normalized_volume(sub) <= vol


@pytest.mark.parametrize("seed", range(10))
def test_generic_weights_triangulate(seed):
    rng = random.Random(seed)
    pts = sorted({(rng.randint(0, 4), rng.randint(0, 4)) for _ in range(9)})
    P = PointConfiguration.from_points(pts)
    if P.affine_dimension() < 2:
        return
    w = [Fraction(rng.randint(0, 10 ** 9)) for _ in pts]
    assert is_triangulation(regular_subdivision(P, w), P)
