import random

from hypothesis import given, settings, strategies as st

from mldeg.lattice_core import (IntMatrix, as_rows, NotAFacet, determinant, facet_normalization,
                                smith_invariants, smith_normal_form, validate_design_matrix)
from mldeg.models import dilated_cube_model
from mldeg.polytope import PointConfiguration, face_lattice, facets

import pytest

from conftest import golden


def matmul(A, B):
    a, b = as_rows(A), as_rows(B)
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def test_snf_identity():
    D, U, V = smith_normal_form(IntMatrix.identity(3))
    assert D == U == V == IntMatrix.identity(3)


def test_snf_coprime_diagonal():
    D, _, _ = smith_normal_form(IntMatrix.from_rows([[2, 0], [0, 3]]))
    assert D.to_rows() == [[1, 0], [0, 6]]


def test_snf_already_normal():
    D, _, _ = smith_normal_form(IntMatrix.from_rows([[2, 0], [0, 4]]))
    assert D.to_rows() == [[2, 0], [0, 4]]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(1, 16), st.integers(0, 10 ** 6))
def test_snf_round_trip(r, c, seed):
    rng = random.Random(seed)
    M = IntMatrix.from_rows([[rng.randint(-5, 5) for _ in range(c)] for _ in range(r)])
    D, U, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == D.to_rows()
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
    diag = [D.to_rows()[i][i] for i in range(min(r, c))]
    assert all(D.to_rows()[i][j] == 0 for i in range(r) for j in range(c) if i != j)
    nz = [x for x in diag if x]
    assert all(x > 0 for x in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert diag[len(nz):] == [0] * (len(diag) - len(nz))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 7), st.integers(0, 10 ** 6))
def test_snf_invariants_against_sympy(r, c, seed):
    import sympy
    from sympy.matrices.normalforms import smith_normal_form as sympy_snf

    rng = random.Random(seed)
    rows = [[rng.randint(-6, 6) for _ in range(c)] for _ in range(r)]
    ref = sympy_snf(sympy.Matrix(rows), domain=sympy.ZZ)
    ref_diag = [abs(int(ref[i, i])) for i in range(min(r, c))]
    assert [x for x in smith_invariants(rows) if x] == [x for x in ref_diag if x]


def test_validate_unit_segment():
    rep = validate_design_matrix([[1, 1], [0, 1]])
    assert rep.ok


def test_validate_index_two():
    rep = validate_design_matrix([[1, 1], [0, 2]])
    assert rep.first_row_ones and rep.full_rank
    assert not rep.lattice_index_one and rep.lattice_index == 2


def test_validate_four_cycle(four_cycle):
    assert four_cycle.A.rows == 9 and four_cycle.A.cols == 16
    assert validate_design_matrix(four_cycle.A).ok


def _facet_at(M, normal, offset):
    for F in facets(M.configuration()):
        if F.normal == normal and F.offset == offset:
            return F
    raise AssertionError("facet not found")


def test_bottom_facet_identity():
    M = dilated_cube_model(3, 2)
    assert facet_normalization(M.A, _facet_at(M, (0, 0, 1), 0)).is_identity()


def test_top_facet_reflection():
    M = dilated_cube_model(3, 2)
    T = facet_normalization(M.A, _facet_at(M, (0, 0, -1), -2))
    assert T.linear_part.to_rows() == [[1, 0, 0], [0, 1, 0], [0, 0, -1]]
    assert T.translation == (0, 0, 2)
    assert T.apply((1, 2, 2)) == (1, 2, 0)


def test_segment_vertex_identity():
    P = PointConfiguration.from_design_matrix([[1, 1], [0, 1]])
    v0 = next(F for F in face_lattice(P) if F.member_indices == (0,))
    assert facet_normalization([[1, 1], [0, 1]], v0).is_identity()


def test_not_a_facet():
    M = dilated_cube_model(3, 2)
    edge = next(F for F in face_lattice(M.configuration()) if F.face_dim == 1)
    with pytest.raises(NotAFacet):
        facet_normalization(M.A, edge)


@pytest.mark.parametrize("name", ["cube_ones", "binary_4cycle", "independence_c3", "square", "segre_tropical"])
def test_facet_normalization_lands_in_orthant(name):
    M = golden(name)
    for F in facets(M.configuration()):
        T = facet_normalization(M.A, F)
        img = T.apply_to_design_matrix(M.A)
        assert validate_design_matrix(img).ok
        cols = img.columns()
        assert all(x >= 0 for col in cols for x in col[1:])
        assert all((cols[j][-1] == 0) == (j in F.member_indices) for j in range(M.n))
