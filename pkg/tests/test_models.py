import json
from fractions import Fraction

import pytest

from mldeg.lattice_core import as_rows, lattice_basis, validate_design_matrix
from mldeg.likelihood import ml_degree
from mldeg.models import (BipartiteSupport, MarkedGraph, ScalingLengthMismatch, SpanCollapse, SpecError,
                          cycle_graph, delete_columns, dilated_cube_model, facial_submodel,
                          graphical_model_matrix, independence_model, load_spec, maximal_cliques,
                          model_from_spec, quasi_independence_matrix, scaling_preset)
from mldeg.polytope import FaceMismatch, face_lattice, facets, lattice_normalized_volume, normalized_volume

from conftest import GOLDEN, golden, random_model


def row_lattice(M):
    return lattice_basis(as_rows(M.A), M.n)


def test_independence_shapes():
    M = independence_model(3, 3)
    assert (M.A.rows, M.A.cols) == (5, 9)
    I22 = independence_model(2, 2)
    assert (I22.A.rows, I22.A.cols) == (3, 4)
    assert normalized_volume(I22.configuration()) == 2
    assert ml_degree(I22) == 1


def test_cube_constructor():
    M = dilated_cube_model(3, 2)
    assert (M.A.rows, M.A.cols) == (4, 27) and set(M.c) == {1}
    assert dilated_cube_model(1, 1).A.to_rows() == [[1, 1], [0, 1]]
    sq = dilated_cube_model(2, 2, [1, 2, 1, 2, 4, 2, 1, 2, 1])
    assert sq.n == 9 and ml_degree(sq) == 1
    with pytest.raises(ScalingLengthMismatch):
        dilated_cube_model(2, 2, [1, 2, 3])


def test_scaling_presets_are_distinct():
    vals = {scaling_preset(f"c{i}") for i in range(1, 7)}
    assert len(vals) == 6 and all(len(v) == 9 for v in vals)


def test_four_cycle_graphical(four_cycle):
    G = graphical_model_matrix(cycle_graph(4))
    assert (G.A.rows, G.A.cols) == (9, 16)
    assert normalized_volume(G.configuration()) == 64
    # the checked-in matrix orders joint states differently
    assert len(facets(G.configuration())) == len(facets(four_cycle.configuration())) == 24


def test_cliques():
    assert maximal_cliques(cycle_graph(4)) == [(1, 2), (1, 4), (2, 3), (3, 4)]
    tri = MarkedGraph.build([0, 1, 2], [(0, 1), (1, 2), (0, 2)])
    assert maximal_cliques(tri) == [(0, 1, 2)]


def test_two_isolated_vertices_is_independence():
    # an edge joins both vertices into one clique (saturated model); without
    # it the two variables are independent
    G = graphical_model_matrix(MarkedGraph.build([0, 1], []))
    assert row_lattice(G) == row_lattice(independence_model(2, 2))
    E = graphical_model_matrix(MarkedGraph.build([0, 1], [(0, 1)]))
    assert (E.A.rows, E.A.cols) == (4, 4)


def test_chordal_triangle():
    tri = graphical_model_matrix(MarkedGraph.build([0, 1, 2], [(0, 1), (1, 2), (0, 2)]))
    assert ml_degree(tri) == 1


def test_quasi_independence():
    full = quasi_independence_matrix(BipartiteSupport.build(2, 2, [(i, j) for i in range(2) for j in range(2)]))
    assert row_lattice(full) == row_lattice(independence_model(2, 2))
    no_diag = quasi_independence_matrix(BipartiteSupport.build(3, 3, [(i, j) for i in range(3) for j in range(3) if i != j]))
    assert ml_degree(no_diag) == 3  # oracle value, exact and modular routes agree
    path = quasi_independence_matrix(BipartiteSupport.build(3, 3, [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2)]))
    assert ml_degree(path) == 1
    with pytest.raises(ValueError):
        BipartiteSupport.build(2, 2, [(0, 2)])


def test_facial_submodels(four_cycle):
    cube = golden("cube_ones")
    for F in facets(cube.configuration()):
        sub = facial_submodel(cube, F)
        assert sub.n == 9 and ml_degree(sub) == 4
    v = next(F for F in face_lattice(cube.configuration()) if F.face_dim == 0)
    assert ml_degree(facial_submodel(cube, v)) == 1
    face = facial_submodel(four_cycle, list(range(12)))
    assert ml_degree(face) == 5 and normalized_volume(face.configuration()) == 15
    with pytest.raises(FaceMismatch):
        facial_submodel(cube, [0, 1, 5])


def test_full_face_is_model():
    M = golden("independence_c4")
    top = facial_submodel(M, list(range(M.n)))
    assert ml_degree(top) == ml_degree(M)
    assert normalized_volume(top.configuration()) == normalized_volume(M.configuration())


def test_delete_columns():
    sq = golden("square")
    assert ml_degree(delete_columns(sq, [8])) == 3
    assert delete_columns(sq, []) is sq
    cube = golden("cube_ones")
    assert ml_degree(delete_columns(cube, [13])) == 24  # oracle value, modular route with both kernels
    with pytest.raises(SpanCollapse):
        delete_columns(golden("segment"), [1])


def test_constructors_validate():
    models = [independence_model(3, 4), dilated_cube_model(2, 3), graphical_model_matrix(cycle_graph(3)),
              quasi_independence_matrix(BipartiteSupport.build(3, 2, [(0, 0), (1, 0), (1, 1), (2, 1)]))]
    models += [golden(name) for name in GOLDEN] + [random_model(s) for s in range(20)]
    assert all(validate_design_matrix(M.A).ok for M in models)


def test_four_cycle_induced_subgraphs_are_faces():
    G = cycle_graph(4)
    full = graphical_model_matrix(G)
    states = [(a, b, c, d) for a in range(2) for b in range(2) for c in range(2) for d in range(2)]
    for keep in ([1, 2, 3], [1, 2], [1, 3], [2]):
        drop = [v - 1 for v in G.vertices if v not in keep]
        idx = [j for j, s in enumerate(states) if all(s[i] == 0 for i in drop)]
        sub = facial_submodel(full, idx)
        H = graphical_model_matrix(G.induced(keep))
        assert lattice_normalized_volume(sub.configuration()) == normalized_volume(H.configuration())
        assert ml_degree(sub) == ml_degree(H) <= 13


@pytest.mark.parametrize("name", sorted(GOLDEN))
def test_spec_round_trip(name, tmp_path):
    spec = load_spec(GOLDEN[name])
    M = model_from_spec(spec)
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    again = model_from_spec(load_spec(path))
    assert again.A == M.A and again.c == M.c
    explicit = model_from_spec({"schema_version": 1, "type": "explicit", "matrix": M.A.to_rows(),
                                "scaling": [str(x) for x in M.c]})
    assert explicit.A == M.A and explicit.c == M.c


def test_spec_errors():
    with pytest.raises(SpecError):
        model_from_spec({"schema_version": 2, "type": "cube", "dim": 1, "dilation": 1})
    with pytest.raises(SpecError):
        model_from_spec({"schema_version": 1, "type": "cube", "dim": 1})
    with pytest.raises(SpecError):
        model_from_spec({"schema_version": 1, "type": "explicit", "matrix": [[1, 1], [0, 2]]})
    with pytest.raises(SpecError):
        model_from_spec({"schema_version": 1, "type": "cube", "dim": 1, "dilation": 1, "scaling": ["1", "0"]})


def test_rational_scalings_parse():
    M = model_from_spec({"schema_version": 1, "type": "cube", "dim": 1, "dilation": 1, "scaling": ["1/2", "3"]})
    assert M.c == (Fraction(1, 2), Fraction(3))
