from __future__ import annotations

import pytest

from qstrat.gcomplex import (
    ActionError,
    GComplex,
    complex_from_json,
    components,
    element_action,
    fixed_subcomplex,
    subdivide,
)
from qstrat.permgroup import enumerate_elab, enumerate_elements

from conftest import group, space


def square_with_swap():
    G = enumerate_elements([[1, 0]])
    X = GComplex.build(4, [[0, 1], [1, 2], [2, 3], [0, 3]], [[2, 1, 0, 3]])
    return G, X


def test_fixed_points_of_reflection_are_two_vertices():
    G, X = square_with_swap()
    act = element_action(G, X)
    A = enumerate_elab(G, 2)[1]
    comps = components(fixed_subcomplex(X, A, act))
    assert [c.to_json() for c in comps] == [[1], [3]]


def test_components_union_find():
    X = GComplex.build(4, [[0, 1], [2, 3], [1, 2]])
    assert len(components(X)) == 1
    Y = GComplex.build(4, [[0, 1], [2, 3]])
    assert [c.to_json() for c in components(Y)] == [[0, 1], [2, 3]]


def test_point_has_one_component():
    assert len(components(GComplex.point(0))) == 1


def test_action_must_be_homomorphism():
    G = enumerate_elements([[1, 2, 0]])
    X = GComplex.build(2, [[0], [1]], [[1, 0]])
    with pytest.raises(ActionError):
        element_action(G, X)


def test_action_must_preserve_faces():
    G = enumerate_elements([[1, 0]])
    X = GComplex.build(3, [[0, 1], [2]], [[0, 2, 1]])
    with pytest.raises(ActionError):
        element_action(G, X)


def test_action_arity_checked():
    G = group("s3")
    X = space("square_z2", 1)
    with pytest.raises(ActionError):
        element_action(G, X)


def test_json_roundtrip():
    X = space("square_d8", 2)
    assert complex_from_json(X.to_json()).to_json() == X.to_json()


def test_action_is_a_homomorphism_on_square():
    G = group("d8")
    X = space("square_d8", 2)
    act = element_action(G, X)
    for g in G.elements:
        for h in G.elements:
            assert act[g * h] == act[g] * act[h]


def test_subdivision_counts_and_fixed_points():
    G, X = square_with_swap()
    Y = subdivide(X)
    assert Y.vertices == 8 and len(Y.facets) == 8
    act = element_action(G, Y)
    A = enumerate_elab(G, 2)[1]
    # edge midpoints are not fixed by the swap; vertices 1 and 3 still are
    assert len(components(fixed_subcomplex(Y, A, act))) == 2


def test_subdivision_fixes_edge_flip():
    # Z/2 flipping a single edge fixes no vertex, but fixes its barycenter.
    G = enumerate_elements([[1, 0]])
    X = GComplex.build(2, [[0, 1]], [[1, 0]])
    A = enumerate_elab(G, 2)[1]
    assert components(fixed_subcomplex(X, A, element_action(G, X))) == []
    Y = subdivide(X)
    assert len(components(fixed_subcomplex(Y, A, element_action(G, Y)))) == 1
