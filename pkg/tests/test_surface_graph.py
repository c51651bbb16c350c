import json
from collections import Counter

import pytest

from vecrel.catalog import PLABIC_GRAPHS, double_edge, fig4, fig9, path_graph, single_edge
from vecrel.dynamics_drivers import pentagram_graph
from vecrel.errors import ValidationError
from vecrel.plabic_positroid import PlabicContext
from vecrel.surface_graph import BLACK, WHITE, SurfaceGraph, plabic_form, square_disk


def test_square_disk_faces():
    kinds = Counter(f.kind for f in square_disk().faces)
    assert kinds == {"internal": 1, "infinite": 1}


def test_fig4_face_count():
    g = fig4()
    kinds = Counter(f.kind for f in g.faces)
    assert kinds["internal"] == 4
    assert kinds["external"] + kinds["infinite"] == 6
    assert kinds["infinite"] == 1


@pytest.mark.parametrize("n", [5, 6, 7])
def test_pentagram_torus_faces_are_quadrilaterals(n):
    g = pentagram_graph(n)
    assert g.surface == "torus"
    assert {f.length for f in g.faces} == {4}
    assert len(g.faces) == len(g.edges) - len(g.vertices)


def test_single_edge_zigzag_goes_there_and_back():
    z1, z2 = single_edge().zigzags
    assert (z1.start, z1.end) == (1, 1)
    assert [s[0] for s in z1.steps] == ["e", "e"]
    assert z2.steps == ()


def test_fig4_trip_permutation():
    h = PlabicContext(fig4()).graph
    assert h.trip_permutation() == {i: (i + 2) % 6 + 1 for i in range(1, 7)}


def test_reducedness():
    assert PlabicContext(fig4()).graph.is_reduced()
    assert not double_edge().is_reduced()
    assert not path_graph().is_reduced()


@pytest.mark.parametrize("name", sorted(PLABIC_GRAPHS))
def test_each_edge_on_two_zigzags(name):
    g = PlabicContext(PLABIC_GRAPHS[name]()).graph
    directed = Counter((e, x, y) for z in g.zigzags for e, x, y in z.steps)
    for e, (b, w) in g.edges.items():
        one_way, other_way = directed[(e, b, w)], directed[(e, w, b)]
        if g.is_boundary(w) and g.degree(b) == 1:
            continue
        assert one_way == 1 and other_way == 1


@pytest.mark.parametrize("name", sorted(PLABIC_GRAPHS))
def test_trip_permutation_is_bijection(name):
    g = PlabicContext(PLABIC_GRAPHS[name]()).graph
    f = g.trip_permutation()
    assert sorted(f.values()) == list(range(1, g.n + 1))


@pytest.mark.parametrize("g", [fig4(), fig9(), square_disk(), pentagram_graph(5)])
def test_rotation_recovered_from_faces(g):
    assert g.rotation_from_faces() == g.rotation


@pytest.mark.parametrize("name", sorted(PLABIC_GRAPHS))
def test_json_round_trip(name):
    g = PLABIC_GRAPHS[name]()
    again = SurfaceGraph.from_json(json.loads(g.dumps()))
    assert again == g
    assert again.dumps() == g.dumps()


def test_dot_export_lists_every_edge():
    dot = fig9().to_dot()
    assert dot.startswith("graph G {")
    assert dot.count(" -- ") == len(fig9().edges)


def test_not_bipartite_rejected():
    vertices = {"a": (WHITE, False), "b": (WHITE, False)}
    with pytest.raises(ValidationError) as err:
        SurfaceGraph(vertices, {"e": ("a", "b")}, {"a": ["e"], "b": ["e"]})
    assert err.value.code == "not-bipartite"


def test_unknown_vertex_rejected():
    with pytest.raises(ValidationError):
        SurfaceGraph({"b": (BLACK, False)}, {"e": ("b", "w")}, {"b": ["e"]})


def test_plabic_form_expands_boundary_vertices_of_degree_two():
    g = fig4()
    h, records = plabic_form(g)
    assert len(records) == 4
    assert all(h.degree(v) <= 1 for v in h.boundary)
    assert h.n == g.n
