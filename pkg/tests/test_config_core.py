from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from vecrel.catalog import PLABIC_GRAPHS, double_edge, fig4, fig9, fig10, path_graph
from vecrel.config_core import (Configuration, System, apply_linear_map, chart_coordinates, chart_from_coordinates,
                                configuration_from_coefficients, face_cycle, face_projective_points, face_weight,
                                face_weight_projective, face_weights, find_system, gauge, gauge_equal,
                                is_circuit_configuration, kernel, new_configuration, normalize_via_system,
                                random_configuration)
from vecrel.errors import ValidationError
from vecrel.exact_linalg import Matrix, Subspace, rank

FIG9_SYSTEM = {"e_b1_2", "e_b2_4"}
nonzero = st.integers(-9, 9).filter(bool)
seeds = st.integers(0, 10 ** 6)


def fig9_chart(a, b, c, d):
    g = fig9()
    return chart_from_coordinates(g, System(g, FIG9_SYSTEM),
                                  {"e_b1_3": a, "e_b1_4": b, "e_b2_1": c, "e_b2_2": d})


def in_basis_13(c, w):
    T = Matrix.from_columns([c.vectors["1"], c.vectors["3"]], 2)
    from vecrel.exact_linalg import solve
    return tuple(solve(T, c.vectors[w]))


# ---------------------------------------------------------------- construction

def test_path_relation_satisfied():
    c = new_configuration(path_graph(), {"1": [1, 0], "w": [1, 0]}, {"b": {"e1": 1, "e2": -1}}, mode="general")
    assert c.evaluate("b") == (0, 0)


def test_path_relation_not_satisfied():
    with pytest.raises(ValidationError) as err:
        new_configuration(path_graph(), {"1": [1, 0], "w": [1, 0]}, {"b": {"e1": 1, "e2": 1}}, mode="general")
    assert err.value.code == "relation-not-satisfied"


def test_zero_internal_vector_rejected():
    with pytest.raises(ValidationError) as err:
        new_configuration(path_graph(), {"1": [0], "w": [0]}, {"b": {"e1": 1, "e2": 1}})
    assert err.value.code == "zero-internal-vector"


def test_fig4_example_construction():
    """Generic boundary vectors and u on the line <v1,v2> ∩ <v4,v5> give a valid configuration."""
    g = fig4()
    v = {"1": (1, 0, 0), "2": (0, 1, 0), "3": (2, 3, 5), "4": (0, 0, 1), "5": (1, 1, 1), "6": (3, -1, 2)}
    u = Subspace.span([v["1"], v["2"]], 3).intersect(Subspace.span([v["4"], v["5"]], 3)).basis[0]
    vectors = dict(v, u=u)
    relations = {}
    for b in g.blacks:
        es = g.rotation[b]
        ker = kernel(Matrix.from_columns([vectors[g.edges[e][1]] for e in es], 3))
        assert len(ker) == 1
        relations[b] = dict(zip(es, ker[0]))
    c = new_configuration(g, vectors, relations)
    assert c.mode == "plabic"
    assert is_circuit_configuration(c)


def test_double_edge_coefficients_sum_in_K():
    g = double_edge()
    c = new_configuration(g, {"1": [1], "w": [1], "2": [1]},
                          {"b": {"a": -5, "p": 2, "q": 3}, "c": {"r": 1, "s": -1}})
    K = c.kasteleyn_matrix()
    assert K[g.blacks.index("b"), g.whites.index("w")] == 5


def test_fig9_kasteleyn_matrix_shape():
    c = fig9_chart(1, 2, 3, 5)
    g = c.graph
    K = c.kasteleyn_matrix()
    cols = [g.whites.index(j) for j in ("1", "2", "3", "4")]
    rows = [g.blacks.index(b) for b in ("b1", "b2")]
    assert [[K[r, j] for j in cols] for r in rows] == [[0, 1, 1, 2], [3, 5, 0, 1]]


# ---------------------------------------------------------------- gauge

def test_gauge_identity_and_inverse():
    c = random_configuration(fig4(), 1)
    assert gauge(c, "u", 1) == c
    assert gauge(gauge(c, "bD", 3), "bD", Fraction(1, 3)) == c


def test_gauge_white_halves_vector_and_doubles_column():
    c = random_configuration(fig4(), 2)
    d = gauge(c, "u", 2)
    assert d.vectors["u"] == tuple(x / 2 for x in c.vectors["u"])
    for e in c.graph.rotation["u"]:
        assert d.coefficient(e) == 2 * c.coefficient(e)
    assert all(all(x == 0 for x in d.evaluate(b)) for b in d.graph.blacks)


def test_gauge_rejects_zero_and_boundary():
    c = random_configuration(fig9(), 0)
    with pytest.raises(ValidationError):
        gauge(c, "b1", 0)
    with pytest.raises(ValidationError):
        gauge(c, "1", 2)


@given(seeds, nonzero)
def test_gauge_scales_kasteleyn_row(seed, lam):
    c = random_configuration(fig4(), seed)
    g = c.graph
    b = g.blacks[seed % len(g.blacks)]
    assert gauge(c, b, lam).kasteleyn_matrix() == c.kasteleyn_matrix().scale_row(g.blacks.index(b), lam)


@given(seeds, nonzero)
def test_face_weights_gauge_invariant(seed, lam):
    c = random_configuration(fig4(), seed)
    g = c.graph
    internal = [v for v in sorted(g.vertices) if not g.is_boundary(v)]
    assert face_weights(gauge(c, internal[seed % len(internal)], lam)) == face_weights(c)


# ---------------------------------------------------------------- face weights

def _quad_config(k11, k12, k22, k21):
    g = fig9()
    (w1, e1), (b1, e2), (w2, e3), (b2, e4) = face_cycle(g, g.internal_faces()[0])
    coeffs = {e: Fraction(7) for e in g.edges}
    coeffs.update({e1: k11, e2: k12, e3: k22, e4: k21})
    return configuration_from_coefficients(g, coeffs)


def test_face_weight_example():
    c = _quad_config(1, 2, 3, 4)
    assert face_weight(c, c.graph.internal_faces()[0]) == Fraction(-3, 8)


def test_face_weight_all_ones_is_minus_one():
    c = _quad_config(1, 1, 1, 1)
    assert face_weight(c, c.graph.internal_faces()[0]) == -1


@given(seeds)
def test_face_weight_projective_matches(seed):
    c = random_configuration(fig4(), seed)
    for f in c.graph.internal_faces():
        pts = face_projective_points(c, f)
        assert face_weight_projective(pts) == face_weight(c, f)
        assert face_weight_projective([tuple(3 * x for x in p) for p in pts]) == face_weight(c, f)


def test_quadrilateral_weight_is_negated_inverse_cross_ratio():
    c = random_configuration(fig9(), 4)
    f = c.graph.internal_faces()[0]
    from vecrel.exact_linalg import multi_ratio
    assert face_weight(c, f) == -1 / multi_ratio(face_projective_points(c, f))


# ---------------------------------------------------------------- circuits

def test_circuit_predicates():
    g = fig4()
    assert is_circuit_configuration(random_configuration(g, 3))
    c = new_configuration(double_edge(), {"1": [1], "w": [1], "2": [1]},
                          {"b": {"a": 0, "p": 1, "q": -1}, "c": {"r": 1, "s": -1}}, mode="general")
    assert not is_circuit_configuration(c)


@given(seeds)
def test_relations_determined_by_points(seed):
    c = random_configuration(fig4(), seed)
    g = c.graph
    for b in g.blacks:
        es = g.rotation[b]
        ker = kernel(Matrix.from_columns([c.vectors[g.edges[e][1]] for e in es], c.k))
        assert len(ker) == 1
        stored = [c.relations[b][e] for e in es]
        assert rank(Matrix([list(ker[0]), stored])) == 1


# ---------------------------------------------------------------- systems and charts

def test_fig9_chart_example():
    c = fig9_chart(1, 2, 3, 5)
    assert in_basis_13(c, "2") == (Fraction(-2, 3), Fraction(1, 9))
    assert in_basis_13(c, "4") == (Fraction(1, 3), Fraction(-5, 9))


@given(nonzero, nonzero, nonzero, nonzero)
def test_fig9_chart_formulas(a, b, c, d):
    assume(b * d != 1)
    conf = fig9_chart(a, b, c, d)
    den = 1 - Fraction(b * d)
    assert in_basis_13(conf, "2") == (b * c / den, -a / den)
    assert in_basis_13(conf, "4") == (-c / den, a * d / den)


def test_fig9_chart_on_bd_one_makes_v1_v3_parallel():
    c = fig9_chart(1, 1, 3, 1)
    assert rank(Matrix([c.vectors["1"], c.vectors["3"]])) == 1


def test_chart_at_origin():
    g = fig10()
    c0 = random_configuration(g, 0)
    system = find_system(c0)
    coords = {e: 0 for e in g.edges if e not in system.edges}
    c = chart_from_coordinates(g, system, coords)
    basis = system.basis_labels()
    for verts, edges in system.components():
        bdry = [v for v in verts if g.is_boundary(v)][0]
        for w in verts:
            if g.color(w) == "white" and not g.is_boundary(w):
                assert rank(Matrix([c.vectors[w], c.vectors[bdry]])) == 1
    assert sorted(basis) == basis


@pytest.mark.parametrize("name", sorted(PLABIC_GRAPHS))
def test_find_system_structure(name):
    g = PLABIC_GRAPHS[name]()
    c = random_configuration(g, 5)
    s = find_system(c)
    assert len(s.edges) == sum(1 for v in g.vertices if not g.is_boundary(v))
    assert all(c.coefficient(e) != 0 for e in s.edges)


def test_fig10_system_has_four_edges():
    c = random_configuration(fig10(), 1)
    assert len(find_system(c).edges) == 4
    s = find_system(c, J=[3, 4])
    assert len(s.edges) == 4
    assert s.basis_labels() == [3, 4]


def test_system_validation():
    g = fig9()
    with pytest.raises(ValidationError):
        System(g, {"e_b1_2", "e_b1_3"})


@pytest.mark.parametrize("name", sorted(PLABIC_GRAPHS))
def test_normalize_idempotent_and_chart_round_trip(name):
    g = PLABIC_GRAPHS[name]()
    c = random_configuration(g, 7)
    s = find_system(c)
    n = normalize_via_system(c, s)
    assert normalize_via_system(n, s) == n
    coords = chart_coordinates(c, s)
    assert chart_coordinates(chart_from_coordinates(g, s, coords), s) == coords


@given(seeds, st.lists(nonzero, min_size=6, max_size=6))
def test_gauge_equivalent_configurations_normalize_identically(seed, lams):
    c = random_configuration(fig4(), seed)
    g = c.graph
    d = c
    internal = [v for v in sorted(g.vertices) if not g.is_boundary(v)]
    for v, lam in zip(internal, lams):
        d = gauge(d, v, lam)
    s = find_system(c)
    assert normalize_via_system(c, s).kasteleyn_matrix() == normalize_via_system(d, s).kasteleyn_matrix()
    assert gauge_equal(c, d)


def test_gauge_equal_detects_different_classes():
    assert not gauge_equal(random_configuration(fig4(), 1), random_configuration(fig4(), 2))


def test_gauge_equal_up_to_linear_map():
    c = random_configuration(fig9(), 3)
    assert gauge_equal(c, apply_linear_map(c, Matrix([[2, 1], [1, 1]])))


def test_json_round_trip():
    c = random_configuration(fig4(), 9)
    assert Configuration.from_json(c.to_json()) == c
