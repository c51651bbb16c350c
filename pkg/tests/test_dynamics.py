from fractions import Fraction
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vecrel import dynamics_drivers as dyn
from vecrel.config_core import face_weight, face_weights
from vecrel.errors import DegenerateError, ValidationError
from vecrel.exact_linalg import Matrix, ProjectivePoint, rng

PENTAGON = [(0, 0), (2, 0), (3, 2), (1, 4), (-1, 2)]
seeds = st.integers(0, 10 ** 6)


# ---------------------------------------------------------------- pentagram map

def test_pentagon_image():
    B = dyn.pentagram_step(PENTAGON)
    assert dyn.affine(B[0]) == (Fraction(1), Fraction(2, 3))
    assert B == dyn.pentagram_step_via_graph(PENTAGON)


def test_quadrilateral_collapses():
    with pytest.raises(DegenerateError) as err:
        dyn.pentagram_step([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert err.value.code == "n-too-small"
    assert err.value.context["collapse"] == ["1/1", "1/1", "2/1"]


@given(st.integers(5, 8), seeds)
def test_pentagram_graph_pipeline_agrees(n, seed):
    P = dyn.random_polygon(n, seed)
    assert dyn.pentagram_step(P) == dyn.pentagram_step_via_graph(P)


@given(st.integers(5, 8), seeds)
def test_pentagram_face_weights(n, seed):
    P = dyn.random_polygon(n, seed)
    c = dyn.pentagram_configuration(P)
    for i in range(n):
        assert face_weight(c, dyn.pentagram_face(c.graph, i)) == dyn.pentagram_y(P, i)


@given(seeds, st.lists(st.integers(-5, 5), min_size=9, max_size=9))
def test_pentagram_projective_equivariance(seed, entries):
    T = Matrix([entries[0:3], entries[3:6], entries[6:9]])
    from vecrel.exact_linalg import det
    if det(T) == 0:
        return
    P = [dyn.homogeneous(p) for p in dyn.random_polygon(6, seed)]
    moved = [T @ p for p in P]
    assert [ProjectivePoint(T @ tuple(b)) for b in map(dyn.homogeneous, dyn.pentagram_step(P))] == \
        [ProjectivePoint(dyn.homogeneous(b)) for b in dyn.pentagram_step(moved)]


def test_trajectory_json_and_svg():
    traj = dyn.pentagram_trajectory(PENTAGON, 2)
    assert len(traj) == 3
    doc = dyn.trajectory_json("pentagram", traj)
    assert doc["system"] == "pentagram"
    assert len(doc["generations"]) == 3
    json.dumps(doc)
    svg = dyn.polygon_svg(traj)
    assert svg.startswith("<svg") and svg.count("<polygon") == 3


# ---------------------------------------------------------------- Laplace-Darboux

@given(seeds)
def test_laplace_pipeline_agrees(seed):
    w = dyn.random_laplace_window(5, seed)
    direct, via = dyn.laplace_darboux_step(w), dyn.laplace_darboux_step_via_graph(w)
    assert via and all(direct[key] == via[key] for key in via)


def test_laplace_coplanarity_violated():
    w = dyn.random_laplace_window(5, 3)
    site = sorted(w)[len(w) // 2]
    w[site] = tuple(x + (7 if i == 0 else 0) for i, x in enumerate(w[site]))
    w[site] = (w[site][0] + 1, w[site][1] * 3 + 1, w[site][2] - 5, w[site][3] + 2)
    with pytest.raises(ValidationError) as err:
        dyn.laplace_darboux_step(w)
    assert err.value.code == "coplanarity-violated"


# ---------------------------------------------------------------- Q-nets

@given(seeds)
def test_qnet_pipeline_agrees(seed):
    cube = dyn.random_qnet_cube(seed)
    assert dyn.qnet_gentrify(cube) == dyn.qnet_gentrify_via_graph(cube)


@given(seeds)
def test_qnet_y_are_face_weights(seed):
    cube = dyn.random_qnet_cube(seed)
    c = dyn.qnet_configuration(cube)
    fw = face_weights(c)
    for d, u in zip("xyz", ("100", "010", "001")):
        assert dyn.qnet_y(cube, d) == fw[dyn.qnet_edge_face(c, "Q000", "Q" + u).id]


@given(seeds)
def test_qnet_y_tilde(seed):
    cube = dyn.random_qnet_cube(seed)
    Y = [dyn.qnet_y(cube, d) for d in "xyz"]
    top, c2, tracked = dyn.qnet_gentrify_via_graph(cube, track=True)
    assert tracked == face_weights(c2)
    assert dyn.qnet_y(cube, "x", (0, 1, 1), True, top) == dyn.qnet_y_tilde_formula(*Y)


# ---------------------------------------------------------------- discrete Darboux maps

@given(seeds)
def test_darboux_pipeline_agrees(seed):
    d = dyn.random_darboux_data(seed)
    assert dyn.darboux_superurban(d) == dyn.darboux_superurban_via_graph(d)


@given(seeds)
def test_darboux_face_weights(seed):
    d = dyn.random_darboux_data(seed)
    c = dyn.darboux_configuration(d)
    fw = face_weights(c)
    for a, b in (("x", "y"), ("y", "z"), ("z", "x")):
        f = dyn.darboux_face(c, {f"f{b}000", f"f{b}" + "".join("1" if x == a else "0" for x in "xyz")})
        assert dyn.darboux_y_lozenge(d, a, b) == fw[f.id]
    hexagon = dyn.darboux_face(c, {"fx000", "fy000", "fz000"})
    assert dyn.darboux_y_in(d) == 1 / fw[hexagon.id]


def test_darboux_face_not_found():
    c = dyn.darboux_configuration(dyn.random_darboux_data(0))
    with pytest.raises(ValidationError):
        dyn.darboux_face(c, {"fx000"})


# ---------------------------------------------------------------- resistor networks and Ising

def test_unit_conductances_relation():
    c = dyn.resistor_to_config(1, 1, 1)
    v = c.vectors
    total = [3 * a - b - e - f for a, b, e, f in zip(v["Q000"], v["Q110"], v["Q011"], v["Q101"])]
    assert not any(total)
    assert dyn.resistor_coefficients(1, 1, 1)["Lxy_Q110"] == -1


@given(seeds)
def test_resistor_configurations_are_koenigs(seed):
    cond = dyn.random_conductances(seed)
    assert dyn.koenigs_check(dyn.resistor_to_config(*cond), cond)


def test_resistor_sign_tiling():
    g = dyn.resistor_graph()
    s = dyn.resistor_signs()
    for f in g.internal_faces():
        assert sum(1 for e in f.edges if s[e] < 0) in (1, 3)


def test_nonpositive_conductance_rejected():
    with pytest.raises(ValidationError) as err:
        dyn.resistor_coefficients(1, 0, 2)
    assert err.value.code == "nonpositive-conductance"


def test_conic_determinant():
    on = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (1, 0, 1), (0, 1, 1), (-3, 4, 5)]
    assert dyn.ising_conic_check(on)
    assert not dyn.ising_conic_check(on[:5] + [(1, 2, 3)])


@given(seeds)
def test_ising_points_on_conic(seed):
    r = rng(seed)
    pairs = [dyn.random_pythagorean(r) for _ in range(3)]
    c = dyn.ising_configuration(pairs)
    fw = face_weights(c)
    hexagon = dyn.darboux_face(c, {"fx000", "fy000", "fz000"})
    (s1, c1), (s2, c2), (s3, c3) = pairs
    assert fw[hexagon.id] == c1 * c2 * c3
    P = dyn.ising_points(c)
    assert dyn.ising_conic_check([P[x] for x in "ABCDEF"])
    assert dyn.ising_multiratio_identity(c)


def test_pythagorean_pairs():
    r = rng(0)
    for _ in range(10):
        s, c = dyn.random_pythagorean(r)
        assert s * s + c * c == 1 and 0 < s < 1 and 0 < c < 1
