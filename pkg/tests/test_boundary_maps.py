from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vecrel.boundary_maps import (GrassmannPoint, boundary_measurement_matchings, boundary_measurement_paths,
                                  check_totally_positive, contract_weights, in_T_G, induced_configuration,
                                  minor_identity_holds, random_positive_point, random_T_G_point, random_weights,
                                  reconstruct_psi, recover_edge_weights, restrict_phi, right_twist)
from vecrel.catalog import PLABIC_GRAPHS, fig4, fig9, single_edge
from vecrel.config_core import is_circuit_configuration, random_configuration
from vecrel.errors import ValidationError
from vecrel.exact_linalg import Matrix, ProjectivePoint, Subspace, dot, minor
from vecrel.plabic_positroid import PlabicContext, kasteleyn_signs

seeds = st.integers(0, 10 ** 6)
graph_names = st.sampled_from(sorted(PLABIC_GRAPHS))
CTX = {name: PlabicContext(make()) for name, make in PLABIC_GRAPHS.items()}

FIG9_OUTSIDE = Matrix([[1, 0, -3, 0], [0, 1, -3, -3]])
FIG4_OUTSIDE = Matrix([[1, 0, 0, 2, -1, 0], [0, 1, 0, -1, -1, 1], [0, 0, 1, 0, -2, 1]])


# ---------------------------------------------------------------- restriction

def test_fig9_restriction_has_nonzero_13_minor():
    for s in range(5):
        assert restrict_phi(random_configuration(fig9(), s)).delta((1, 3)) != 0


def test_lollipop_column_is_zero():
    g = single_edge()
    A = restrict_phi(random_configuration(g, 0)).matrix
    lone = [j for j in range(1, g.n + 1) if not any(j in J for J in PlabicContext(g).positroid)]
    assert lone
    for j in lone:
        assert all(x == 0 for x in A.column(j - 1))


@given(graph_names, seeds)
def test_minor_identity(name, seed):
    assert minor_identity_holds(random_configuration(PLABIC_GRAPHS[name](), seed))


@given(graph_names, seeds)
def test_restriction_lands_in_positroid_variety(name, seed):
    from vecrel.plabic_positroid import in_positroid_variety
    A = restrict_phi(random_configuration(PLABIC_GRAPHS[name](), seed))
    assert in_positroid_variety(A.matrix, CTX[name].positroid)


# ---------------------------------------------------------------- measurement

def test_all_ones_fig4_counts_matchings():
    g = fig4()
    pl = boundary_measurement_matchings(g, {e: 1 for e in g.edges}).plucker()
    counts = {tuple(sorted(J)): len(ms) for J, ms in CTX["fig4"].matchings.items()}
    scale = pl[(1, 2, 3)] / counts[(1, 2, 3)]
    assert all(pl[J] == scale * counts.get(J, 0) for J in pl)
    assert counts[(1, 3, 6)] == 4


@given(graph_names, seeds, st.booleans())
def test_paths_agree_with_matchings(name, seed, positive):
    g = PLABIC_GRAPHS[name]()
    w = random_weights(g, seed, positive)
    assert boundary_measurement_paths(CTX[name], w) == boundary_measurement_matchings(g, w)


@given(graph_names, seeds)
def test_induced_configuration_restricts_to_measurement(name, seed):
    g = PLABIC_GRAPHS[name]()
    w = random_weights(g, seed, positive=True)
    c = induced_configuration(g, w, kasteleyn_signs(g))
    assert restrict_phi(c) == boundary_measurement_matchings(g, w)


def test_zero_weight_rejected():
    g = fig9()
    w = {e: 1 for e in g.edges}
    w[next(iter(g.edges))] = 0
    with pytest.raises(ValidationError) as err:
        boundary_measurement_matchings(g, w)
    assert err.value.code == "zero-weight"


# ---------------------------------------------------------------- twist and the image

@given(graph_names, seeds)
def test_twist_orthogonality(name, seed):
    ctx = CTX[name]
    A = random_T_G_point(ctx, seed).matrix
    tw = right_twist(A, ctx.necklace)
    for j, I in enumerate(ctx.necklace, start=1):
        col = tw.columns[j - 1]
        assert all(dot(col, A.column(i - 1)) == 0 for i in I if i != j)
        assert dot(col, A.column(j - 1)) != 0 or not any(A.column(j - 1))


@given(graph_names, seeds)
def test_positive_points_are_in_image(name, seed):
    assert in_T_G(random_positive_point(CTX[name], seed), CTX[name])


def test_points_outside_image():
    assert not in_T_G(FIG9_OUTSIDE, CTX["fig9"])
    assert not in_T_G(FIG4_OUTSIDE, CTX["fig4"])
    with pytest.raises(ValidationError) as err:
        reconstruct_psi(FIG4_OUTSIDE, CTX["fig4"])
    assert err.value.code == "not-in-T_G"


def test_outside_open_positroid():
    with pytest.raises(ValidationError) as err:
        in_T_G(Matrix([[1, 0, 1, 1], [0, 1, 1, 1]]), CTX["fig10"])
    assert err.value.code == "outside-open-positroid"


def test_reconstruct_size_mismatch():
    with pytest.raises(ValidationError) as err:
        reconstruct_psi(Matrix([[1, 0, 1], [0, 1, 1]]), CTX["fig9"])
    assert err.value.code == "size-mismatch"


# ---------------------------------------------------------------- reconstruction

@pytest.mark.parametrize("v3,v6", [((1, 2, 3), (3, -1, 2)), ((1, -1, 2), (2, 1, -3))])
def test_fig4_reconstruction_example(v3, v6):
    A = Matrix.from_columns([(1, 0, 0), (0, 1, 0), v3, (0, 0, 1), (1, 1, 1), v6], 3)
    c = reconstruct_psi(A, CTX["fig4"])
    assert ProjectivePoint(c.vectors["u"]) == ProjectivePoint((1, 1, 0))


@given(graph_names, seeds)
def test_phi_psi_round_trip(name, seed):
    A = random_T_G_point(CTX[name], seed)
    c = reconstruct_psi(A, CTX[name])
    assert restrict_phi(c) == A
    assert is_circuit_configuration(c)


@given(graph_names, seeds)
def test_psi_phi_recovers_configuration(name, seed):
    from vecrel.config_core import gauge_equal
    ctx = CTX[name]
    c = reconstruct_psi(random_T_G_point(ctx, seed), ctx)
    assert gauge_equal(reconstruct_psi(restrict_phi(c), ctx), c)


@given(graph_names, seeds)
def test_vectors_near_vertex_one_lie_in_H1(name, seed):
    ctx = CTX[name]
    A = random_T_G_point(ctx, seed).matrix
    c = reconstruct_psi(A, ctx)
    H1 = Subspace.span([A.column(i - 1) for i in sorted(ctx.I1) if i != 1], ctx.k)
    S = ctx.labels["vertices"]
    for w in ctx.original.internal_whites:
        if 1 in S[w]:
            assert H1.contains(c.vectors[w])


# ---------------------------------------------------------------- edge weights

def test_fig4_barycentric_weights():
    ctx = CTX["fig4"]
    A = random_positive_point(ctx, 3)
    w = recover_edge_weights(A, ctx)
    d = lambda *J: minor(A.matrix, [j - 1 for j in J])
    assert w["e3"] == 1
    assert w["e4"] == d(2, 4, 5) / (d(1, 4, 5) + d(2, 4, 5)) == Fraction(7, 11)
    assert w["e5"] == d(1, 4, 5) / (d(1, 4, 5) + d(2, 4, 5)) == Fraction(4, 11)


@given(graph_names, seeds)
def test_recovered_weights_reproduce_point(name, seed):
    ctx = CTX[name]
    A = random_positive_point(ctx, seed)
    w = recover_edge_weights(A, ctx)
    assert all(x > 0 for x in w.values())
    assert boundary_measurement_paths(ctx, contract_weights(ctx, w)) == A


def test_totally_positive_sign():
    assert check_totally_positive(Matrix([[1, 0, -1, -2], [0, 1, 3, 5]]), CTX["fig9"]) == 1


def test_not_totally_positive_rejected():
    with pytest.raises(ValidationError) as err:
        check_totally_positive(Matrix([[1, 0, 1, 2], [0, 1, 3, 5]]), CTX["fig9"])
    assert err.value.code == "nonpositive-minor"


# ---------------------------------------------------------------- Grassmann points

def test_grassmann_point_equality_up_to_scale():
    A = Matrix([[1, 0, -1, -2], [0, 1, 3, 5]])
    B = Matrix([[1, 1, 2, 3], [0, 2, 6, 10]])
    assert GrassmannPoint(A) == GrassmannPoint(B)
    assert GrassmannPoint(A) != GrassmannPoint(Matrix([[1, 0, 1, 2], [0, 1, 3, 5]]))


@given(graph_names, seeds)
def test_grassmann_point_json_and_plucker_round_trip(name, seed):
    P = random_T_G_point(CTX[name], seed)
    assert GrassmannPoint.from_json(P.to_json()) == P
    assert GrassmannPoint.from_plucker(P.plucker(), P.n, P.k) == P
