"""Seeded invariant suites shared by ``vecrel check all`` and the acceptance tests.

Every suite takes an instance count and a base seed, runs exactly, and
returns a :class:`Outcome`.  A suite never raises on a failing instance;
the failure (or unexpected exception) is recorded in ``failures``.
"""

from __future__ import annotations

import time
from fractions import Fraction

from . import dynamics_drivers as dyn
from .boundary_maps import (boundary_measurement_matchings, boundary_measurement_paths,
                            induced_configuration, minor_identity_holds, random_positive_point,
                            random_T_G_point, random_weights, reconstruct_psi, recover_edge_weights,
                            restrict_phi)
from .catalog import PLABIC_GRAPHS, fig4, fig9
from .config_core import (System, chart_from_coordinates, face_weights, gauge_equal, random_configuration,
                          signed_weights, weights_gauge_equivalent)
from .errors import DegenerateError, VecrelError
from .exact_linalg import Matrix, inverse, rng
from .local_moves import urban_renewal_graph_weights, urban_renewal_move, y_mutation
from .plabic_positroid import PlabicContext, check_orientation, kasteleyn_signs


class Outcome:
    """Result of one suite: pass flag, instance count, elapsed seconds, failure notes."""

    def __init__(self, name: str, instances: int, failures: list, seconds: float, limit: float | None = None):
        self.name = name
        self.instances = instances
        self.failures = failures
        self.seconds = seconds
        self.limit = limit

    @property
    def in_time(self) -> bool:
        return self.limit is None or self.seconds < self.limit

    @property
    def passed(self) -> bool:
        return not self.failures and self.instances > 0 and self.in_time

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "instances": self.instances,
                "seconds": round(self.seconds, 3), "limit": self.limit, "failures": self.failures[:10]}


def _run(name: str, cases, body, limit: float | None = None) -> Outcome:
    """Apply ``body`` to every case; a falsy return or an exception is a failure."""
    start = time.perf_counter()
    failures, count = [], 0
    for label, case in cases:
        count += 1
        try:
            ok = body(case)
        except VecrelError as exc:
            failures.append({"case": label, "error": exc.code, "message": exc.message})
            continue
        if not ok:
            failures.append({"case": label})
    return Outcome(name, count, failures, time.perf_counter() - start, limit)


ROUND_TRIP_GRAPHS = ("fig4", "fig9")


def _urban_faces(g):
    return [f.id for f in g.internal_faces() if f.length == 4]


def _renewable(g, face, s: int, tries: int = 50):
    """First configuration in a seeded stream on which urban renewal at ``face`` is defined."""
    for t in range(tries):
        c = random_configuration(g, s * tries + t)
        try:
            return c, urban_renewal_move(c, face)
        except DegenerateError:
            continue
    raise DegenerateError("sampling-failed", "no renewable configuration found", face=face)


# ---------------------------------------------------------------- the twelve suites

def phi_psi_round_trip(count: int = 100, seed: int = 0) -> Outcome:
    """``restrict_phi(reconstruct_psi(A)) == A`` for random points of the measurement image."""
    ctxs = {name: PlabicContext(PLABIC_GRAPHS[name]()) for name in ROUND_TRIP_GRAPHS}
    cases = [((name, seed + i), (ctxs[name], seed + i)) for name in ROUND_TRIP_GRAPHS for i in range(count)]

    def body(case):
        ctx, s = case
        A = random_T_G_point(ctx, s)
        return restrict_phi(reconstruct_psi(A.matrix, ctx)) == A

    return _run("phi-psi-round-trip", cases, body, limit=10.0)


def psi_phi_uniqueness(count: int = 100, seed: int = 0) -> Outcome:
    """``reconstruct_psi(restrict_phi(c))`` is gauge-equal to ``c`` for random configurations."""
    ctxs = {name: PlabicContext(PLABIC_GRAPHS[name]()) for name in ROUND_TRIP_GRAPHS}
    cases = [((name, seed + i), (ctxs[name], seed + i)) for name in ROUND_TRIP_GRAPHS for i in range(count)]

    def body(case):
        ctx, s = case
        c = random_configuration(ctx.original, s)
        return gauge_equal(reconstruct_psi(restrict_phi(c).matrix, ctx), c)

    return _run("psi-phi-uniqueness", cases, body, limit=10.0)


def signed_weight_commutation(count: int = 50, seed: int = 0) -> Outcome:
    """Signed weights after urban renewal equal the square-move update of signed weights, up to gauge."""
    cases = []
    for name in sorted(PLABIC_GRAPHS):
        g = PLABIC_GRAPHS[name]()
        faces = _urban_faces(g)
        if faces:
            cases += [((name, seed + i), (g, faces[i % len(faces)], seed + i)) for i in range(count)]

    def body(case):
        g, face, s = case
        c, res = _renewable(g, face, s)
        before = signed_weights(c, kasteleyn_signs(g))
        after = signed_weights(res.config, kasteleyn_signs(res.config.graph))
        expected = urban_renewal_graph_weights(g, before, res.new)
        return weights_gauge_equivalent(res.config.graph, expected, after)

    return _run("signed-weight-commutation", cases, body)


def face_weight_mutation(count: int = 50, seed: int = 0) -> Outcome:
    """Face weights after urban renewal equal ``y_mutation`` of the face weights before."""
    cases = []
    for name in sorted(PLABIC_GRAPHS):
        g = PLABIC_GRAPHS[name]()
        faces = _urban_faces(g)
        if faces:
            cases += [((name, seed + i), (g, faces[i % len(faces)], seed + i)) for i in range(count)]

    def body(case):
        g, face, s = case
        c, res = _renewable(g, face, s)
        expected = y_mutation(g, face_weights(c), face)
        got = face_weights(res.config)
        return all(expected[res.face_map[f]] == y for f, y in got.items()) and len(got) == len(expected)

    return _run("face-weight-mutation", cases, body)


def measurement_agreement(count: int = 100, seed: int = 0) -> Outcome:
    """Matchings measurement, restriction of the induced configuration and path measurement agree."""
    ctxs = [PlabicContext(PLABIC_GRAPHS[name]()) for name in sorted(PLABIC_GRAPHS)]
    cases = [((ctxs[i % len(ctxs)].original.n, seed + i), (ctxs[i % len(ctxs)], seed + i)) for i in range(count)]

    def body(case):
        ctx, s = case
        g = ctx.original
        w = random_weights(g, s)
        a = boundary_measurement_matchings(g, w)
        b = restrict_phi(induced_configuration(g, w, kasteleyn_signs(g)))
        c = boundary_measurement_paths(ctx, w)
        return a == b == c

    return _run("measurement-agreement", cases, body)


def minor_identity(count: int = 20, seed: int = 0) -> Outcome:
    """Boundary minors equal complementary Kasteleyn minors with the parity sign."""
    cases = [((name, seed + i), (PLABIC_GRAPHS[name](), seed + i))
             for name in sorted(PLABIC_GRAPHS) for i in range(count)]
    return _run("minor-identity", cases, lambda case: minor_identity_holds(random_configuration(*case)))


FIG9_COORDS = {"e_b1_3": 1, "e_b1_4": 2, "e_b2_1": 3, "e_b2_2": 5}
FIG9_EXPECTED = {"2": (Fraction(-2, 3), Fraction(1, 9)), "4": (Fraction(1, 3), Fraction(-5, 9))}


def fig9_chart(count: int = 1, seed: int = 0) -> Outcome:
    """Chart at ``(a, b, c, d) = (1, 2, 3, 5)`` in the basis ``v_1, v_3``."""

    def body(_):
        g = fig9()
        c = chart_from_coordinates(g, System(g, {"e_b1_2", "e_b2_4"}), FIG9_COORDS)
        T = inverse(Matrix.from_columns([c.vectors["1"], c.vectors["3"]], 2))
        return all(tuple(T @ c.vectors[w]) == xy for w, xy in FIG9_EXPECTED.items())

    return _run("fig9-chart", [("fig9", None)], body)


def edge_weight_recovery(count: int = 50, seed: int = 0) -> Outcome:
    """Recovered edge weights reproduce a totally positive point under the path measurement."""
    ctx = PlabicContext(fig4())
    cases = [(("fig4", seed + i), seed + i) for i in range(count)]

    def body(s):
        A = random_positive_point(ctx, s)
        return boundary_measurement_paths(ctx, recover_edge_weights(A.matrix, ctx)) == A

    return _run("edge-weight-recovery", cases, body)


def dynamics_oracles(count: int = 100, seed: int = 0) -> Outcome:
    """The four via-graph pipelines agree with the direct geometric constructions."""

    def pentagram(s):
        P = dyn.random_polygon(5 + s % 4, s)
        return dyn.pentagram_step(P) == dyn.pentagram_step_via_graph(P)

    def laplace(s):
        w = dyn.random_laplace_window(5, s)
        a, b = dyn.laplace_darboux_step(w), dyn.laplace_darboux_step_via_graph(w)
        return bool(b) and all(a[key] == b[key] for key in b)

    def qnet(s):
        cube = dyn.random_qnet_cube(s)
        return dyn.qnet_gentrify(cube) == dyn.qnet_gentrify_via_graph(cube)

    def darboux(s):
        d = dyn.random_darboux_data(s)
        return dyn.darboux_superurban(d) == dyn.darboux_superurban_via_graph(d)

    systems = {"pentagram": pentagram, "laplace": laplace, "qnet": qnet, "darboux": darboux}
    cases = [((name, seed + i), (fn, seed + i)) for name, fn in systems.items() for i in range(count)]
    return _run("dynamics-oracles", cases, lambda case: case[0](case[1]), limit=60.0)


def qnet_y_tilde(count: int = 50, seed: int = 0) -> Outcome:
    """Tracking face weights through the gentrification moves gives the closed form for ``~Y^x``."""

    def body(s):
        cube = dyn.random_qnet_cube(s)
        c = dyn.qnet_configuration(cube)
        fw = face_weights(c)
        Yx, Yy, Yz = (fw[dyn.qnet_edge_face(c, "Q000", "Q" + u).id] for u in ("100", "010", "001"))
        top, c2, tracked = dyn.qnet_gentrify_via_graph(cube, track=True)
        new = c2.graph.internal_whites[0]
        got = tracked[dyn.qnet_edge_face(c2, "Q011", new).id]
        return got == dyn.qnet_y_tilde_formula(Yx, Yy, Yz) == dyn.qnet_y(cube, "x", (0, 1, 1), True, top) \
            and tracked == face_weights(c2)

    return _run("qnet-y-tilde", [(("qnet", seed + i), seed + i) for i in range(count)], body)


def koenigs_and_conic(count: int = 50, seed: int = 0) -> Outcome:
    """Resistor configurations are Koenigs; Ising six-point sets lie on a conic."""

    def koenigs(s):
        cond = dyn.random_conductances(s)
        return dyn.koenigs_check(dyn.resistor_to_config(*cond), cond)

    def conic(s):
        r = rng(s)
        c = dyn.ising_configuration([dyn.random_pythagorean(r) for _ in range(3)])
        P = dyn.ising_points(c)
        return dyn.ising_conic_check([P[x] for x in "ABCDEF"]) and dyn.ising_multiratio_identity(c)

    cases = [(("koenigs", seed + i), (koenigs, seed + i)) for i in range(count)]
    cases += [(("conic", seed + i), (conic, seed + i)) for i in range(count)]
    return _run("koenigs-and-conic", cases, lambda case: case[0](case[1]))


def orientation_structure(count: int = 1, seed: int = 0) -> Outcome:
    """The canonical orientation is perfect, acyclic, avoids ``I_1`` and has ``m - 1`` matched edges per face."""
    cases = [((name,), PlabicContext(PLABIC_GRAPHS[name]())) for name in sorted(PLABIC_GRAPHS)]

    def body(ctx):
        return all(check_orientation(ctx.graph, ctx.orientation, ctx.I1).values())

    return _run("orientation-structure", cases, body)


SUITES = (
    (1, phi_psi_round_trip),
    (2, psi_phi_uniqueness),
    (3, signed_weight_commutation),
    (4, face_weight_mutation),
    (5, measurement_agreement),
    (6, minor_identity),
    (7, fig9_chart),
    (8, edge_weight_recovery),
    (9, dynamics_oracles),
    (10, qnet_y_tilde),
    (11, koenigs_and_conic),
    (12, orientation_structure),
)


def run_all(seed: int = 0) -> list:
    """Run every suite at its default size; returns ``[(number, Outcome)]``."""
    return [(number, suite(seed=seed)) for number, suite in SUITES]
