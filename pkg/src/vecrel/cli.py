"""Command-line entry point ``vecrel``.

Every command writes deterministic JSON (sorted keys, rationals as
``"p/q"`` strings) to stdout or to ``--out``.  Failures print a JSON object
``{"error": {"code", "message", "context"}}`` and exit with 2 (invalid
input), 3 (degenerate input) or 4 (internal assertion).

Graph arguments accept either a path to a graph JSON document or the name
of a catalog graph (``fig4``, ``fig9``, ``fig10``).  Wherever a document
embeds a graph, the ``"graph"`` field may likewise be a catalog name.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__, checks
from . import dynamics_drivers as dyn
from .boundary_maps import (GrassmannPoint, boundary_measurement_matchings, boundary_measurement_paths,
                            contract_weights, random_positive_point, random_T_G_point, random_weights, reconstruct_psi,
                            recover_edge_weights, restrict_phi)
from .catalog import PLABIC_GRAPHS
from .config_core import Configuration, face_weights, random_configuration
from .errors import DegenerateError, InternalError, ValidationError, VecrelError, _jsonable
from .exact_linalg import fmt
from .local_moves import (add_degree2_black_move, add_degree2_white_move, remove_degree2_black_move,
                          remove_degree2_white_move, urban_renewal_move)
from .plabic_positroid import PlabicContext, kasteleyn_signs
from .surface_graph import DISK, SurfaceGraph

EXIT_CODES = {"validation": 2, "degenerate": 3, "internal": 4}
PENTAGON = [(0, 0), (2, 0), (3, 2), (1, 4), (-1, 2)]


# ---------------------------------------------------------------- input helpers

def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError("unreadable-input", f"cannot read {path}: {exc.strerror}", path=path)
    except json.JSONDecodeError as exc:
        raise ValidationError("bad-json", f"{path} is not valid JSON: {exc.msg}", path=path, line=exc.lineno)


def resolve_graph(ref) -> SurfaceGraph:
    """A graph from a catalog name, a graph document, or a path to one."""
    if isinstance(ref, str):
        if ref in PLABIC_GRAPHS:
            return PLABIC_GRAPHS[ref]()
        if Path(ref).is_file():
            return resolve_graph(_read_json(ref))
        raise ValidationError("unknown-graph", f"{ref!r} is neither a catalog graph nor a file",
                              catalog=sorted(PLABIC_GRAPHS))
    if isinstance(ref, dict):
        return SurfaceGraph.from_json(ref)
    raise ValidationError("bad-json", "a graph must be a catalog name or a graph document")


def load_config(doc) -> Configuration:
    if not isinstance(doc, dict) or "graph" not in doc:
        raise ValidationError("bad-json", "a configuration document needs a graph")
    data = dict(doc)
    data["graph"] = resolve_graph(doc["graph"]).to_json()
    return Configuration.from_json(data)


def _field(doc, key):
    if not isinstance(doc, dict) or key not in doc:
        raise ValidationError("bad-json", f"missing field {key!r}", field=key)
    return doc[key]


def _point_from(doc) -> tuple:
    g = resolve_graph(_field(doc, "graph"))
    return g, GrassmannPoint.from_json(doc)


# ---------------------------------------------------------------- output helpers

def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _weights_json(weights: dict) -> dict:
    return {str(e): fmt(x) for e, x in weights.items()}


def _face_json(f) -> dict:
    return {"id": f.id, "kind": f.kind, "vertices": f.vertices, "edges": f.edges}


def _point_doc(g: SurfaceGraph, p: GrassmannPoint) -> dict:
    """Point document; it is accepted back by ``reconstruct`` and ``recover-weights``."""
    out = p.to_json()
    out["graph"] = g.to_json()
    return out


# ---------------------------------------------------------------- graph commands

def cmd_validate(args):
    g = resolve_graph(args.graph)
    if args.format == "dot":
        return g.to_dot()
    out = {"surface": g.surface, "vertices": len(g.vertices), "edges": len(g.edges),
           "faces": len(g.faces), "internal_faces": len(g.internal_faces()),
           "blacks": len(g.blacks), "whites": len(g.whites)}
    if g.surface == DISK:
        ctx = None
        try:
            ctx = PlabicContext(g)
        except ValidationError as exc:
            if exc.code != "not-reduced":
                raise
        out.update({"n": g.n, "boundary": list(g.boundary), "reduced": ctx is not None})
        if ctx is not None:
            out["k"] = ctx.k
    return out


def cmd_faces(args):
    g = resolve_graph(args.graph)
    return {"faces": [_face_json(f) for f in g.faces]}


def _zigzag_graph(g: SurfaceGraph) -> SurfaceGraph:
    return PlabicContext(g).graph if g.surface == DISK else g


def cmd_zigzags(args):
    g = resolve_graph(args.graph)
    h = _zigzag_graph(g)
    zs = [{"start": z.start, "end": z.end, "edges": [s[0] for s in z.steps]} for z in h.zigzags]
    out = {"zigzags": zs}
    if h.surface == DISK:
        out["trip_permutation"] = {str(i): j for i, j in sorted(h.trip_permutation().items())}
    return out


def cmd_positroid(args):
    ctx = PlabicContext(resolve_graph(args.graph))
    return {"n": ctx.n, "k": ctx.k, "positroid": ctx.positroid_json()}


def cmd_necklace(args):
    ctx = PlabicContext(resolve_graph(args.graph))
    out = ctx.necklace_json()
    out["labels"] = ctx.labels_json()
    return out


def cmd_signs(args):
    g = resolve_graph(args.graph)
    return {"signs": {e: s for e, s in sorted(kasteleyn_signs(g).items())}}


# ---------------------------------------------------------------- configurations and moves

def _resolve_face(c: Configuration, step: dict):
    if "face" in step:
        return step["face"]
    if "face_vertices" in step:
        return c.graph.face_by_vertices(step["face_vertices"]).id
    raise ValidationError("bad-move", "urban renewal needs 'face' or 'face_vertices'", step=step)


def apply_move(c: Configuration, step: dict):
    """Replay one script entry; returns the :class:`MoveResult`."""
    op = _field(step, "op")
    if op == "urban_renewal":
        return urban_renewal_move(c, _resolve_face(c, step))
    if op in ("add_degree2_black", "add_degree2_white"):
        fn = add_degree2_black_move if op == "add_degree2_black" else add_degree2_white_move
        return fn(c, _field(step, "vertex"), _field(step, "split"))
    if op in ("remove_degree2_black", "remove_degree2_white"):
        fn = remove_degree2_black_move if op == "remove_degree2_black" else remove_degree2_white_move
        return fn(c, _field(step, "vertex"), step.get("keep"))
    raise ValidationError("bad-move", f"unknown move {op!r}", op=op)


def cmd_moves(args):
    script = _read_json(args.script)
    if isinstance(script, list):
        if args.config is None:
            raise ValidationError("bad-json", "a bare move list needs --config")
        moves, cdoc = script, _read_json(args.config)
    else:
        moves = _field(script, "moves")
        cdoc = _read_json(args.config) if args.config else _field(script, "config")
    c = load_config(cdoc)
    steps = []
    for i, step in enumerate(moves):
        try:
            res = apply_move(c, step)
        except VecrelError as exc:
            exc.context.setdefault("step", i)
            raise
        c = res.config
        steps.append({"op": step["op"], "face_map": _jsonable(res.face_map), "new": _jsonable(res.new)})
    return {"config": c.to_json(), "steps": steps}


def cmd_faceweights(args):
    c = load_config(_read_json(args.config))
    return {"faceweights": {f: fmt(y) for f, y in sorted(face_weights(c).items())}}


# ---------------------------------------------------------------- boundary maps

def cmd_restrict(args):
    c = load_config(_read_json(args.config))
    return _point_doc(c.graph, restrict_phi(c))


def cmd_measure(args):
    doc = _read_json(args.weights)
    g = resolve_graph(_field(doc, "graph"))
    weights = _field(doc, "weights")
    missing = sorted(set(g.edges) - set(weights))
    if missing:
        raise ValidationError("missing-weights", "every edge needs a weight", edges=missing)
    method = doc.get("method", args.method)
    if method == "paths":
        p = boundary_measurement_paths(PlabicContext(g), weights)
    elif method == "matchings":
        p = boundary_measurement_matchings(g, weights)
    else:
        raise ValidationError("bad-method", f"unknown method {method!r}", method=method)
    return _point_doc(g, p)


def cmd_reconstruct(args):
    g, p = _point_from(_read_json(args.point))
    return reconstruct_psi(p.matrix, g).to_json()


def cmd_recover_weights(args):
    g, p = _point_from(_read_json(args.point))
    ctx = PlabicContext(g)
    return {"weights": _weights_json(dict(sorted(contract_weights(ctx, recover_edge_weights(p.matrix, ctx)).items())))}


def cmd_sample(args):
    g = resolve_graph(args.graph)
    if args.kind == "config":
        return random_configuration(g, args.seed).to_json()
    if args.kind == "weights":
        return {"graph": g.to_json(), "weights": _weights_json(random_weights(g, args.seed, args.positive))}
    if args.positive:
        return _point_doc(g, random_positive_point(g, args.seed))
    return _point_doc(g, random_T_G_point(g, args.seed))


# ---------------------------------------------------------------- dynamics

def _dynamics_pentagram(args):
    polygon = _read_json(args.input) if args.input else PENTAGON
    gens, cur, agree = [], polygon, True
    for _ in range(args.steps):
        nxt = dyn.pentagram_step_via_graph(cur)
        agree = agree and nxt == dyn.pentagram_step(cur)
        gens.append(nxt)
        cur = nxt
    out = dyn.trajectory_json("pentagram", gens)
    out["initial"] = [dyn.point_json(dyn.homogeneous(p)) for p in polygon]
    out["oracle_agrees"] = agree
    if args.svg:
        Path(args.svg).write_text(dyn.polygon_svg([[dyn.homogeneous(p) for p in polygon]] + gens),
                                  encoding="utf-8")
    return out


def _dynamics_laplace(args):
    if args.input:
        window = {tuple(int(t) for t in key.split(",")): v for key, v in _read_json(args.input).items()}
    else:
        window = dyn.random_laplace_window(max(5, 2 * args.steps + 3), args.seed)
    gens, cur, agree = [], window, True
    for _ in range(args.steps):
        nxt = dyn.laplace_darboux_step_via_graph(cur)
        oracle = dyn.laplace_darboux_step(cur)
        if not nxt:
            raise ValidationError("window-too-small", "window is exhausted before the last step", steps=args.steps)
        agree = agree and all(oracle[key] == p for key, p in nxt.items())
        gens.append(nxt)
        cur = {key: p.coords for key, p in nxt.items()}
    out = dyn.trajectory_json("laplace", gens)
    out["initial"] = {dyn._key(key): dyn.point_json(v) for key, v in sorted(window.items())}
    out["oracle_agrees"] = agree
    return out


def _dynamics_instances(system: str, args, sample, via_graph, oracle):
    instances, agree = [], True
    for i in range(args.steps):
        data = sample(args.seed + i)
        got = via_graph(data)
        ok = got == oracle(data)
        agree = agree and ok
        result = {dyn._key(key): dyn.point_json(p) for key, p in got.items()} if isinstance(got, dict) \
            else dyn.point_json(got)
        instances.append({"seed": args.seed + i, "input": {dyn._key(key): dyn.point_json(v) for key, v in data.items()},
                          "output": result, "oracle_agrees": ok})
    return {"system": system, "instances": instances, "oracle_agrees": agree}


def cmd_dynamics(args):
    if args.steps < 0:
        raise ValidationError("bad-steps", "--steps must be nonnegative", steps=args.steps)
    if args.system == "pentagram":
        out = _dynamics_pentagram(args)
    elif args.system == "laplace":
        out = _dynamics_laplace(args)
    elif args.system == "qnet":
        out = _dynamics_instances("qnet", args, dyn.random_qnet_cube, dyn.qnet_gentrify_via_graph,
                                  dyn.qnet_gentrify)
    else:
        out = _dynamics_instances("darboux", args, dyn.random_darboux_data, dyn.darboux_superurban_via_graph,
                                  dyn.darboux_superurban)
    out["seed"] = args.seed
    out["steps"] = args.steps
    if not out["oracle_agrees"]:
        raise InternalError("oracle-mismatch", "via-graph pipeline disagrees with the direct construction",
                            system=args.system)
    return out


# ---------------------------------------------------------------- checks

def cmd_check(args):
    suites = checks.SUITES if args.suite == "all" else [s for s in checks.SUITES if s[1].__name__ == args.suite]
    results = [(n, suite(seed=args.seed)) for n, suite in suites]
    out = {"seed": args.seed, "passed": all(o.passed for _, o in results),
           "suites": [dict(o.to_json(), criterion=n) for n, o in results]}
    return out, (0 if out["passed"] else EXIT_CODES["internal"])


# ---------------------------------------------------------------- parser

def _seed_default() -> int:
    raw = os.environ.get("VECREL_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ValidationError("bad-seed", "VECREL_SEED must be an integer", value=raw)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the result here instead of stdout")
    common.add_argument("--seed", type=int, default=None,
                        help="random seed (default: $VECREL_SEED, else 0); echoed on stderr")

    p = argparse.ArgumentParser(prog="vecrel", description="Exact vector-relation configurations on bipartite graphs.")
    p.add_argument("--version", action="version", version=f"vecrel {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_cmd(name, fn, help_text):
        s = sub.add_parser(name, parents=[common], help=help_text)
        s.add_argument("graph", help="graph JSON file or catalog name")
        s.set_defaults(func=fn)
        return s

    graph_cmd("validate", cmd_validate, "check a graph and summarize it").add_argument(
        "--format", choices=("json", "dot"), default="json")
    graph_cmd("faces", cmd_faces, "list faces")
    graph_cmd("zigzags", cmd_zigzags, "list zigzag paths and the trip permutation")
    graph_cmd("positroid", cmd_positroid, "positroid of a reduced plabic graph")
    graph_cmd("necklace", cmd_necklace, "Grassmann necklaces and strand labels")
    graph_cmd("signs", cmd_signs, "Kasteleyn signs")

    moves = sub.add_parser("moves", help="move scripts")
    msub = moves.add_subparsers(dest="action", required=True)
    ap = msub.add_parser("apply", parents=[common], help="replay a move script on a configuration")
    ap.add_argument("script")
    ap.add_argument("--config", help="configuration JSON (overrides the script's own)")
    ap.set_defaults(func=cmd_moves)

    for name, fn, arg, text in (("faceweights", cmd_faceweights, "config", "face weights of a configuration"),
                                ("restrict", cmd_restrict, "config", "Plücker vector of the boundary vectors"),
                                ("measure", cmd_measure, "weights", "boundary measurement of edge weights"),
                                ("reconstruct", cmd_reconstruct, "point", "configuration with given boundary"),
                                ("recover-weights", cmd_recover_weights, "point",
                                 "positive edge weights measuring a totally positive point")):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument(arg)
        s.set_defaults(func=fn)
        if name == "measure":
            s.add_argument("--method", choices=("matchings", "paths"), default="matchings")

    s = sub.add_parser("sample", parents=[common], help="seeded random input documents")
    s.add_argument("kind", choices=("config", "weights", "point"))
    s.add_argument("graph")
    s.add_argument("--positive", action="store_true", help="positive weights, or a totally positive point")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("dynamics", parents=[common], help="run a dynamical system through its move sequence")
    s.add_argument("system", choices=("pentagram", "laplace", "qnet", "darboux"))
    s.add_argument("--steps", type=int, default=1,
                   help="generations (pentagram, laplace) or independent instances (qnet, darboux)")
    s.add_argument("--input", help="polygon (pentagram) or window (laplace) JSON")
    s.add_argument("--svg", help="also write an SVG drawing (pentagram)")
    s.set_defaults(func=cmd_dynamics)

    s = sub.add_parser("check", parents=[common], help="run the invariant suites")
    s.add_argument("suite", choices=("all",) + tuple(fn.__name__ for _, fn in checks.SUITES))
    s.set_defaults(func=cmd_check)
    return p


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.seed is None:
            args.seed = _seed_default()
        print(f"seed={args.seed}", file=sys.stderr)
        result = args.func(args)
        status = 0
        if isinstance(result, tuple):
            result, status = result
        _emit(result if isinstance(result, str) else dumps(result), args.out)
        return status
    except VecrelError as exc:
        sys.stdout.write(dumps({"error": exc.as_dict()}))
        return EXIT_CODES[exc.kind]
    except (ZeroDivisionError, ArithmeticError) as exc:
        err = DegenerateError("arithmetic", str(exc))
        sys.stdout.write(dumps({"error": err.as_dict()}))
        return EXIT_CODES["degenerate"]
    except Exception as exc:  # last-resort guard so callers always get structured output
        err = InternalError("internal-error", f"{type(exc).__name__}: {exc}")
        sys.stdout.write(dumps({"error": err.as_dict()}))
        return EXIT_CODES["internal"]
