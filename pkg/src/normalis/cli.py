"""Command-line front end: ``normalis {generate,analyze,verify,search}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from pathlib import Path

from scipy.spatial import ConvexHull

from . import constructions as C
from .double_normal import Mode, diameter_graph, double_normal_graph, red_blue_decomposition
from .exceptions import BoundViolation, NormalisError, WrongSpace
from .geometry import Space
from .io import dumps_pointset, graph_json, read_pointset, to_off, to_svg
from .spherical import (
    crossing_classes,
    delaunay_tiling,
    hull_faces,
    sphere_double_normals,
    strict_gabriel,
    weak_gabriel,
)
from .verify import check_bound, random_search

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_SPACE = 0, 1, 2, 3

GENERATORS = (
    "regular-polygon",
    "odd-extremal",
    "symmetric-circle",
    "cube",
    "rhombicuboctahedron",
    "five-point",
    "layered",
    "near-extremal",
    "fig2",
)
GRAPHS = ("dn", "dn-strict", "diameter", "gabriel", "gabriel-strict", "delaunay")
SPHERE_ONLY = {"gabriel", "gabriel-strict", "delaunay"}


class _Usage(NormalisError):
    pass


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _require(value, flag, kind):
    if value is None:
        raise _Usage(f"{kind} needs {flag}")
    return value


def cmd_generate(args) -> int:
    kind = args.kind
    meta = {"kind": kind}
    if kind == "regular-polygon":
        V = C.regular_polygon(_require(args.n, "--n", kind))
        meta["n"] = args.n
    elif kind == "odd-extremal":
        V = C.planar_odd_extremal(_require(args.n, "--n", kind))
        meta["n"] = args.n
    elif kind == "symmetric-circle":
        V = C.symmetric_circle_set(_require(args.angles, "--angles", kind))
        meta["angles_deg"] = args.angles
    elif kind == "cube":
        V = C.cube_vertices()
    elif kind == "rhombicuboctahedron":
        V = C.rhombicuboctahedron_vertices()
    elif kind == "five-point":
        V = C.five_point_strict(args.offset_deg)
        meta["offset_deg"] = args.offset_deg
    elif kind == "layered":
        p = C.LayeredParams(_require(args.k, "--k", kind), _require(args.m, "--m", kind), args.c)
        V = C.layered_construction(p)
        meta.update(k=p.k, m=p.m)
    elif kind == "near-extremal":
        V = C.near_extremal(_require(args.n, "--n", kind))
        p = C.near_extremal_params(args.n)
        meta.update(n=args.n, k=p.k, m=p.m, layered_points=p.n_points)
    else:
        V = C.seven_point_example()
        meta["labels"] = C.SEVEN_POINT_LABELS
    _emit(dumps_pointset(V, meta), args.out)
    return EXIT_OK


def _analyze_graph(V, kind):
    extra = {}
    if kind in SPHERE_ONLY and V.space is not Space.SPHERE:
        raise WrongSpace(f"graph {kind!r} needs sphere points, got {V.space.value}")
    if kind in ("dn", "dn-strict"):
        mode = Mode.WEAK if kind == "dn" else Mode.STRICT
        if V.space is Space.SPHERE:
            lift = sphere_double_normals(V, mode)
            G = lift.graph
            extra["lift"] = lift.to_dict()
        else:
            G = double_normal_graph(V, mode)
        if V.space is Space.PLANE and mode is Mode.WEAK and V.n >= 2:
            rep = red_blue_decomposition(V, G)
            G = G.with_edges(G.edges, colors=dict(rep.colors))
            extra["red_edges"] = len(rep.red_edges)
            extra["blue_edges"] = len(rep.blue_edges)
            extra["claims"] = rep.claim_results
    elif kind == "diameter":
        G = diameter_graph(V)
    elif kind in ("gabriel", "gabriel-strict"):
        G = weak_gabriel(V) if kind == "gabriel" else strict_gabriel(V)
        if kind == "gabriel":
            rep = crossing_classes(G, V)
            extra["g_census"] = {str(k): v for k, v in rep.g_census.items()}
    else:
        T = delaunay_tiling(V)
        G = T.graph()
        extra.update(T.to_dict())
        extra.pop("edges")
    return G, extra


def cmd_analyze(args) -> int:
    V, _ = read_pointset(args.input)
    G, extra = _analyze_graph(V, args.graph)
    if args.format == "json":
        text = graph_json(V, G, args.graph, extra)
    elif args.format == "svg":
        text = to_svg(V, G)
    else:
        if V.space is Space.SPHERE:
            faces = delaunay_tiling(V).faces
        elif V.space is Space.SPACE3:
            faces = [f.vertices for f in hull_faces(V)]
        else:
            faces = [tuple(int(v) for v in ConvexHull(V.points).vertices)] if V.n >= 3 else []
        text = to_off(V, faces, comment=f"{args.graph}: {G.n_edges} edges")
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite:
        from .suite import run_suite

        results = run_suite(quick=args.quick)
        for r in results:
            print(r.line())
        if args.json:
            print(json.dumps([r.to_dict() for r in results], indent=2, sort_keys=True))
        return EXIT_OK if all(r.passed for r in results) else EXIT_VIOLATION
    if args.input is None:
        raise _Usage("verify needs an input file or --suite")
    V, _ = read_pointset(args.input)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rep = check_bound(V, args.theorem)
    print(json.dumps(rep.to_dict(), indent=2, sort_keys=True) if args.json else rep.summary())
    return EXIT_OK if rep.passed else EXIT_VIOLATION


def cmd_search(args) -> int:
    try:
        st = random_search(args.space, args.n, args.budget, args.seed)
    except BoundViolation as exc:
        print(f"bound violation: {exc}", file=sys.stderr)
        if args.out:
            Path(args.out).write_text(json.dumps(exc.witness, indent=2, sort_keys=True) + "\n")
        return EXIT_VIOLATION
    from .geometry import PointSet

    V = PointSet.from_array(st.best_points, Space(args.space))
    if args.out:
        Path(args.out).write_text(dumps_pointset(V, {"search": st.to_dict()}))
    print(json.dumps(st.to_dict(), sort_keys=True) if args.json else f"best N = {st.best_n} after {st.iterations} iterations")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="normalis", description="Double-normal pairs in the plane and on the sphere.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a named point configuration")
    g.add_argument("kind", choices=GENERATORS)
    g.add_argument("--n", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--m", type=int)
    g.add_argument("--c", type=float)
    g.add_argument("--angles", type=float, nargs="+", help="degrees")
    g.add_argument("--offset-deg", type=float, default=5.0)
    g.add_argument("-o", "--out")
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", help="compute a graph on a point-set file")
    a.add_argument("input")
    a.add_argument("--graph", choices=GRAPHS, default="dn")
    a.add_argument("--format", choices=("json", "off", "svg"), default="json")
    a.add_argument("-o", "--out")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="check a bound, or run the acceptance battery")
    v.add_argument("input", nargs="?")
    v.add_argument("--theorem", choices=("t1", "t1s", "t2", "t3", "gabriel"), default="t1")
    v.add_argument("--suite", action="store_true")
    v.add_argument("--quick", action="store_true", help="smaller random sweeps in --suite")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="annealing search for many double normals")
    s.add_argument("--space", choices=("plane", "sphere"), required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--budget", type=int, default=20000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--json", action="store_true")
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_search)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except WrongSpace as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPACE
    except BoundViolation as exc:
        print(f"bound violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (NormalisError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
