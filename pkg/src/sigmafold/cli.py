"""Command-line front end: generators, validation, classification,
folding, collision sweeps, genus computation and export."""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import io as sio
from .complexes import SigmaComplex
from .errors import SigmafoldError
from .generators import GENERATORS, GeneratorSpec, generate
from .geometry import collapse_extent, collision_sweep, congruence_check, realize
from .star import StarParams, alpha_of_t

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2


def _add_star_args(p: argparse.ArgumentParser):
    p.add_argument("--lambda", dest="lam", type=float, default=1.0 / 3.0,
                   help="fold invariant in (0,1); default 1/3")
    p.add_argument("--r", nargs=4, type=float, default=[1.0, 1.0, 1.0, 1.0],
                   metavar=("R1", "R2", "R3", "R4"), help="star radii")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sigmafold",
                                 description="bifoldable polyhedral complexes")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="construct a named example complex")
    g.add_argument("name", choices=sorted(GENERATORS))
    g.add_argument("--m", type=int, default=1)
    g.add_argument("--n", type=int, default=1)
    g.add_argument("--gen", type=int, default=0, help="fractal generation")
    g.add_argument("--word", default="", help="dos-equis gluing word over {L,R}")
    g.add_argument("--extent", type=int, default=1)
    g.add_argument("--finite", action="store_true", help="do not attach periods")
    _add_star_args(g)
    g.add_argument("-o", "--output", required=True, help="output document path")

    v = sub.add_parser("validate", help="parse a document and check structure")
    v.add_argument("file")

    c = sub.add_parser("classify", help="vertex-type census of a document")
    c.add_argument("file")
    c.add_argument("--extent", type=int, default=1)

    f = sub.add_parser("fold", help="realize at a fold parameter and export OBJ")
    f.add_argument("file")
    f.add_argument("--t", type=float, default=0.5)
    f.add_argument("--extent", type=int, default=1)
    f.add_argument("--obj", required=True, help="output OBJ path")

    s = sub.add_parser("sweep", help="collision sweep across the fold")
    s.add_argument("file")
    s.add_argument("--steps", type=int, default=50)
    s.add_argument("--margin", type=float, default=0.02)
    s.add_argument("--extent", type=int, default=1)

    q = sub.add_parser("genus", help="quotient Euler characteristic and genus")
    q.add_argument("file")

    a = sub.add_parser("animate", help="export fold animation frames")
    a.add_argument("file")
    a.add_argument("--frames", type=int, default=11)
    a.add_argument("--margin", type=float, default=0.02)
    a.add_argument("--extent", type=int, default=1)
    a.add_argument("--dir", required=True, help="output directory")

    srv = sub.add_parser("serve", help="run the design-session HTTP service")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8077)
    srv.add_argument("--static", default=None, help="directory of designer assets to serve at /")
    return ap


def _load(path: str):
    text = Path(path).read_text()
    return sio.parse(text)


def _emit(args, payload: dict, human: str):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(human)


def cmd_generate(args) -> int:
    spec = GeneratorSpec(
        name=args.name,
        m=args.m,
        n=args.n,
        generation=args.gen,
        word=args.word,
        periodic=not args.finite,
        extent=args.extent,
    )
    cx = generate(spec)
    params = StarParams(tuple(args.r), args.lam)
    Path(args.output).write_text(sio.serialize(cx, params))
    _emit(
        args,
        {"facets": len(cx.facets), "periods": [list(g) for g in cx.periods],
         "output": args.output},
        f"wrote {args.output}: {len(cx.facets)} facets, {len(cx.periods)} periods",
    )
    return EXIT_OK


def cmd_validate(args) -> int:
    cx, params = _load(args.file)
    report = cx.is_polyhedron()
    boundary = cx.boundary()
    payload = {
        "facets": len(cx.facets),
        "periods": [list(g) for g in cx.periods],
        "polyhedron": report.ok,
        "bad_edges": [[list(e.tail), e.direction] for e in report.bad_edges],
        "bad_vertices": [list(v) for v in report.bad_vertices],
        "boundary_loops": [len(loop) for loop in boundary],
    }
    ok = report.ok
    _emit(args, payload,
          f"{args.file}: {len(cx.facets)} facets; "
          f"{'polyhedron' if ok else 'NOT a polyhedron'}; "
          f"boundary loops: {[len(l) for l in boundary] or 'none'}")
    return EXIT_OK if ok else EXIT_INVALID


def cmd_classify(args) -> int:
    cx, params = _load(args.file)
    census = cx.vertex_census()
    _emit(args, {"census": census},
          "\n".join(f"{name:14s} {count}" for name, count in sorted(census.items()))
          or "no interior vertices")
    return EXIT_OK


def cmd_fold(args) -> int:
    cx, params = _load(args.file)
    mesh = realize(cx, params, args.t, extent=args.extent)
    Path(args.obj).write_text(sio.export_obj(mesh))
    alpha = alpha_of_t(params.lam, args.t)
    _emit(args,
          {"t": args.t, "alpha_degrees": math.degrees(alpha),
           "vertices": len(mesh.vertices), "quads": len(mesh.quads), "output": args.obj},
          f"wrote {args.obj}: t={args.t} (alpha={math.degrees(alpha):.2f} deg), "
          f"{len(mesh.vertices)} vertices, {len(mesh.quads)} quads")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cx, params = _load(args.file)
    report = collision_sweep(
        cx, params, steps=args.steps,
        t_range=(args.margin, 1.0 - args.margin), extent=args.extent,
    )
    payload = {
        "steps": report.steps,
        "t_range": list(report.t_range),
        "collisions": [
            {"facet_a": [list(ev.facet_a.anchor), list(ev.facet_a.ftype)],
             "facet_b": [list(ev.facet_b.anchor), list(ev.facet_b.ftype)],
             "t_lo": ev.t_lo, "t_hi": ev.t_hi}
            for ev in report.events
        ],
    }
    human = (f"{len(report.events)} colliding pair(s) over t in {report.t_range}"
             if report.events else f"no collisions over t in {report.t_range}")
    _emit(args, payload, human)
    return EXIT_OK if not report.events else EXIT_INVALID


def cmd_genus(args) -> int:
    cx, params = _load(args.file)
    if not cx.periods:
        print("genus requires a periodic complex", file=sys.stderr)
        return EXIT_INVALID
    sub = cx.orientation_preserving_sublattice()
    q = cx.quotient_euler(sub, params.lam)
    check = abs(q.curvature_sum - 2 * math.pi * q.chi)
    payload = {
        "V": q.vertices, "E": q.edges, "F": q.faces, "chi": q.chi,
        "genus": q.genus, "curvature_sum": q.curvature_sum,
        "gauss_bonnet_residual": check,
        "sublattice": [list(g) for g in sub.generators],
    }
    _emit(args, payload,
          f"V={q.vertices} E={q.edges} F={q.faces} chi={q.chi} genus={q.genus} "
          f"sum(kappa)={q.curvature_sum:.6f} (2*pi*chi residual {check:.2e})")
    return EXIT_OK


def cmd_animate(args) -> int:
    cx, params = _load(args.file)
    manifest = sio.export_animation(
        cx, params, args.frames, args.dir, margin=args.margin, extent=args.extent
    )
    _emit(args, {"frames": manifest},
          f"wrote {len(manifest)} frames to {args.dir}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(static_dir=args.static)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


_COMMANDS = {
    "generate": cmd_generate,
    "validate": cmd_validate,
    "classify": cmd_classify,
    "fold": cmd_fold,
    "sweep": cmd_sweep,
    "genus": cmd_genus,
    "animate": cmd_animate,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except SigmafoldError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
