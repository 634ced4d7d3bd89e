"""Command-line front end.

Every metric, verifier, and map operation is reachable as a subcommand
with machine-readable output.  Exit codes: 0 = success with no violations,
1 = a verification found violations (or a witness), 2 = usage or domain
errors.  Identical invocations produce byte-identical output; timing is
only emitted when --timing is passed.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import formats
from .base_groups import (
    bs_delta,
    lamp_delta,
    sol_delta,
    sol_invariant_form,
)
from .dl_graph import (
    ball,
    ball_edges,
    bfs_distance,
    dl_distance,
    export_dot,
    identity_vertex,
)
from .errors import DecompositionError, DomainError, InternalError, ParseError
from .maps import (
    BlockPerm,
    apply,
    bilip_constants,
    delta_distortion,
    induced_vertex_map,
    is_generalized_affine,
    isometry_search,
    parallelogram_preserving,
    qi_distortion,
)
from .quads import (
    BSFamily,
    GeneratorSet,
    LampFamily,
    Quad,
    QuadParams,
    SolFamily,
    calibrate_schwartz,
    classify,
    jsonable,
    lamp_sigma_obstruction,
    sigma_admissible,
    telescope_decompose,
    telescoping_identity_holds,
    verify_lamp_claim,
    verify_schwartz,
    verify_taback,
)

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2


def _family(args):
    name = getattr(args, "family", "lamp")
    n = getattr(args, "n", 2)
    if name == "lamp":
        return LampFamily(n)
    if name == "bs":
        return BSFamily(n)
    if name == "sol":
        if not getattr(args, "matrix", None):
            raise DomainError("--matrix a,b,c,d is required for the sol family")
        return SolFamily(sol_invariant_form(formats.parse_matrix(args.matrix)))
    raise DomainError(f"unknown family {name!r}")


def _parse_point(family, text: str):
    if isinstance(family, LampFamily):
        return formats.parse_config(text, family.n)
    if isinstance(family, BSFamily):
        return formats.parse_bs(text, family.n)
    return formats.parse_vector(text)


def _parse_scalar(text: str):
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"expected an exact number, got {text!r}") from None
    return int(value) if value.denominator == 1 else value


def emit_report(payload, fmt: str, out) -> None:
    """Serialize a jsonable payload with a stable field order."""
    if fmt == "json":
        out.write(json.dumps(payload, indent=2, sort_keys=False))
        out.write("\n")
    elif fmt == "text":
        for key, value in payload.items():
            out.write(f"{key}: {json.dumps(value)}\n")
    elif fmt == "csv":
        rows = payload.get("rows")
        if rows is None:
            raise DomainError("this command has no tabular output; use json or text")
        header = payload["header"]
        out.write(",".join(header) + "\n")
        for row in rows:
            out.write(",".join(str(x) for x in row) + "\n")
    else:
        raise DomainError(f"unsupported format {fmt!r}")


def _report_out(args, report):
    payload = report.to_jsonable(include_timing=args.timing)
    return payload, (EXIT_VIOLATIONS if report.violations else EXIT_OK)


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------

def cmd_delta(args, out):
    fam = _family(args)
    p = _parse_point(fam, args.p)
    q = _parse_point(fam, args.q)
    if isinstance(fam, LampFamily):
        value, gap = lamp_delta(p, q)
        payload = {"delta": value, "gap": gap}
    elif isinstance(fam, BSFamily):
        payload = {"delta": bs_delta(p, q)}
    else:
        payload = {"delta": sol_delta(fam.ctx, p, q), "form": list(fam.ctx.form)}
    if args.format == "text":
        out.write(f"{payload['delta']}\n")
        return EXIT_OK
    emit_report(payload, args.format, out)
    return EXIT_OK


def cmd_dist(args, out):
    n = args.n
    if args.u is not None and args.v is not None:
        u = formats.parse_vertex(args.u, n)
        v = formats.parse_vertex(args.v, n)
        closed = dl_distance(u, v)
        if args.format == "text":
            out.write(f"{closed}\n")
            return EXIT_OK
        payload = {"u": formats.format_vertex(u), "v": formats.format_vertex(v),
                   "closed_form": closed}
        if args.check_bfs:
            payload["bfs"] = bfs_distance(u, v, closed + 1)
        emit_report(payload, args.format, out)
        return EXIT_OK
    if args.radius is None:
        raise DomainError("dist needs either --u and --v, or --radius for a table")
    verts = sorted(ball(identity_vertex(n), args.radius),
                   key=lambda w: (w.cursor, w.config.entries))
    rows = []
    for i, u in enumerate(verts):
        for v in verts[i + 1:]:
            closed = dl_distance(u, v)
            rows.append((formats.format_vertex(u), formats.format_vertex(v),
                         closed, bfs_distance(u, v, closed + 1)))
    payload = {"header": ["u", "v", "closed_form", "bfs"], "rows": rows}
    emit_report(payload, "csv" if args.format == "text" else args.format, out)
    return EXIT_OK


def cmd_ball(args, out):
    n = args.n
    center = formats.parse_vertex(args.center, n) if args.center else identity_vertex(n)
    verts = sorted(ball(center, args.radius), key=lambda w: (w.cursor, w.config.entries))
    payload = {"center": formats.format_vertex(center), "radius": args.radius,
               "size": len(verts),
               "vertices": [formats.format_vertex(v) for v in verts]}
    if args.format == "csv":
        payload = {"header": ["vertex"], "rows": [(formats.format_vertex(v),) for v in verts]}
    emit_report(payload, args.format if args.format != "text" else "json", out)
    return EXIT_OK


def cmd_export_dot(args, out):
    n = args.n
    center = formats.parse_vertex(args.center, n) if args.center else identity_vertex(n)
    verts = ball(center, args.radius)
    out.write(export_dot(verts, ball_edges(verts), coset_colors=args.coset_colors))
    return EXIT_OK


def cmd_quad_classify(args, out):
    fam = _family(args)
    pts = [p.strip() for p in args.points.split(";")]
    if len(pts) != 4:
        raise DomainError("--points needs 'p1;p2;p3;p4'")
    p1, p2, p3, p4 = (_parse_point(fam, p) for p in pts)
    quad = Quad(fam, p1, p2, p3, p4)
    params = QuadParams(_parse_scalar(args.eps), _parse_scalar(args.M))
    res = classify(quad, params)
    payload = {"classification": res.kind.value}
    if res.reason:
        payload["reason"] = res.reason
    if len(set(map(fam.sort_key, quad.points))) == 4:
        sides = ((p1, p2), (p2, p3), (p3, p4), (p4, p1))
        payload["side_deltas"] = [str(fam.delta(x, y)) for x, y in sides]
        payload["diagonal_deltas"] = [str(fam.delta(p1, p3)), str(fam.delta(p2, p4))]
    emit_report(payload, args.format, out)
    return EXIT_OK


def cmd_verify_lamp_claim(args, out):
    report = verify_lamp_claim(args.S, args.window_width, n=args.n,
                               hypotheses="relaxed" if args.relaxed else "full",
                               chunks=args.chunks)
    payload, code = _report_out(args, report)
    emit_report(payload, args.format, out)
    return code


def cmd_verify_taback(args, out):
    report = verify_taback(args.n, args.eps, args.M, args.bound,
                           (args.kmin, args.kmax), chunks=args.chunks)
    payload, code = _report_out(args, report)
    emit_report(payload, args.format, out)
    return code


def cmd_verify_schwartz(args, out):
    ctx = sol_invariant_form(formats.parse_matrix(args.matrix))
    if args.calibrate:
        report = calibrate_schwartz(ctx, args.eps, args.box)
    else:
        if args.M is None:
            raise DomainError("verify schwartz needs --M unless --calibrate is given")
        report = verify_schwartz(ctx, args.eps, args.M, args.box, chunks=args.chunks)
    payload, code = _report_out(args, report)
    emit_report(payload, args.format, out)
    return code


def cmd_telescope(args, out):
    fam = _family(args)
    pts = [p.strip() for p in args.quad.split(";")]
    if len(pts) != 4:
        raise DomainError("--quad needs 'p1;p2;p3;p4'")
    quad = Quad(fam, *(_parse_point(fam, p) for p in pts))
    sigma = GeneratorSet(fam, tuple(_parse_point(fam, s.strip())
                                    for s in args.sigma.split(";")))
    chain = telescope_decompose(quad, sigma)
    payload = {
        "steps": len(chain),
        "chain": [[fam.fmt(p) for p in (q.p1, q.p2, q.p3, q.p4)] for q in chain],
        "corner_relations_exact": all(q.corner_holds() for q in chain),
        "telescoping_identity": telescoping_identity_holds(quad, chain),
    }
    emit_report(payload, args.format, out)
    return EXIT_OK


def cmd_sigma_check(args, out):
    fam = _family(args)
    sigma = GeneratorSet(fam, tuple(_parse_point(fam, s.strip())
                                    for s in args.sigma.split(";")))
    params = QuadParams(_parse_scalar(args.eps), _parse_scalar(args.M))
    result = sigma_admissible(sigma, params)
    if result is True:
        emit_report({"admissible": True}, args.format, out)
        return EXIT_OK
    v, w = result
    emit_report({"admissible": False, "witness": [fam.fmt(v), fam.fmt(w)]}, args.format, out)
    return EXIT_VIOLATIONS


def cmd_sigma_obstruct(args, out):
    fam = LampFamily(args.n)
    sigma = GeneratorSet(fam, tuple(formats.parse_config(s.strip(), args.n)
                                    for s in args.sigma.split(";")))
    params = QuadParams(_parse_scalar(args.eps), _parse_scalar(args.M))
    v, w = lamp_sigma_obstruction(sigma, params, formats.parse_window(args.window))
    emit_report({"witness": [fam.fmt(v), fam.fmt(w)]}, args.format, out)
    return EXIT_VIOLATIONS


def cmd_map_apply(args, out):
    m = formats.parse_map(args.map, args.n)
    x = formats.parse_config(args.x, args.n)
    y = apply(m, x)
    if args.format == "text":
        out.write(formats.format_config(y) + "\n")
        return EXIT_OK
    emit_report({"map": formats.format_map(m), "input": formats.format_config(x),
                 "output": formats.format_config(y)}, args.format, out)
    return EXIT_OK


def cmd_map_bilip(args, out):
    m = formats.parse_map(args.map, args.n)
    if not isinstance(m, BlockPerm):
        raise DomainError("bilip constants are measured for blockperm maps")
    rep = bilip_constants(m, args.padding)
    emit_report({"K_lower": str(rep.K_lower), "K_upper": str(rep.K_upper),
                 "exhaustive": rep.exhaustive, "window": list(rep.window)},
                args.format, out)
    return EXIT_OK


def cmd_map_ppq(args, out):
    m = formats.parse_map(args.map, args.n)
    window = formats.parse_window(args.window)
    result = parallelogram_preserving(m, window)
    strict_affine = is_generalized_affine(m, window)
    affine_up_to_inv = strict_affine or is_generalized_affine(m, window, up_to_inversion=True)
    if result is True:
        emit_report({"parallelogram_preserving": True,
                     "generalized_affine": strict_affine,
                     "generalized_affine_up_to_inversion": affine_up_to_inv},
                    args.format, out)
        return EXIT_OK
    a, v, w = result
    lhs = apply(m, a + v) + apply(m, a + w)
    rhs = apply(m, a + v + w) + apply(m, a)
    emit_report({
        "parallelogram_preserving": False,
        "generalized_affine": strict_affine,
        "generalized_affine_up_to_inversion": affine_up_to_inv,
        "witness": {"a": formats.format_config(a), "v": formats.format_config(v),
                    "w": formats.format_config(w)},
        "psi(a+v)+psi(a+w)": formats.format_config(lhs),
        "psi(a+v+w)+psi(a)": formats.format_config(rhs),
    }, args.format, out)
    return EXIT_VIOLATIONS


def cmd_map_delta_distortion(args, out):
    m = formats.parse_map(args.map, args.n)
    if not isinstance(m, BlockPerm):
        raise DomainError("delta distortion is measured for blockperm maps")
    rep = delta_distortion(m, formats.parse_window(args.window))
    emit_report({
        "min_ratio": str(rep.min_ratio),
        "max_ratio": str(rep.max_ratio),
        "K": str(rep.K),
        "bounds": [str(1 / (rep.K * rep.K)), str(rep.K * rep.K)],
        "min_pair": [formats.format_config(p) for p in rep.min_pair],
        "max_pair": [formats.format_config(p) for p in rep.max_pair],
    }, args.format, out)
    return EXIT_OK


def cmd_map_qi_distortion(args, out):
    m = formats.parse_map(args.map, args.n)
    vm = induced_vertex_map(m)
    value = qi_distortion(vm, args.radius, n=args.n)
    emit_report({"radius": args.radius, "additive_distortion": value}, args.format, out)
    return EXIT_OK


def cmd_isometry_search(args, out):
    maps_found = isometry_search(
        args.radius,
        height_preserving=not args.no_height_preserving,
        orientation_preserving=not args.no_orientation_preserving,
        fix_identity_coset=not args.no_fix_identity_coset,
        pattern_preserving=not args.no_pattern_preserving,
        n=args.n,
        max_results=args.max_results,
    )
    payload = {
        "radius": args.radius,
        "maps_found": len(maps_found),
        "all_identity": all(all(v == w for v, w in m.items()) for m in maps_found),
    }
    if args.list_maps:
        payload["maps"] = [
            {formats.format_vertex(v): formats.format_vertex(w) for v, w in sorted(
                m.items(), key=lambda kv: (kv[0].cursor, kv[0].config.entries))}
            for m in maps_found
        ]
    emit_report(payload, args.format, out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser wiring
# ---------------------------------------------------------------------------

def _add_common(p, family=False, matrix=False):
    p.add_argument("--n", type=int, default=2, help="modulus / base (default 2)")
    p.add_argument("--format", choices=["json", "csv", "dot", "text"], default="json")
    p.add_argument("--seed", type=int, default=None,
                   help="accepted for interface stability; every enumeration here is exhaustive")
    p.add_argument("--chunks", type=int, default=1,
                   help="partition enumeration into this many deterministic chunks")
    p.add_argument("--timing", action="store_true", help="include elapsed_ms in reports")
    p.add_argument("--out", default=None, help="write output to FILE instead of stdout")
    if family:
        p.add_argument("--family", choices=["lamp", "bs", "sol"], default="lamp")
    if matrix or family:
        p.add_argument("--matrix", default=None, help="SL(2,Z) matrix 'a,b,c,d' (sol family)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lampgeo",
        description="Exact lamplighter / Baumslag-Solitar / SOL metric machinery "
                    "and brute-force verifiers.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("delta", help="boundary product delta(p, q)")
    _add_common(p, family=True)
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("dist", help="DL(n,n) distance (closed form; --radius for a CSV table)")
    _add_common(p)
    p.add_argument("--u")
    p.add_argument("--v")
    p.add_argument("--radius", type=int, default=None)
    p.add_argument("--check-bfs", action="store_true")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("ball", help="enumerate a metric ball")
    _add_common(p)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--center", default=None)
    p.set_defaults(func=cmd_ball)

    p = sub.add_parser("export-dot", help="DOT graph of a metric ball")
    _add_common(p)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--center", default=None)
    p.add_argument("--coset-colors", action="store_true")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("quad", help="quadrilateral operations")
    quad_sub = p.add_subparsers(dest="quad_command", required=True)
    pc = quad_sub.add_parser("classify", help="classify four points against (eps, M)")
    _add_common(pc, family=True)
    pc.add_argument("--points", required=True, help="'p1;p2;p3;p4'")
    pc.add_argument("--eps", required=True)
    pc.add_argument("--M", required=True)
    pc.set_defaults(func=cmd_quad_classify)

    p = sub.add_parser("verify", help="exhaustive desk-scale verifiers")
    ver_sub = p.add_subparsers(dest="verify_command", required=True)
    pv = ver_sub.add_parser("lamp-claim", help="large lamplighter quadrilaterals are parallelograms")
    _add_common(pv)
    pv.add_argument("--S", type=int, required=True)
    pv.add_argument("--window", dest="window_width", type=int, required=True)
    pv.add_argument("--relaxed", action="store_true",
                    help="only the two printed side hypotheses (admits witnesses)")
    pv.set_defaults(func=cmd_verify_lamp_claim)
    pv = ver_sub.add_parser("taback", help="Z[1/n] quadrilaterals are parallelograms")
    _add_common(pv)
    pv.add_argument("--eps", type=int, required=True)
    pv.add_argument("--M", type=int, required=True)
    pv.add_argument("--bound", type=int, required=True, help="numerator bound")
    pv.add_argument("--kmin", type=int, required=True)
    pv.add_argument("--kmax", type=int, required=True)
    pv.set_defaults(func=cmd_verify_taback)
    pv = ver_sub.add_parser("schwartz", help="SOL lattice quadrilaterals are parallelograms")
    _add_common(pv)
    pv.add_argument("--matrix", required=True)
    pv.add_argument("--eps", type=int, required=True)
    pv.add_argument("--M", type=int, default=None)
    pv.add_argument("--box", type=int, required=True)
    pv.add_argument("--calibrate", action="store_true", help="find and verify at M*")
    pv.set_defaults(func=cmd_verify_schwartz)

    p = sub.add_parser("telescope", help="decompose a parallelogram over a generator set")
    _add_common(p, family=True)
    p.add_argument("--quad", required=True, help="'p1;p2;p3;p4'")
    p.add_argument("--sigma", required=True, help="';'-separated generator points")
    p.set_defaults(func=cmd_telescope)

    p = sub.add_parser("sigma", help="generator-set checks")
    sig_sub = p.add_subparsers(dest="sigma_command", required=True)
    ps = sig_sub.add_parser("check", help="do all pairs span (eps, M)-parallelograms?")
    _add_common(ps, family=True)
    ps.add_argument("--sigma", required=True)
    ps.add_argument("--eps", required=True)
    ps.add_argument("--M", required=True)
    ps.set_defaults(func=cmd_sigma_check)
    ps = sig_sub.add_parser("obstruct", help="find the failing pair of a generating set")
    _add_common(ps)
    ps.add_argument("--sigma", required=True)
    ps.add_argument("--eps", required=True)
    ps.add_argument("--M", required=True)
    ps.add_argument("--window", required=True)
    ps.set_defaults(func=cmd_sigma_obstruct)

    p = sub.add_parser("map", help="base-group map operations")
    map_sub = p.add_subparsers(dest="map_command", required=True)
    pm = map_sub.add_parser("apply", help="evaluate a map on a configuration")
    _add_common(pm)
    pm.add_argument("--map", required=True)
    pm.add_argument("--x", required=True)
    pm.set_defaults(func=cmd_map_apply)
    pm = map_sub.add_parser("bilip", help="exhaustive boundary biLipschitz constants")
    _add_common(pm)
    pm.add_argument("--map", required=True)
    pm.add_argument("--padding", type=int, default=None)
    pm.set_defaults(func=cmd_map_bilip)
    pm = map_sub.add_parser("ppq", help="parallelogram-preservation test with witness")
    _add_common(pm)
    pm.add_argument("--map", required=True)
    pm.add_argument("--window", required=True)
    pm.set_defaults(func=cmd_map_ppq)
    pm = map_sub.add_parser("delta-distortion", help="delta ratio scan against [1/K^2, K^2]")
    _add_common(pm)
    pm.add_argument("--map", required=True)
    pm.add_argument("--window", required=True)
    pm.set_defaults(func=cmd_map_delta_distortion)
    pm = map_sub.add_parser("qi-distortion", help="additive distortion of the induced vertex map")
    _add_common(pm)
    pm.add_argument("--map", required=True)
    pm.add_argument("--radius", type=int, required=True)
    pm.set_defaults(func=cmd_map_qi_distortion)

    p = sub.add_parser("isometry-search", help="pattern-preserving ball isometry enumeration")
    _add_common(p)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--no-height-preserving", action="store_true")
    p.add_argument("--no-orientation-preserving", action="store_true")
    p.add_argument("--no-fix-identity-coset", action="store_true")
    p.add_argument("--no-pattern-preserving", action="store_true")
    p.add_argument("--max-results", type=int, default=None)
    p.add_argument("--list-maps", action="store_true")
    p.set_defaults(func=cmd_isometry_search)

    return ap


def run(argv=None, stdout=None) -> int:
    """Entry point returning the exit code; output goes to stdout or --out."""
    stdout = stdout if stdout is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    defaulted_padding = getattr(args, "padding", None)
    try:
        if hasattr(args, "padding") and defaulted_padding is None:
            m = formats.parse_map(args.map, args.n)
            args.padding = m.m if isinstance(m, BlockPerm) else 0
        if args.out:
            with open(args.out, "w") as fh:
                return args.func(args, fh)
        return args.func(args, stdout)
    except (ParseError, DomainError, DecompositionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InternalError as exc:
        print(f"internal error (library bug): {exc}", file=sys.stderr)
        return EXIT_VIOLATIONS


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
