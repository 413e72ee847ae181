"""Command-line front end.

Every subcommand writes one JSON document (CSV for ``verify-theorems``) to
standard output. Exit codes: 0 on success, 1 on usage errors, 2 when a
result is indeterminate, a search fails to converge or a check fails.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time

import numpy as np

from . import __version__
from . import polytopes as P
from .constancy import (INDETERMINATE, max_constancy_bound, proven_constancy_set,
                        slice_constancy_even, spread_on_sphere)
from .errors import DegenerateSpectrum, NoConvergence, PowerDistError, UnsupportedFamily
from .extrema import find_extrema, predict_regime
from .moments import PlanarConfig, conjecture_search, constancy_even_on_circle, power_sums
from .oracle import grid_extrema_circle, grid_extrema_sphere
from .polytopes import PolytopeFamily, generate
from .powersum import PowerSumParams, SphereSpec, evaluate
from .verify import FAIL, SUITES, run_suite

EXIT_OK, EXIT_USAGE, EXIT_FLAGGED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _add_family(p):
    p.add_argument("--family", required=True, help="ngon, simplex, cross-polytope, hypercube, "
                   "icosahedron or dodecahedron")
    p.add_argument("--n", type=int, help="vertex count of an ngon")
    p.add_argument("--dim", type=int, help="dimension of a simplex, cross-polytope or hypercube")
    p.add_argument("--circumradius", type=float, default=1.0)


def _add_sphere(p):
    p.add_argument("--sphere-radius", type=float, default=None,
                   help="radius of the concentric sphere (default: circumradius)")


def _add_power(p, lam_required=True):
    p.add_argument("--lambda", dest="lam", type=float, required=lam_required)
    p.add_argument("--h", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="powerdist", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: $POWERSUM_THREADS or 1)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="vertex coordinates of a polytope")
    _add_family(p)

    p = sub.add_parser("eval", help="evaluate the powered sum at a point")
    _add_family(p)
    _add_power(p)
    p.add_argument("--point", type=_floats, required=True, help="comma-separated coordinates")
    p.add_argument("--emit-curve", type=int, default=0, metavar="N",
                   help="also dump N (angle, value) pairs along a great circle through the point")

    p = sub.add_parser("constancy", help="constancy scan over even exponents")
    _add_family(p)
    _add_sphere(p)
    p.add_argument("--lambda-max", type=int, default=20)
    p.add_argument("--h", type=float, default=0.0)
    p.add_argument("--probes", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)

    for name, hlp in (("extrema", "multistart search for the max and min"),
                      ("oracle", "brute-force grid extrema")):
        p = sub.add_parser(name, help=hlp)
        _add_family(p)
        _add_sphere(p)
        _add_power(p)
        p.add_argument("--seed", type=int, default=0)
        if name == "extrema":
            p.add_argument("--starts", type=int, default=16)
        else:
            p.add_argument("--grid-size", type=int, default=100_000)

    p = sub.add_parser("moments", help="power sums and regularity of planar points")
    p.add_argument("--points", required=True,
                   help="JSON list of [x, y] pairs, inline or a path to a JSON file")
    p.add_argument("--center", type=_floats, default=[0.0, 0.0])
    p.add_argument("--circle-radius", type=float, default=1.0)
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--kset", type=_floats, default=None,
                   help="exponents k to test for constancy of sum |P a_i|^(2k)")

    p = sub.add_parser("conjecture", help="search for non-regular constant configurations")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--iterations", type=int, default=20_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-penalty", action="store_true",
                   help="do not push the search away from regular polygons")

    p = sub.add_parser("verify-theorems", help="run the verification matrix, CSV output")
    p.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    p.add_argument("--seed", type=int, default=0)
    return parser


def _family(args) -> PolytopeFamily:
    kind = P._ALIASES.get(args.family.lower())
    if kind is None:
        raise UsageError(f"unknown family {args.family!r}")
    if kind == P.NGON:
        if args.n is None:
            raise UsageError("--n is required for an ngon")
        return PolytopeFamily(kind, args.n)
    if kind in (P.ICOSAHEDRON, P.DODECAHEDRON):
        return PolytopeFamily(kind)
    if args.dim is None:
        raise UsageError(f"--dim is required for a {kind}")
    return PolytopeFamily(kind, args.dim)


def _sphere(args, vs) -> SphereSpec:
    R = vs.circumradius if args.sphere_radius is None else args.sphere_radius
    return SphereSpec.concentric(vs, R)


def _manifest(args, seeds, start) -> dict:
    flags = {("lambda" if k == "lam" else k): v for k, v in sorted(vars(args).items())
             if k not in ("threads", "command")}
    return {"command": args.command, "flags": flags, "seeds": [int(s) for s in seeds],
            "version": __version__, "durationSeconds": round(time.perf_counter() - start, 6)}


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def _emit(payload: dict, out) -> None:
    json.dump(_clean(payload), out, sort_keys=True, indent=2, allow_nan=False)
    out.write("\n")


def _cmd_gen(args, out, threads):
    vs = generate(_family(args), args.circumradius)
    return {"family": str(vs.family), "dim": vs.dim, "circumradius": vs.circumradius,
            "center": vs.center.tolist(), "vertices": vs.vertices.tolist()}, [], EXIT_OK


def _great_circle(point, count):
    m = np.asarray(point, dtype=float)
    r = np.linalg.norm(m)
    u = m / r
    axis = np.eye(m.size)[int(np.argmin(np.abs(u)))]
    v = axis - (axis @ u) * u
    v /= np.linalg.norm(v)
    t = 2.0 * math.pi * np.arange(count) / count
    return t, r * (np.cos(t)[:, None] * u + np.sin(t)[:, None] * v)


def _cmd_eval(args, out, threads):
    vs = generate(_family(args), args.circumradius)
    p = PowerSumParams(args.lam, args.h)
    payload = {"value": evaluate(vs, args.point, p)}
    if args.emit_curve:
        if args.emit_curve < 2:
            raise UsageError("--emit-curve needs at least 2 points")
        if not np.any(args.point):
            raise UsageError("--emit-curve needs a point away from the center")
        t, pts = _great_circle(args.point, args.emit_curve)
        payload["curve"] = [[float(a), evaluate(vs, q, p)] for a, q in zip(t, pts)]
    return payload, [], EXIT_OK


def _cmd_constancy(args, out, threads):
    vs = generate(_family(args), args.circumradius)
    sphere = _sphere(args, vs)
    proven = set(proven_constancy_set(vs.family)) if sphere.is_concentric_with(vs) else set()
    reports, detected, flagged = [], [], False
    if args.lambda_max < 2:
        raise UsageError("--lambda-max must be at least 2")
    for lam in range(2, args.lambda_max + 1, 2):
        rep = spread_on_sphere(vs, sphere, PowerSumParams(lam, args.h), args.probes, args.seed,
                               threads)
        exact = slice_constancy_even(vs, sphere, lam, h=args.h)
        d = rep.to_dict()
        d.update(exact=exact, proven=lam in proven and args.h == 0)
        reports.append(d)
        if exact:
            detected.append(lam)
        flagged |= rep.status == INDETERMINATE or exact != rep.is_constant
    try:
        bound = max_constancy_bound(vs, sphere, args.h)
    except DegenerateSpectrum:
        bound = None
    payload = {"family": str(vs.family), "sphereRadius": sphere.radius, "reports": reports,
               "detectedSet": detected,
               "unproven": [l for l in detected if not (l in proven and args.h == 0)],
               "bound": bound}
    return payload, [args.seed], EXIT_FLAGGED if flagged else EXIT_OK


def _cmd_extrema(args, out, threads):
    vs = generate(_family(args), args.circumradius)
    sphere = _sphere(args, vs)
    p = PowerSumParams(args.lam, args.h)
    code = EXIT_OK
    try:
        rep = find_extrema(vs, sphere, p, starts=args.starts, seed=args.seed, threads=threads)
    except NoConvergence as exc:
        rep, code = exc.report, EXIT_FLAGGED
    try:
        pr = predict_regime(vs.family, args.lam, circumscribed=sphere.is_circumsphere_of(vs),
                            h=args.h)
        prediction = {"interval": list(pr.interval), "intervalClosed": list(pr.interval_closed),
                      "predictedMax": pr.predicted_max, "predictedMin": pr.predicted_min,
                      "boundary": pr.boundary}
    except UnsupportedFamily:
        prediction = None
    payload = {"family": str(vs.family), "sphereRadius": sphere.radius,
               "report": rep.to_dict(), "prediction": prediction}
    return payload, [args.seed], code


def _cmd_oracle(args, out, threads):
    vs = generate(_family(args), args.circumradius)
    sphere = _sphere(args, vs)
    p = PowerSumParams(args.lam, args.h)
    if vs.dim == 2:
        rep = grid_extrema_circle(vs, sphere, p, args.grid_size, threads=threads)
    else:
        rep = grid_extrema_sphere(vs, sphere, p, args.grid_size, args.seed, threads=threads)
    return ({"family": str(vs.family), "sphereRadius": sphere.radius, "report": rep.to_dict()},
            [args.seed], EXIT_OK)


def _load_points(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        pass
    try:
        with open(text, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"--points is neither inline JSON nor a readable JSON file: {exc}")


def _cmd_moments(args, out, threads):
    xy = np.asarray(_load_points(args.points), dtype=float)
    if xy.ndim != 2 or xy.shape[1] != 2:
        raise UsageError("--points must be a list of [x, y] pairs")
    if len(args.center) != 2:
        raise UsageError("--center needs two coordinates")
    cfg = PlanarConfig.from_xy(xy, args.center, args.circle_radius)
    payload = {"report": power_sums(cfg, args.kmax).to_dict()}
    if args.kset:
        rows = []
        for k in args.kset:
            if k != int(k) or k < 1:
                raise UsageError("--kset entries must be positive integers")
            const, spread = constancy_even_on_circle(cfg, int(k))
            rows.append({"k": int(k), "isConstant": const, "spread": spread})
        payload["constancy"] = rows
    return payload, [], EXIT_OK


def _cmd_conjecture(args, out, threads):
    res = conjecture_search(args.n, args.iterations, args.seed, penalize=not args.no_penalty,
                            threads=threads)
    return res.to_dict(), [args.seed], EXIT_OK


def _cmd_verify(args, out, threads, start):
    rows = run_suite(args.suite, seed=args.seed, threads=threads)
    manifest = _manifest(args, [args.seed], start)
    buf = io.StringIO()
    buf.write("# manifest: " + json.dumps(manifest, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["suite", "case", "expected", "observed", "status"])
    for r in rows:
        w.writerow(r.as_list())
    out.write(buf.getvalue())
    return EXIT_FLAGGED if any(r.status == FAIL for r in rows) else EXIT_OK


_COMMANDS = {
    "gen": _cmd_gen, "eval": _cmd_eval, "constancy": _cmd_constancy, "extrema": _cmd_extrema,
    "oracle": _cmd_oracle, "moments": _cmd_moments, "conjecture": _cmd_conjecture,
}


def run(argv=None, out=None) -> int:
    """Parse ``argv``, run one subcommand and return its exit code."""
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        if args.command == "verify-theorems":
            return _cmd_verify(args, out, args.threads, start)
        payload, seeds, code = _COMMANDS[args.command](args, out, args.threads)
    except (UsageError, PowerDistError) as exc:
        print(f"powerdist {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    payload["manifest"] = _manifest(args, seeds, start)
    _emit(payload, out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
