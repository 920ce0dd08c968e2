"""Command-line interface: mesh export, verification, level curves, recipes.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
Identical argv (and seed) produce byte-identical artifacts; parallel mesh
evaluation is capped by the ZMC_NOID_THREADS environment variable and
assembled in index order regardless of scheduling.
"""

from __future__ import annotations

import argparse
import sys

from .analysis import level_curve
from .meshio import (
    SurfaceMesh,
    emit_report,
    export_level_curves,
    export_obj,
    export_ply,
    report_json,
    tessellate,
)
from .verify import NON_OVERRIDABLE, registry_ids, run_checks

USAGE_ERROR = 2
CHECK_FAILURE = 1
IO_ERROR = 3


def _parse_grid(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"grid must look like 64x192, got {text!r}")
    try:
        nu, ntheta = int(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 64x192, got {text!r}")
    return nu, ntheta


def _parse_tol(text: str) -> tuple[str, float]:
    name, sep, raw = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"tolerance override must be NAME=VALUE, got {text!r}")
    try:
        value = float(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance value {raw!r} is not a number")
    if value <= 0.0:
        raise argparse.ArgumentTypeError(f"tolerance must be positive, got {value}")
    return name, value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zmcnoid",
        description="Evaluate, verify, and export the maximal n-noid surface family.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    mesh = sub.add_parser("mesh", help="tessellate one surface and write OBJ or PLY")
    mesh.add_argument("--n", type=int, required=True, help="surface order, >= 2")
    mesh.add_argument("--u-max", type=float, default=4.0, help="radial truncation")
    mesh.add_argument("--eps", type=float, default=0.02, help="boundary offset")
    mesh.add_argument("--grid", type=_parse_grid, default=(64, 192), metavar="NUxNT")
    mesh.add_argument("--out", required=True, help="output path")
    mesh.add_argument("--format", choices=("obj", "ply"), help="default from --out suffix")

    ver = sub.add_parser("verify", help="run the registered invariant checks")
    ver.add_argument("--n", type=int, help="restrict surface checks to this order")
    ver.add_argument("--seed", type=int, default=0, help="PCG64 sampling seed")
    ver.add_argument("--out", help="write the JSON report here instead of stdout")
    ver.add_argument(
        "--tol", type=_parse_tol, action="append", default=[], metavar="NAME=VALUE",
        help="override a residual tolerance by check id (repeatable)",
    )

    levels = sub.add_parser("levels", help="sample level curves and write CSV")
    levels.add_argument("--n", type=int, required=True, help="surface order, >= 3")
    levels.add_argument(
        "--h", type=float, action="append", required=True,
        help="height to slice at (repeatable; 0 gives the 2n rays)",
    )
    levels.add_argument("--u-max", type=float, default=10.0, help="ray extent for h = 0")
    levels.add_argument("--out", required=True, help="output CSV path")
    levels.add_argument("--format", choices=("csv",), default="csv")

    rep = sub.add_parser("report", help="write a markdown recipe sheet")
    rep.add_argument("--n", type=int, default=3, help="surface order used in recipes")
    rep.add_argument("--out", help="write markdown here instead of stdout")
    return parser


def _cmd_mesh(args, parser) -> int:
    if args.n < 2:
        parser.error(f"--n must be >= 2, got {args.n}")
    nu, ntheta = args.grid
    if nu < 8 or ntheta < 8:
        parser.error(f"--grid dimensions must be >= 8, got {nu}x{ntheta}")
    if args.eps <= 0.0:
        parser.error(f"--eps must be positive, got {args.eps}")
    if args.u_max <= 1.0 + args.eps:
        parser.error(f"--u-max must exceed 1 + eps, got {args.u_max}")
    fmt = args.format
    if fmt is None:
        suffix = args.out.rsplit(".", 1)[-1].lower() if "." in args.out else ""
        if suffix not in ("obj", "ply"):
            parser.error("--format required when --out has no .obj/.ply suffix")
        fmt = suffix
    mesh = tessellate(args.n, u_max=args.u_max, eps=args.eps, grid=(nu, ntheta))
    if fmt == "obj":
        export_obj(mesh, args.out)
    else:
        export_ply(mesh, args.out)
    print(f"{args.out}: {mesh.vertex_count} vertices, {mesh.face_count} faces")
    return 0


def _cmd_verify(args, parser) -> int:
    if args.n is not None and args.n < 2:
        parser.error(f"--n must be >= 2, got {args.n}")
    overrides = dict(args.tol)
    known = set(registry_ids())
    for name in overrides:
        if name not in known:
            parser.error(f"unknown check id {name!r}; see registry_ids()")
        if name in NON_OVERRIDABLE:
            parser.error(f"check {name!r} certifies a sign condition; no tolerance")
    report = run_checks(
        seed=args.seed,
        ns=None if args.n is None else [args.n],
        tol_overrides=overrides,
    )
    if args.out:
        emit_report(report, args.out)
        summary = report.summary()
        print(f"{args.out}: {summary['passed']}/{summary['total']} checks passed")
    else:
        print(report_json(report))
    return 0 if report.passed else CHECK_FAILURE


def _cmd_levels(args, parser) -> int:
    if args.n < 3:
        parser.error(f"--n must be >= 3 for level curves, got {args.n}")
    if args.u_max <= 1.0:
        parser.error(f"--u-max must exceed 1, got {args.u_max}")
    curves = []
    seen = set()
    for h in args.h:
        if h in seen:
            continue
        seen.add(h)
        curves.extend(level_curve(args.n, h, 512, u_max=args.u_max))
    export_level_curves(curves, args.out)
    print(f"{args.out}: {len(curves)} curves")
    return 0


_REPORT_TEMPLATE = """\
# Surface artifact recipes (n = {n})

Deterministic command lines for the standard artifact set.  Rerunning any
of them with the same flags reproduces the output byte for byte.

## Surface mesh

    zmcnoid mesh --n {n} --u-max 4 --eps 0.02 --grid 64x192 --out noid{n}.ply

Binary PLY with per-vertex causal tags (0 spacelike, 1 lightlike,
2 timelike); u > 1 maps to the space-like sheet, u < 1 to the time-like
sheet inside the fold.  Use `--format obj` (plus a `.causal.csv` sidecar)
for ASCII tooling.

## Wide truncation of the same surface

    zmcnoid mesh --n {n} --u-max 8 --eps 0.02 --grid 96x288 --out noid{n}_wide.ply

The planar ends flatten toward the n directions theta = 2 pi k / n.

## Level curve sets

    zmcnoid levels --n {n} --h 0.01 --out levels{n}_near0.csv
    zmcnoid levels --n {n} --h 1 --h -1 --out levels{n}_pm1.csv
    zmcnoid levels --n {n} --h 0 --out levels{n}_rays.csv

Each nonzero height yields {n} disjoint open arcs (one per rotation copy);
height 0 yields the {two_n} straight rays through the common limit point at
the origin.  Columns are (h, copy_index, param, x, y, t).

## Verification report

    zmcnoid verify --seed 42 --out verify{n}.json

Runs every registered invariant check with PCG64-seeded sampling and exits
nonzero if any residual exceeds its tolerance.  `--n {n}` restricts the
per-surface checks to this order; `--tol NAME=VALUE` loosens or tightens a
single residual bound.
"""


def _cmd_report(args, parser) -> int:
    if args.n < 2:
        parser.error(f"--n must be >= 2, got {args.n}")
    text = _REPORT_TEMPLATE.format(n=args.n, two_n=2 * args.n)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        print(f"{args.out}: recipe sheet written")
    else:
        print(text, end="")
    return 0


_COMMANDS = {
    "mesh": _cmd_mesh,
    "verify": _cmd_verify,
    "levels": _cmd_levels,
    "report": _cmd_report,
}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args, parser)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return IO_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
