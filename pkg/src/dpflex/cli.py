"""Command line front end: ``dpflex {surface,curves,cones,check,cover}``.

Exit codes: 0 on success, 2 on invalid input, 3 when an exact computation
hits its size cap.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import __version__, reporting
from .errors import CapExceeded, DelPezzoError

EXIT_INPUT = 2
EXIT_CAP = 3


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("surface")
    src.add_argument("--degree", type=int, help="degree 1..7 of a surface without degenerations")
    src.add_argument("--config", metavar="PATH", help="JSON surface configuration")
    out = common.add_argument_group("output")
    out.add_argument("--format", choices=("text", "json"), default="text")
    out.add_argument("--no-cache", action="store_true", help="bypass the curve-table cache")
    out.add_argument("--cache-dir", metavar="PATH",
                     help="cache directory (default $DPFLEX_CACHE_DIR or ~/.cache/dpflex)")

    p = argparse.ArgumentParser(prog="dpflex", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"dpflex {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("surface", parents=[common], help="summary of the surface type")
    sub.add_parser("curves", parents=[common], help="(-1)- and (-2)-curves")
    c = sub.add_parser("cones", parents=[common], help="subdivision cone representatives")
    c.add_argument("--cone", metavar="SPEC", help="one cone: label, Ample, NE or a ray list")

    chk = sub.add_parser("check", parents=[common], help="verdicts of one cylinder collection")
    chk.add_argument("--construction", metavar="SPEC", action="append", default=[],
                     help="cylinder spec; repeat to build a collection")
    chk.add_argument("--cone", metavar="SPEC", required=True)
    chk.add_argument("--volume", action="store_true", help="report the covered fraction of the cone")

    cov = sub.add_parser("cover", parents=[common],
                         help="all cylinders of some constructions over all contractions")
    cov.add_argument("--construction", metavar="TAGS", action="append", default=[],
                     help="lines, tangent, cuspcubic (comma separated or repeated)")
    cov.add_argument("--cone", metavar="SPEC", required=True)
    cov.add_argument("--reduce", action="store_true")
    cov.add_argument("--polar-filter", action="store_true")
    cov.add_argument("--volume", action="store_true")
    return p


def run(args: argparse.Namespace) -> dict:
    cfg = reporting.read_config(args.config, args.degree)
    cache = None
    if not args.no_cache:
        cache = reporting.CurveCache(args.cache_dir or reporting.default_cache_dir())
    S = reporting.build_surface(cfg, cache)
    if args.command == "surface":
        rep = reporting.cmd_surface(S, cfg)
    elif args.command == "curves":
        rep = reporting.cmd_curves(S, cfg)
    elif args.command == "cones":
        rep = reporting.cmd_cones(S, cfg, args.cone)
    elif args.command == "check":
        rep = reporting.cmd_check(S, cfg, args.construction, args.cone, args.volume)
    else:
        rep = reporting.cmd_cover(S, cfg, args.construction, args.cone, args.reduce,
                                  args.polar_filter, args.volume)
    reporting.finish_surface(S, cfg, cache)
    return rep


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        rep = run(args)
    except CapExceeded as exc:
        print(f"dpflex: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CAP
    except DelPezzoError as exc:
        print(f"dpflex: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out = reporting.dumps(rep) if args.format == "json" else reporting.render_text(rep)
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
