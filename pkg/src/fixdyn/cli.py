"""Command line front end.

Exit codes: 0 success, 1 domain error (JSON object on stderr naming the
error), 2 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from typing import Optional, Sequence

from . import config
from .analysis import ContourConfig, analyze, periodic_points
from .core import Polynomial
from .documents import (
    as_rational,
    dumps,
    map_to_dict,
    parse_map,
    periodic_to_dict,
    report_to_dict,
    verdict_to_dict,
)
from .errors import FixdynError, PreconditionUnmet
from .geometry import (
    NGonSpec,
    construct_from_fixed_points,
    construct_ngon,
    construct_real_part_one_family,
    construct_remark5,
    geometry_verdict,
)
from .julia import (
    FIGURES,
    RenderConfig,
    escape_radius,
    figure_config,
    figure_polynomial,
    render,
    write_image,
)

TOL_FLAGS = {
    "tol_fix": "tau_fix",
    "tol_mult": "tau_mult",
    "tol_root": "root_tol",
    "tol_geo": "tau_geo",
    "tol_coprime": "tau_root",
}


def parse_complex(text: str) -> complex:
    """Accept ``re,im`` or Python complex syntax (``1+2j``, ``-0.5``, ``3j``)."""
    s = text.strip()
    try:
        if "," in s:
            re_, im_ = s.split(",")
            return complex(float(re_), float(im_))
        return complex(s.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")


def parse_size(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise argparse.ArgumentTypeError(f"size must look like WIDTHxHEIGHT, got {text!r}")


def parse_multiple(text: str) -> tuple[float, int]:
    try:
        b, p = text.split(":")
        return float(b), int(p)
    except ValueError:
        raise argparse.ArgumentTypeError(f"multiple point must look like POINT:POWER, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fixdyn",
        description="Fixed points, multipliers and residue indices of polynomials and rational maps.",
    )
    for flag in TOL_FLAGS:
        parser.add_argument("--" + flag.replace("_", "-"), type=float, metavar="X")
    parser.add_argument(
        "--config", action="append", default=[], metavar="KEY=VALUE",
        help="override any tolerance field, e.g. --config tau_mult=1e-8",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="fixed points, indices and witnesses of a map")
    p.add_argument("map")
    p.add_argument("--out")
    p.add_argument("--nodes", type=int, default=512, help="contour quadrature nodes")

    p = sub.add_parser("geometry", help="multiplier geometry checks for a polynomial")
    p.add_argument("map")
    p.add_argument("--out")

    p = sub.add_parser("construct", help="emit a map document for a special family")
    csub = p.add_subparsers(dest="family", required=True)
    c = csub.add_parser("ngon")
    c.add_argument("--center", type=parse_complex, required=True)
    c.add_argument("--radius", type=float, required=True)
    c.add_argument("--phase", type=float, required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--M", type=parse_complex, required=True)
    c = csub.add_parser("fixedpoints")
    c.add_argument("--alphas", type=parse_complex, nargs="+", required=True)
    c.add_argument("--k", type=parse_complex, required=True)
    c = csub.add_parser("realpart1")
    c.add_argument("--simple", type=float, nargs="*", default=[])
    c.add_argument("--multiple", type=parse_multiple, nargs="*", default=[])
    c.add_argument("--k", type=float, required=True)
    c = csub.add_parser("remark5")
    c.add_argument("--k-imag", type=float, required=True)
    c.add_argument("--alpha", type=float, required=True)
    for c in csub.choices.values():
        c.add_argument("--out")

    p = sub.add_parser("julia", help="render a filled Julia set to a PPM file")
    p.add_argument("map", nargs="?")
    p.add_argument("--figure", choices=sorted(FIGURES))
    p.add_argument("--center", type=parse_complex)
    p.add_argument("--half-width", type=float)
    p.add_argument("--size", type=parse_size)
    p.add_argument("--max-iter", type=int)
    p.add_argument("--out", required=True)

    p = sub.add_parser("periodic", help="points of exact period p of a polynomial")
    p.add_argument("map")
    p.add_argument("-p", "--period", type=int, required=True)
    return parser


def _tolerance_overrides(parser: argparse.ArgumentParser, args) -> dict:
    fields = {f.name: f for f in dataclasses.fields(config.Tolerances)}
    changes = {}
    for flag, key in TOL_FLAGS.items():
        value = getattr(args, flag)
        if value is not None:
            changes[key] = value
    for item in args.config:
        key, sep, raw = item.partition("=")
        if not sep or key not in fields:
            parser.error(f"argument --config: unknown setting {item!r}")
        kind = type(fields[key].default)
        try:
            changes[key] = kind(float(raw)) if kind is int else kind(raw)
        except ValueError:
            parser.error(f"argument --config: bad value for {key}: {raw!r}")
    return changes


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _polynomial(m) -> Polynomial:
    if isinstance(m, Polynomial):
        return m
    if m.is_polynomial:
        return m.as_polynomial()
    raise PreconditionUnmet("this command needs a polynomial map")


def _cmd_analyze(args) -> None:
    m = parse_map(args.map)
    R = as_rational(m)
    report = analyze(R, ContourConfig(nodes=args.nodes))
    verdict = None
    if R.is_polynomial and R.degree >= 1:
        verdict = geometry_verdict(R.as_polynomial())
    _emit(dumps(report_to_dict(m, report, verdict)), args.out)


def _cmd_geometry(args) -> None:
    P = _polynomial(parse_map(args.map))
    _emit(dumps(verdict_to_dict(geometry_verdict(P))), args.out)


def _cmd_construct(args) -> None:
    if args.family == "ngon":
        P = construct_ngon(NGonSpec(args.center, args.radius, args.phase, args.n), args.M)
    elif args.family == "fixedpoints":
        P = construct_from_fixed_points(args.alphas, args.k)
    elif args.family == "realpart1":
        P = construct_real_part_one_family(args.simple, args.multiple, args.k)
    else:
        P = construct_remark5(1j * args.k_imag, args.alpha)
    _emit(dumps(map_to_dict(P)), args.out)


def _cmd_julia(parser, args) -> None:
    if (args.map is None) == (args.figure is None):
        parser.error("julia: give exactly one of MAP or --figure")
    if args.figure:
        P = figure_polynomial(args.figure)
        base = figure_config(args.figure)
    else:
        P = _polynomial(parse_map(args.map))
        base = RenderConfig()
    changes = {}
    if args.center is not None:
        changes["center"] = args.center
    if args.half_width is not None:
        changes["half_width"] = args.half_width
    if args.size is not None:
        changes["width"], changes["height"] = args.size
    if args.max_iter is not None:
        changes["max_iter"] = args.max_iter
    try:
        cfg = dataclasses.replace(base, **changes)
    except ValueError as exc:
        parser.error(f"julia: {exc}")
    grid = render(P, cfg)
    write_image(grid, args.out)
    summary = {
        "out": args.out,
        "map": map_to_dict(P),
        "width": cfg.width,
        "height": cfg.height,
        "center": [cfg.center.real, cfg.center.imag],
        "half_width": cfg.half_width,
        "max_iter": cfg.max_iter,
        "escape_radius": cfg.escape_radius_override or escape_radius(P),
        "bounded_fraction": float(grid.bounded.mean()),
    }
    sys.stdout.write(dumps(summary))


def _cmd_periodic(args) -> None:
    m = parse_map(args.map)
    P = _polynomial(m)
    if args.period < 1:
        raise PreconditionUnmet("period must be positive")
    sys.stdout.write(dumps(periodic_to_dict(m, periodic_points(P, args.period))))


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        changes = _tolerance_overrides(parser, args)
        with config.override(**changes):
            if args.command == "analyze":
                _cmd_analyze(args)
            elif args.command == "geometry":
                _cmd_geometry(args)
            elif args.command == "construct":
                _cmd_construct(args)
            elif args.command == "julia":
                _cmd_julia(parser, args)
            elif args.command == "periodic":
                _cmd_periodic(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except FixdynError as exc:
        sys.stderr.write(json.dumps({"error": exc.name, "message": str(exc)}) + "\n")
        return 1
    except ValueError as exc:
        # invalid domain objects (e.g. NGonSpec radius <= 0) surface as ValueError
        sys.stderr.write(json.dumps({"error": "InvariantViolation", "message": str(exc)}) + "\n")
        return 1
    return 0


def main() -> None:
    sys.exit(run())
