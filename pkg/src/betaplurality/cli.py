"""Command-line front end: instance generation, evaluation, solver dispatch
and SVG plots.

Instances are CSV (header ``dim=<d>``, one comma-separated voter per line,
decimal or hex floats) or JSON (``{"dim": d, "voters": [[...], ...]}``),
auto-detected by file extension; ``-`` reads stdin / writes stdout. Results
are emitted as one JSON line. Exit codes: 0 success, 2 usage or validation
error, 3 internal degeneracy.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass

import numpy as np

from .geometry_core import Point, VoterSet
from .decision import approx_beta_of_point, exact_beta_of_point_2d
from .median_point import median_point
from .planar_optimal import DegeneracyError, planar_point
from .approx_best import approx_best_point
from .oracles import oracle_best_point

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DEGENERACY = 3


class CliError(Exception):
    """Validation failure mapped to exit code 2."""


@dataclass
class ResultRecord:
    method: str
    point: list
    beta_lo: float
    beta_hi: float
    runtime_ms: float
    params: dict

    def to_json(self) -> str:
        return json.dumps(
            {
                "method": self.method,
                "point": self.point,
                "beta_lo": self.beta_lo,
                "beta_hi": self.beta_hi,
                "runtime_ms": self.runtime_ms,
                "params": self.params,
            }
        )


# ---------------------------------------------------------------------------
# Instance files
# ---------------------------------------------------------------------------


def _parse_float(tok: str) -> float:
    tok = tok.strip()
    if tok.lower().lstrip("+-").startswith("0x"):
        return float.fromhex(tok)
    return float(tok)


def _parse_csv(text: str) -> VoterSet:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("dim="):
        raise CliError("CSV instance must start with a 'dim=<d>' header")
    try:
        dim = int(lines[0][4:])
    except ValueError as e:
        raise CliError(f"bad dimension header {lines[0]!r}") from e
    rows = []
    for ln in lines[1:]:
        vals = [_parse_float(t) for t in ln.split(",")]
        if len(vals) != dim:
            raise CliError(f"row {ln!r} has {len(vals)} values, expected {dim}")
        rows.append(vals)
    if not rows:
        raise CliError("instance has no voters")
    return VoterSet(dim, np.array(rows))


def _parse_json(text: str) -> VoterSet:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise CliError(f"bad JSON instance: {e}") from e
    if not isinstance(obj, dict) or "dim" not in obj or "voters" not in obj:
        raise CliError('JSON instance needs "dim" and "voters"')
    try:
        return VoterSet(int(obj["dim"]), np.array(obj["voters"], dtype=float))
    except (ValueError, TypeError) as e:
        raise CliError(f"bad JSON instance: {e}") from e


def read_instance(path: str) -> VoterSet:
    if path == "-":
        text = sys.stdin.read()
        stripped = text.lstrip()
        return _parse_json(text) if stripped.startswith("{") else _parse_csv(text)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e}") from e
    return _parse_json(text) if path.endswith(".json") else _parse_csv(text)


def format_instance(V: VoterSet, as_json: bool) -> str:
    if as_json:
        return json.dumps({"dim": V.dim, "voters": [list(row) for row in V.array]}) + "\n"
    lines = [f"dim={V.dim}"]
    for row in V.array:
        lines.append(",".join(repr(float(x)) for x in row))
    return "\n".join(lines) + "\n"


def _write_out(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _parse_point(spec: str, dim: int) -> Point:
    try:
        coords = tuple(_parse_float(t) for t in spec.split(","))
    except ValueError as e:
        raise CliError(f"bad --point {spec!r}") from e
    if len(coords) != dim:
        raise CliError(f"--point has {len(coords)} coordinates, instance has {dim}")
    return Point(coords)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_gen(args) -> int:
    kind = args.kind
    if args.n < 1 or args.d < 1:
        raise CliError("need n >= 1 and d >= 1")
    if kind == "equilateral":
        if args.d != 2 or args.n != 3:
            raise CliError("equilateral instances have n=3, d=2")
        coords = np.array([[0.0, 0.0], [2.0, 0.0], [1.0, math.sqrt(3.0)]])
    elif kind == "random-uniform":
        coords = np.random.default_rng(args.seed).uniform(0.0, 1.0, (args.n, args.d))
    elif kind == "random-gaussian":
        coords = np.random.default_rng(args.seed).standard_normal((args.n, args.d))
    elif kind == "collinear":
        t = np.arange(args.n, dtype=float)
        coords = np.tile(t[:, None], (1, args.d))
    else:  # pragma: no cover - argparse restricts choices
        raise CliError(f"unknown kind {kind!r}")
    V = VoterSet(args.d, coords)
    _write_out(args.out, format_instance(V, as_json=args.out.endswith(".json")))
    return EXIT_OK


def _emit(args, method: str, point, bracket_lo: float, bracket_hi: float, t0: float) -> int:
    rec = ResultRecord(
        method=method,
        point=[float(c) for c in point],
        beta_lo=float(bracket_lo),
        beta_hi=float(bracket_hi),
        runtime_ms=(time.perf_counter() - t0) * 1e3,
        params={
            "eps": getattr(args, "eps", None),
            "tol": getattr(args, "tol", None),
            "seed": getattr(args, "seed", None),
        },
    )
    print(rec.to_json())
    return EXIT_OK


def cmd_eval(args) -> int:
    V = read_instance(args.infile)
    p = _parse_point(args.point, V.dim)
    t0 = time.perf_counter()
    if args.mode == "exact":
        if V.dim != 2:
            raise CliError("exact mode requires d = 2")
        bracket = exact_beta_of_point_2d(V, p, tol=args.tol)
    else:
        bracket = approx_beta_of_point(V, p, eps=args.eps)
    return _emit(args, "eval", p.coords, bracket.lo, bracket.hi, t0)


def cmd_find(args) -> int:
    V = read_instance(args.infile)
    t0 = time.perf_counter()
    if args.method == "median":
        p = median_point(V)
        # a-priori guarantee bracket of the construction
        return _emit(args, "median", p.coords, 1.0 / math.sqrt(V.dim), 1.0, t0)
    if args.method == "planar":
        if V.dim != 2:
            raise CliError("planar method requires d = 2")
        p = planar_point(V)
        return _emit(args, "planar", p.coords, math.sqrt(3.0) / 2.0, 1.0, t0)
    if args.method == "approx":
        res = approx_best_point(V, args.eps)
        return _emit(args, "approx", res.point.coords, res.bracket.lo, res.bracket.hi, t0)
    if V.dim != 2:
        raise CliError("oracle method requires d = 2")
    if V.n > 15:
        print(f"warning: oracle method on n={V.n} voters will be slow", file=sys.stderr)
    res = oracle_best_point(V)
    return _emit(args, "oracle", res.point.coords, res.bracket.lo, res.bracket.hi, t0)


def _render_svg(V: VoterSet, p: Point, beta: float) -> str:
    rad = beta * np.linalg.norm(V.array - p.array, axis=1)
    xs = np.concatenate([V.array[:, 0], V.array[:, 0] - rad, V.array[:, 0] + rad, [p[0]]])
    ys = np.concatenate([V.array[:, 1], V.array[:, 1] - rad, V.array[:, 1] + rad, [p[1]]])
    lo_x, hi_x = float(xs.min()), float(xs.max())
    lo_y, hi_y = float(ys.min()), float(ys.max())
    span = max(hi_x - lo_x, hi_y - lo_y, 1e-9)
    m = 0.05 * span
    f = lambda v: f"{v:.6f}"
    width = hi_x - lo_x + 2 * m
    height = hi_y - lo_y + 2 * m
    sw = 0.005 * span
    dot = 0.008 * span
    cross = 0.015 * span
    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{f(lo_x - m)} {f(lo_y - m)} {f(width)} {f(height)}">'
    ]
    for (vx, vy), r in zip(V.array, rad):
        parts.append(
            f'  <circle cx="{f(vx)}" cy="{f(vy)}" r="{f(r)}" fill="none" '
            f'stroke="#1f77b4" stroke-width="{f(sw)}"/>'
        )
    for vx, vy in V.array:
        parts.append(f'  <circle cx="{f(vx)}" cy="{f(vy)}" r="{f(dot)}" fill="#d62728"/>')
    px, py = p[0], p[1]
    parts.append(
        f'  <line x1="{f(px - cross)}" y1="{f(py)}" x2="{f(px + cross)}" y2="{f(py)}" '
        f'stroke="#000000" stroke-width="{f(sw)}"/>'
    )
    parts.append(
        f'  <line x1="{f(px)}" y1="{f(py - cross)}" x2="{f(px)}" y2="{f(py + cross)}" '
        f'stroke="#000000" stroke-width="{f(sw)}"/>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_plot(args) -> int:
    V = read_instance(args.infile)
    if V.dim != 2:
        raise CliError("plot requires d = 2")
    p = _parse_point(args.point, 2)
    if not 0.0 <= args.beta <= 1.0:
        raise CliError("--beta must be in [0, 1]")
    _write_out(args.out, _render_svg(V, p, args.beta))
    return EXIT_OK


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="betaplurality",
        description="beta-plurality points: constructions, decisions and plots",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance file")
    g.add_argument("kind", choices=["equilateral", "random-uniform", "random-gaussian", "collinear"])
    g.add_argument("-n", type=int, default=3, help="number of voters")
    g.add_argument("-d", type=int, default=2, help="dimension")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default="-")
    g.set_defaults(func=cmd_gen)

    e = sub.add_parser("eval", help="evaluate beta(p, V) for a given point")
    e.add_argument("--in", dest="infile", default="-")
    e.add_argument("--point", required=True, help="comma-separated coordinates")
    e.add_argument("--mode", choices=["exact", "approx"], default="exact")
    e.add_argument("--eps", type=float, default=0.1)
    e.add_argument("--tol", type=float, default=1e-9)
    e.add_argument("--seed", type=int, default=0)
    e.set_defaults(func=cmd_eval)

    fnd = sub.add_parser("find", help="construct a good point")
    fnd.add_argument("--in", dest="infile", default="-")
    fnd.add_argument("--method", choices=["median", "planar", "approx", "oracle"], required=True)
    fnd.add_argument("--eps", type=float, default=0.1)
    fnd.add_argument("--tol", type=float, default=1e-9)
    fnd.add_argument("--seed", type=int, default=0)
    fnd.set_defaults(func=cmd_find)

    pl = sub.add_parser("plot", help="render an SVG of the disk picture")
    pl.add_argument("--in", dest="infile", default="-")
    pl.add_argument("--point", required=True)
    pl.add_argument("--beta", type=float, required=True)
    pl.add_argument("--out", default="-")
    pl.set_defaults(func=cmd_plot)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DegeneracyError as e:
        print(f"degeneracy: {e}", file=sys.stderr)
        return EXIT_DEGENERACY


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
