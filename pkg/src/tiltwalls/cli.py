"""Command line: ``tiltwalls {first-wall,walls,bg-check,bounds,appendix-verify,render}``.

Exit codes: 0 success, 2 inconclusive (or an inequality that does not hold),
1 error. All rationals are given as ``p/q`` or ``p``.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import bg, nl, p3
from .figure import Figure, Viewport
from .lattice import (
    INTEGRAL_CH2_LATTICE,
    BgRegion,
    ChernData,
    LatticeSpec,
    StabilityPoint,
    chern_from_json,
    format_rational,
    parse_chern,
    parse_rational,
)
from .walls import SearchBox, WallReport, enumerate_walls

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2

CONFIG_KEYS = {
    "polarization": {"h3", "bgRegion"},
    "latticeSpec": {"d0", "d1", "d2", "d3"},
    "searchBox": {"rMax", "c1Span", "c2Span"},
    "output": None,
}
OUTPUT_FORMATS = ("text", "json", "csv", "markdown")


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with 1; 2 is reserved for inconclusive results."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


# -- parsing helpers -----------------------------------------------------------

def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _chern(text: str) -> ChernData:
    try:
        return parse_chern(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def int_range(text: str) -> list[int]:
    """``"a..b"`` (inclusive), ``"a,b,c"`` or a single integer."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
            if lo > hi:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer range: {text!r}") from None


def rational_list(text: str) -> list[Fraction]:
    return [_rational(t) for t in text.split(",")]


def _box(text: str) -> SearchBox:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("box must be rMax,c1Span,c2Span")
    try:
        return SearchBox(int(parse_rational(parts[0])), parse_rational(parts[1]), parse_rational(parts[2]))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _lattice(text: str) -> LatticeSpec:
    try:
        return LatticeSpec(*(int(t) for t in text.split(",")))
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"bad lattice {text!r}: {exc}") from None


def load_config(path: str) -> dict:
    """Read and validate a JSON config; unknown keys are an error."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise CliError("config must be a JSON object")
    out: dict = {}
    for key, value in data.items():
        if key not in CONFIG_KEYS:
            raise CliError(f"unknown config key {key!r}")
        allowed = CONFIG_KEYS[key]
        if allowed is None:
            if value not in OUTPUT_FORMATS:
                raise CliError(f"output must be one of {OUTPUT_FORMATS}")
            out["output"] = value
            continue
        if not isinstance(value, dict):
            raise CliError(f"config section {key!r} must be an object")
        unknown = set(value) - allowed
        if unknown:
            raise CliError(f"unknown config key {key}.{sorted(unknown)[0]}")
        if not all(isinstance(v, str) for v in value.values()):
            raise CliError(f"config values in {key!r} must be \"p/q\" strings")
        try:
            if key == "polarization":
                if "h3" in value:
                    out["h3"] = parse_rational(value["h3"])
                if "bgRegion" in value:
                    out["bg_region"] = BgRegion(value["bgRegion"])
            elif key == "latticeSpec":
                dens = {k: int(parse_rational(v)) for k, v in value.items()}
                out["lattice"] = LatticeSpec(**dens)
            elif key == "searchBox":
                out["box"] = SearchBox.from_json(value)
        except (ValueError, KeyError) as exc:
            raise CliError(f"bad config section {key!r}: {exc}") from None
    return out


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def _setting(args, name, config, default=None):
    value = getattr(args, name, None)
    if value is not None:
        return value
    return config.get(name, default)


def _format(args, config, default="text") -> str:
    if getattr(args, "json", False):
        return "json"
    if getattr(args, "csv", False):
        return "csv"
    if getattr(args, "markdown", False):
        return "markdown"
    return config.get("output", default)


# -- commands ------------------------------------------------------------------

def _l2_values(spec: Optional[str], mode: nl.Mode, n: int, step: Fraction) -> list[Fraction]:
    if spec is None or spec == "auto":
        lo = nl.mode_l2_floor(mode, n)
        hi = lo if mode is nl.Mode.I else Fraction(0)
    elif ".." in spec:
        lo_s, hi_s = spec.split("..", 1)
        lo, hi = parse_rational(lo_s), parse_rational(hi_s)
    else:
        return [parse_rational(spec)]
    out = []
    value = lo
    while value <= hi:
        out.append(value)
        value += step
    return out


def cmd_first_wall(args, config) -> int:
    mode = nl.Mode(args.mode)
    h3s = args.h3 if args.h3 is not None else [config.get("h3", Fraction(1))]
    region = config.get("bg_region", BgRegion.EVERYWHERE)
    if args.bg_region is not None:
        region = BgRegion(args.bg_region)
    box = _setting(args, "box", config)
    lattice = _setting(args, "lattice", config, INTEGRAL_CH2_LATTICE)
    step = args.l2_step
    if step <= 0:
        raise CliError("--l2-step must be positive")
    reports = []
    for n in args.n:
        for h3 in h3s:
            for l2 in _l2_values(args.l2, mode, n, step):
                inp = nl.NlInput(n, h3, l2, mode)
                reports.append(nl.first_wall_analysis(inp, box, region, lattice))
    fmt = _format(args, config, "csv" if len(reports) > 1 else "text")
    if fmt == "csv":
        sys.stdout.write(nl.sweep_csv(reports))
    elif fmt == "json":
        payload = [r.to_json() for r in reports]
        _emit_json(payload[0] if len(payload) == 1 else payload)
    else:
        for r in reports:
            _print_analysis(r)
    conclusive = all(r.conclusion is nl.Conclusion.FIRST_WALL_THROUGH_ORIGIN for r in reports)
    return EXIT_OK if conclusive else EXIT_INCONCLUSIVE


def _print_analysis(r: nl.AnalysisReport) -> None:
    inp = r.input
    print(f"n={inp.n} H^3={format_rational(inp.h3)} L^2={format_rational(inp.l2)} mode={inp.mode.value}")
    print(f"  window [{format_rational(r.window[0])}, {format_rational(r.window[1])}] on b = {format_rational(Fraction(-inp.n, 2))}")
    for wall in r.walls:
        cands = " ".join("(" + ",".join(format_rational(x) for x in c) + ")" for c in wall.candidate_triples())
        print(f"  wall {wall.line} height {format_rational(wall.height_at_b0)}: {cands}")
    for e in r.exclusions:
        verdict = "excluded" if e.excluded else "not excluded"
        print(f"  c={e.c}: {format_rational(e.lower)} < {format_rational(e.upper)} ? {verdict}")
    for w in r.warnings:
        print(f"  warning: {w}")
    print(f"  surviving c: {', '.join(str(c) for c in r.surviving_c) or 'none'}")
    print(f"  conclusion: {r.conclusion.value}")


def cmd_walls(args, config) -> int:
    h3 = _setting(args, "h3", config, Fraction(1))
    box = _setting(args, "box", config)
    lattice = _setting(args, "lattice", config, INTEGRAL_CH2_LATTICE)
    reports = enumerate_walls(args.ch, args.b0, args.w_floor, args.w_ceil, box, lattice, h3)
    _emit_json({
        "target": [format_rational(x) for x in args.ch.truncation]
        + [None if args.ch.ch3 is None else format_rational(args.ch.ch3)],
        "h3": format_rational(h3),
        "b0": format_rational(args.b0),
        "walls": [r.to_json() for r in reports],
    })
    return EXIT_OK


def cmd_bg_check(args, config) -> int:
    h3 = _setting(args, "h3", config, Fraction(1))
    if args.params is not None:
        report = bg.verify_bg_params(args.params, args.n, h3, args.c)
        _emit_json(report.to_json())
        return EXIT_OK if report.passed else EXIT_INCONCLUSIVE
    if args.ch is None or args.b is None or args.w is None:
        raise CliError("bg-check needs --ch, --b and --w (or --params)")
    pt = StabilityPoint(args.b, args.w)
    verdict = bg.bg_check(args.ch, pt, h3)
    payload = verdict.to_json()
    payload["liRegion"] = bg.li_region(args.b, args.w)
    _emit_json(payload)
    return EXIT_OK if verdict.applicable and verdict.holds else EXIT_INCONCLUSIVE


def _bound_rows(mode: nl.BoundMode, ns: Sequence[int]) -> tuple[list[str], list[list[str]]]:
    header = ["n", "L2_bound", "max_vanishing_cycles", "restricted", "restricted_strong"]
    if mode is nl.BoundMode.B:
        header.append("disjoint_lines")
    rows = []
    for n in ns:
        row = [str(n), format_rational(nl.theorem_bound(mode, n)), str(nl.max_vanishing_cycles(mode, n)),
               format_rational(nl.restricted_bound(n, False)), format_rational(nl.restricted_bound(n, True))]
        if mode is nl.BoundMode.B:
            row.append(format_rational(nl.p3_example("disjointLines", n)))
        rows.append(row)
    return header, rows


def cmd_bounds(args, config) -> int:
    header, rows = _bound_rows(nl.BoundMode(args.mode), args.n)
    if _format(args, config, "csv") == "markdown":
        lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
        lines += ["| " + " | ".join(r) + " |" for r in rows]
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        sys.stdout.write(",".join(header) + "\n")
        sys.stdout.writelines(",".join(r) + "\n" for r in rows)
    return EXIT_OK


def cmd_appendix_verify(args, config) -> int:
    rows = p3.appendix_rows(args.n)
    if _format(args, config, "text") == "csv":
        sys.stdout.write(p3.appendix_csv(rows))
    ok = sum(r.verified for r in rows)
    print(f"{ok}/{len(rows)} verified")
    for r in rows:
        if not r.verified:
            print(f"n={r.n}: {r.sum_lhs} != {r.sum_rhs}", file=sys.stderr)
    return EXIT_OK if ok == len(rows) else EXIT_ERROR


def figure_from_report(data, viewport: Optional[Viewport] = None) -> Figure:
    """Build a figure from first-wall JSON (single or list) or walls JSON."""
    if isinstance(data, list):
        data = data[0] if data else {}
    if not isinstance(data, dict):
        raise CliError("report must be a JSON object")
    if "input" in data:
        report = nl.AnalysisReport.from_json(data)
        n, h3 = report.input.n, report.input.h3
        target = nl.pushforward_class(report.input)
        walls = report.walls
        fig = Figure(viewport or Viewport.for_degree(n), vertical_loci=[Fraction(-n, 2)],
                     title=f"walls for n={n}, L^2={format_rational(report.input.l2)}")
    elif "walls" in data:
        h3 = parse_rational(data.get("h3", "1"))
        target = chern_from_json(data["target"]) if data.get("target") else None
        walls = tuple(WallReport.from_json(w) for w in data["walls"])
        if viewport is None:
            viewport = _fit_viewport(walls, target, h3, parse_rational(data.get("b0", "0")))
        fig = Figure(viewport, title="walls")
        if target is not None and target.ch0 == 0 and target.ch1h2 != 0:
            fig.vertical_loci.append(target.ch2h / target.ch1h2)
    else:
        raise CliError("unrecognised report: expected a first-wall or walls JSON document")
    for wall in walls:
        fig.add_report(wall, target, h3)
    return fig


def _fit_viewport(walls, target, h3, b0) -> Viewport:
    bs = [b0, Fraction(0)]
    for wall in walls:
        bs += [wall.segment.b_left.approx(6), wall.segment.b_right.approx(6)]
    lo, hi = min(bs) - 2, max(bs) + 2
    top = max(lo * lo, hi * hi) / 2 + 2
    return Viewport(lo, hi, Fraction(-2), top)


def cmd_render(args, config) -> int:
    try:
        text = Path(args.report).read_text(encoding="utf-8") if args.report != "-" else sys.stdin.read()
        data = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read report: {exc}") from None
    viewport = None
    if args.viewport:
        vals = rational_list(args.viewport)
        if len(vals) != 4:
            raise CliError("--viewport needs bmin,bmax,wmin,wmax")
        viewport = Viewport(*vals)
    svg = figure_from_report(data, viewport).to_svg()
    if args.out:
        Path(args.out).write_text(svg, encoding="utf-8")
    else:
        sys.stdout.write(svg)
    return EXIT_OK


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tiltwalls", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="JSON config with polarization, latticeSpec, searchBox, output")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    fw = sub.add_parser("first-wall", help="first-wall analysis for a line bundle on a degree-n divisor")
    fw.add_argument("--n", type=int_range, required=True, help="degree, or a range a..b")
    fw.add_argument("--h3", type=rational_list, help="H^3, or a comma list")
    fw.add_argument("--l2", help="L^2, a range lo..hi, or 'auto' for the mode's admissible range")
    fw.add_argument("--l2-step", type=_rational, default=Fraction(1, 2))
    fw.add_argument("--mode", choices=["i", "ii"], required=True)
    fw.add_argument("--box", type=_box, help="rMax,c1Span,c2Span")
    fw.add_argument("--lattice", type=_lattice, help="d0,d1,d2,d3 for candidate classes")
    fw.add_argument("--bg-region", choices=[r.value for r in BgRegion])
    out = fw.add_mutually_exclusive_group()
    out.add_argument("--json", action="store_true")
    out.add_argument("--csv", action="store_true")
    fw.set_defaults(func=cmd_first_wall)

    wl = sub.add_parser("walls", help="enumerate numerical walls for a class")
    wl.add_argument("--ch", type=_chern, required=True, help="ch0,ch1.H^2,ch2.H[,ch3]")
    wl.add_argument("--h3", type=_rational)
    wl.add_argument("--b0", type=_rational, required=True)
    wl.add_argument("--w-floor", type=_rational, required=True)
    wl.add_argument("--w-ceil", type=_rational, required=True)
    wl.add_argument("--box", type=_box)
    wl.add_argument("--lattice", type=_lattice)
    wl.set_defaults(func=cmd_walls)

    bgp = sub.add_parser("bg-check", help="ch3 inequality at a point, or a parameter chain")
    bgp.add_argument("--ch", type=_chern)
    bgp.add_argument("--h3", type=_rational)
    bgp.add_argument("--b", type=_rational)
    bgp.add_argument("--w", type=_rational)
    bgp.add_argument("--params", choices=[m.value for m in bg.BgMode])
    bgp.add_argument("--n", type=int)
    bgp.add_argument("--c", type=_rational)
    bgp.set_defaults(func=cmd_bg_check)

    bd = sub.add_parser("bounds", help="table of L^2 bounds and vanishing-cycle counts")
    bd.add_argument("--mode", choices=["A", "B"], required=True)
    bd.add_argument("--n", type=int_range, required=True)
    fmt = bd.add_mutually_exclusive_group()
    fmt.add_argument("--csv", action="store_true")
    fmt.add_argument("--markdown", action="store_true")
    bd.set_defaults(func=cmd_bounds)

    av = sub.add_parser("appendix-verify", help="check the P^3 section-count identity over a range")
    av.add_argument("--n", type=int_range, required=True)
    av.add_argument("--csv", action="store_true")
    av.set_defaults(func=cmd_appendix_verify)

    rd = sub.add_parser("render", help="SVG figure from a first-wall or walls JSON report")
    rd.add_argument("report", help="path to the JSON report, or - for stdin")
    rd.add_argument("--out", help="write SVG here instead of stdout")
    rd.add_argument("--viewport", help="bmin,bmax,wmin,wmax")
    rd.set_defaults(func=cmd_render)
    return parser


_NEGATIVE_VALUE = re.compile(r"^[-−]\d")


def _attach_negative_values(argv: Sequence[str]) -> list[str]:
    """Turn ``--opt -15/1`` into ``--opt=-15/1``; argparse would read ``-15/1`` as a flag."""
    out: list[str] = []
    for token in argv:
        if (_NEGATIVE_VALUE.match(token) and out and out[-1].startswith("--")
                and "=" not in out[-1]):
            out[-1] = f"{out[-1]}={token}"
        else:
            out.append(token)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    parser = build_parser()
    args = parser.parse_args(_attach_negative_values(sys.argv[1:] if argv is None else argv))
    try:
        config = load_config(args.config) if args.config else {}
        return args.func(args, config)
    except (CliError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
