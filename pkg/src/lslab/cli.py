"""Command-line front end: `lslab report|scan|classify|hgrid|alexander|graph`."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import hf_complex
from .alexander import alexander_from_graph, incomparable_pair
from .alg_link import AlgebraicLink, parse_link
from .graph_core import PlumbingGraph, determinant
from .hfun import find_very_good
from .rational import is_lspace_graph, is_simple_vertex, minimal_cycle, negative_surgery_lspace_range
from .surgery_ls import classify_boundedness, default_jobs, h_function, ls_scan, parse_box

EXIT_OK, EXIT_INDETERMINATE, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2, 3
FORMATS = ("ascii", "csv", "json")


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    link: str | None
    box: tuple | None
    fmt: str
    trunc_m: int | None
    trunc_n: int
    jobs: int


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc


def _load_json(path: str):
    text = _read(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def load_link(path: str) -> AlgebraicLink:
    data = _load_json(path)
    try:
        return parse_link(data)
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def load_graph(path: str) -> PlumbingGraph:
    data = _load_json(path)
    try:
        return PlumbingGraph.from_dict(data)
    except (ValueError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


# commands; each returns (text, exit code)


def cmd_report(cfg: RunConfig, args) -> tuple[str, int]:
    link = load_link(cfg.link)
    delta = alexander_from_graph(link)
    pair = incomparable_pair(delta)
    very_good = find_very_good(h_function(link), delta)
    bound = classify_boundedness(link)
    info = {
        "link": link.describe(),
        "g1": link.g1,
        "g2": link.g2,
        "l": link.l,
        "m1": link.m1,
        "m2": link.m2,
        "c": list(link.c),
        "parallel": link.parallel,
        "alexander": str(delta),
        "alexander_support": [list(p) for p in delta.support()],
        "ordered_type": pair is None,
        "incomparable_pair": [list(p) for p in pair] if pair else None,
        "very_good_point": list(very_good) if very_good else None,
        "boundedness": bound.verdict,
        "certificate": bound.explain().splitlines()[1:],
    }
    if cfg.fmt == "json":
        return json.dumps(info, separators=(",", ":")) + "\n", EXIT_OK
    if cfg.fmt == "csv":
        rows = ["key,value"] + [f"{k},{json.dumps(v)}" if "," in str(v) else f"{k},{v}" for k, v in info.items() if k != "certificate"]
        return "\n".join(rows) + "\n", EXIT_OK
    lines = [
        f"link          {info['link']}",
        f"genera        g1 = {link.g1}, g2 = {link.g2}",
        f"linking       l = {link.l}",
        f"slopes        m1 = {link.m1}, m2 = {link.m2}",
        f"conductor     c = {link.c}",
        f"Delta         {delta}",
        f"ordered type  {'yes' if pair is None else f'no, witness {pair}'}",
        f"very good     {very_good if very_good else 'none'}",
        bound.explain(),
    ]
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_scan(cfg: RunConfig, args) -> tuple[str, int]:
    link = load_link(cfg.link)
    box = cfg.box or (range(-4, 17), range(-4, 17))
    result = ls_scan(link, box, cfg.jobs, args.cross_check, cfg.trunc_m, cfg.trunc_n)
    if args.figure:
        from .plotting import plot_scan

        try:
            plot_scan(result, args.figure, title=link.describe())
        except ImportError as exc:
            raise InputError("--figure needs matplotlib (install the 'plot' extra)") from exc
    code = EXIT_INDETERMINATE if result.indeterminate else EXIT_OK
    return result.render(cfg.fmt), code


def cmd_classify(cfg: RunConfig, args) -> tuple[str, int]:
    link = load_link(cfg.link)
    bound = classify_boundedness(link)
    if cfg.fmt == "json":
        data = {
            "verdict": bound.verdict,
            "very_good_point": list(bound.very_good_point) if bound.very_good_point else None,
            "incomparable_pair": [list(p) for p in bound.incomparable_pair] if bound.incomparable_pair else None,
            "simple_vertex_test": bound.simple_witness,
            "conditions": bound.conditions,
        }
        return json.dumps(data, separators=(",", ":")) + "\n", EXIT_OK
    if cfg.fmt == "csv":
        return "verdict\n" + bound.verdict + "\n", EXIT_OK
    return (bound.explain() if args.explain else bound.verdict) + "\n", EXIT_OK


def cmd_hgrid(cfg: RunConfig, args) -> tuple[str, int]:
    link = load_link(cfg.link)
    h = h_function(link)
    box = cfg.box or (range(0, link.c[0] + 1), range(0, link.c[1] + 1))
    render = {"ascii": h.grid_ascii, "csv": h.grid_csv, "json": h.grid_json}[cfg.fmt]
    return render(box), EXIT_OK


def cmd_alexander(cfg: RunConfig, args) -> tuple[str, int]:
    link = load_link(cfg.link)
    delta = alexander_from_graph(link)
    if cfg.fmt == "csv":
        return delta.support_csv(), EXIT_OK
    if cfg.fmt == "json":
        return delta.to_json() + "\n", EXIT_OK
    return str(delta) + "\n", EXIT_OK


def cmd_graph(cfg: RunConfig, args) -> tuple[str, int]:
    g = load_graph(args.graph)
    if args.vertex is not None and args.vertex not in g:
        raise InputError(f"unknown vertex {args.vertex!r}")
    op = args.op
    if op == "det":
        data = {"det": determinant(g)}
    elif op == "zmin":
        try:
            trace = minimal_cycle(g)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        data = trace.to_dict() if args.explain else {"result": trace.to_dict()["result"]}
    elif op == "rational":
        verdict = is_lspace_graph(g)
        data = {
            "verdict": verdict.verdict.value,
            "summands": [{"det": abs(determinant(p)), "verdict": v.value, "reason": r} for p, v, r in verdict.summands],
        }
    elif op == "simple":
        if args.vertex is None:
            raise InputError("graph simple needs --vertex")
        try:
            data = {"vertex": args.vertex, "simple": is_simple_vertex(g, args.vertex)}
            if data["simple"] and args.explain:
                data["range"] = negative_surgery_lspace_range(g, args.vertex).describe()
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    if cfg.fmt == "json":
        return json.dumps(data, separators=(",", ":")) + "\n", EXIT_OK
    if cfg.fmt == "csv":
        flat = {k: v for k, v in data.items() if not isinstance(v, (list, dict))}
        return ",".join(flat) + "\n" + ",".join(str(v) for v in flat.values()) + "\n", EXIT_OK
    if op == "zmin":
        text = " ".join(f"{k}:{v}" for k, v in data["result"].items())
        if args.explain:
            text += "\n" + "\n".join(f"  {s['vertex']} test {s['test']}" for s in data["steps"])
        return text + "\n", EXIT_OK
    if op == "rational":
        lines = [data["verdict"]] + [f"  |H1| = {s['det']}: {s['verdict']} ({s['reason']})" for s in data["summands"]]
        return "\n".join(lines) + "\n", EXIT_OK
    return "\n".join(f"{k}: {v}" for k, v in data.items()) + "\n", EXIT_OK


COMMANDS = {
    "report": cmd_report,
    "scan": cmd_scan,
    "classify": cmd_classify,
    "hgrid": cmd_hgrid,
    "alexander": cmd_alexander,
    "graph": cmd_graph,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lslab", description="L-space surgeries on two-component algebraic links")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, link=True, box=False):
        if link:
            p.add_argument("--link", required=True, help="link spec JSON file, or - for stdin")
        if box:
            p.add_argument("--box", help="a:b,c:d with inclusive ends")
        p.add_argument("--format", choices=FORMATS, default="ascii")
        p.add_argument("--explain", action="store_true")
        return p

    common(sub.add_parser("report", help="invariants and boundedness of a link"))
    scan = common(sub.add_parser("scan", help="L-space verdicts on a box of framings"), box=True)
    scan.add_argument("--trunc-m", type=int, default=None, help="lattice margin of the surgery complex")
    scan.add_argument("--trunc-n", type=int, default=hf_complex.DEFAULT_POWER, help="U-power cut-off")
    scan.add_argument("--jobs", type=int, default=None, help="worker processes (default LSLAB_JOBS or 1)")
    scan.add_argument("--cross-check", action="store_true", help="run both testers where both apply")
    scan.add_argument("--figure", help="also write a PNG of the grid")
    common(sub.add_parser("classify", help="bounded-below test with certificates"))
    common(sub.add_parser("hgrid", help="h-function values on a box"), box=True)
    common(sub.add_parser("alexander", help="two-variable Alexander polynomial"))
    graph = common(sub.add_parser("graph", help="plumbing graph utilities"), link=False)
    graph.add_argument("op", choices=("det", "zmin", "rational", "simple"))
    graph.add_argument("--graph", required=True, help="plumbing graph JSON file")
    graph.add_argument("--vertex")
    return parser


def make_config(args) -> RunConfig:
    box = parse_box(args.box) if getattr(args, "box", None) else None
    if box and (not len(box[0]) or not len(box[1])):
        raise InputError("box ranges must be non-empty")
    jobs = getattr(args, "jobs", None)
    if jobs is None:
        jobs = default_jobs()
    if jobs < 1:
        raise InputError("--jobs must be positive")
    trunc_m = getattr(args, "trunc_m", None)
    trunc_n = getattr(args, "trunc_n", hf_complex.DEFAULT_POWER)
    if (trunc_m is not None and trunc_m < 0) or trunc_n < 1:
        raise InputError("truncation values must be non-negative (M) and positive (N)")
    return RunConfig(args.command, getattr(args, "link", None), box, args.format, trunc_m, trunc_n, jobs)


def _glue_box(argv: list[str]) -> list[str]:
    """Let `--box -4:16,...` through; argparse would read the value as a flag."""
    out, it = [], iter(argv)
    for tok in it:
        if tok == "--box":
            out.append("--box=" + next(it, ""))
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _glue_box(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = make_config(args)
        text, code = COMMANDS[args.command](cfg, args)
    except AssertionError as exc:
        print(f"lslab: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, KeyError, OSError) as exc:
        print(f"lslab: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
