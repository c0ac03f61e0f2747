"""L-space surgeries on two-component algebraic links.

Each (d1, d2) is decided first on the surgery plumbing graph (rational graphs
are exactly the plumbed L-spaces). Points the graph calculus cannot settle go
to the surgery-complex tester in hf_complex.
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import hf_complex
from .alexander import alexander_from_graph, incomparable_pair
from .alg_link import AlgebraicLink, parse_link
from .graph_core import PlumbingGraph, determinant, reduce
from .hf_complex import FramingMatrix
from .hfun import HFunction, ValueSemigroup, find_very_good, h_from_alexander, h_from_semigroup
from .rational import Verdict, is_lspace_graph, is_simple_vertex

SYMBOLS = {Verdict.LSPACE: "●", Verdict.NOT_LSPACE: "·", Verdict.INDETERMINATE: "?"}


class TesterDisagreement(AssertionError):
    pass


class BoundViolated(AssertionError):
    pass


class EquivalenceViolation(AssertionError):
    pass


class NotParallel(ValueError):
    pass


@dataclass
class LsVerdict:
    verdict: Verdict
    route: str  # "graph", "complex" or "homology"
    certificate: str
    second_opinion: Verdict | None = None

    def __str__(self):
        return f"{self.verdict} [{self.route}: {self.certificate}]"


def framing_matrix(link: AlgebraicLink, d1: int, d2: int) -> FramingMatrix:
    return FramingMatrix(d1, d2, link.l)


def surgery_plumbing(link: AlgebraicLink, d1: int, d2: int) -> PlumbingGraph:
    """Resolution graph with each arrow replaced by a vertex framed d_i - m_i at v_i."""
    g = link.plain_graph
    euler = dict(g.euler)
    edges = set(g.edges)
    for name, v, d, m in (("s1", link.v1, d1, link.m1), ("s2", link.v2, d2, link.m2)):
        euler[name] = d - m
        edges.add(frozenset((name, v)))
    out = PlumbingGraph(euler, frozenset(edges), ())
    if abs(determinant(out)) != abs(framing_matrix(link, d1, d2).det):
        raise AssertionError("surgery graph determinant differs from det Lambda")
    return out


_H_CACHE: dict[str, HFunction] = {}


def h_function(link: AlgebraicLink) -> HFunction:
    key = link.to_json()
    if key not in _H_CACHE:
        _H_CACHE[key] = h_from_alexander(link)
    return _H_CACHE[key]


def _graph_certificate(result) -> str:
    reasons = sorted({reason for _, _, reason in result.summands})
    n = len(result.summands)
    return f"{n} summand{'s' if n != 1 else ''}: " + "; ".join(reasons) if n else "reduces to S^3"


def ls_test(
    link: AlgebraicLink,
    d1: int,
    d2: int,
    cross_check: bool = False,
    margin: int | None = None,
    power: int = hf_complex.DEFAULT_POWER,
) -> LsVerdict:
    """Graph route first; the surgery complex decides what the graph route leaves open.

    With cross_check the complex is also run where the graph route already
    decided, and a conflict raises TesterDisagreement.
    """
    framing = framing_matrix(link, d1, d2)
    if framing.det == 0:
        return LsVerdict(Verdict.NOT_LSPACE, "homology", "det Lambda = 0, so H_1 is infinite")
    graph = is_lspace_graph(surgery_plumbing(link, d1, d2))
    verdict = LsVerdict(graph.verdict, "graph", _graph_certificate(graph))
    if graph.verdict is not Verdict.INDETERMINATE and not cross_check:
        return verdict
    if not hf_complex.in_regime(framing):
        return verdict
    hf = hf_complex.ls_test(h_function(link), framing, margin, power)
    if graph.verdict is Verdict.INDETERMINATE:
        return LsVerdict(hf.verdict, "complex", hf.certificate)
    if hf.verdict is not Verdict.INDETERMINATE and hf.verdict is not graph.verdict:
        raise TesterDisagreement(f"({d1}, {d2}): graph says {graph.verdict}, complex says {hf.verdict}")
    verdict.second_opinion = hf.verdict
    return verdict


# scans


Box = tuple[range, range]


def parse_box(text: str) -> Box:
    """'a:b,c:d' with inclusive ends."""
    try:
        first, second = text.split(",")
        a, b = (int(x) for x in first.split(":"))
        c, d = (int(x) for x in second.split(":"))
    except ValueError as exc:
        raise ValueError(f"box must look like a:b,c:d, got {text!r}") from exc
    return range(a, b + 1), range(c, d + 1)


def _scan_point(args):
    spec, d1, d2, cross_check, margin, power = args
    link = parse_link(spec)
    return (d1, d2), ls_test(link, d1, d2, cross_check, margin, power)


@dataclass
class ScanResult:
    box: Box
    verdicts: dict = field(default_factory=dict)  # (d1, d2) -> LsVerdict

    @property
    def lspace(self) -> set:
        return {p for p, v in self.verdicts.items() if v.verdict is Verdict.LSPACE}

    @property
    def indeterminate(self) -> set:
        return {p for p, v in self.verdicts.items() if v.verdict is Verdict.INDETERMINATE}

    def ascii(self) -> str:
        xs, ys = self.box
        if not len(xs) or not len(ys):
            return ""
        label = max(len(str(y)) for y in ys)
        lines = []
        for y in reversed(ys):
            row = "".join(SYMBOLS[self.verdicts[(x, y)].verdict] for x in xs)
            lines.append(f"{y:>{label}} {row}")
        lines.append(f"{'':>{label}} d1 = {xs[0]}..{xs[-1]} (left to right), d2 = {ys[0]}..{ys[-1]} (bottom to top)")
        lines.append(f"{'':>{label}} ● LSpace  · NotLSpace  ? Indeterminate")
        return "\n".join(lines) + "\n"

    def csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["d1", "d2", "verdict", "route", "certificate"])
        for (x, y), v in sorted(self.verdicts.items()):
            writer.writerow([x, y, v.verdict.value, v.route, v.certificate])
        return out.getvalue()

    def json(self) -> str:
        rows = [
            {"d1": x, "d2": y, "verdict": v.verdict.value, "route": v.route, "certificate": v.certificate}
            for (x, y), v in sorted(self.verdicts.items())
        ]
        return json.dumps({"points": rows}, separators=(",", ":"))

    def render(self, fmt: str) -> str:
        if fmt not in ("ascii", "csv", "json"):
            raise ValueError(f"unknown format {fmt!r}")
        return getattr(self, fmt)()


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("LSLAB_JOBS", "1")))
    except ValueError:
        return 1


def ls_scan(
    link: AlgebraicLink,
    box: Box,
    jobs: int | None = None,
    cross_check: bool = False,
    margin: int | None = None,
    power: int = hf_complex.DEFAULT_POWER,
) -> ScanResult:
    points = [(x, y) for y in box[1] for x in box[0]]
    jobs = jobs or default_jobs()
    result = ScanResult(box)
    if jobs == 1 or len(points) < 2:
        for x, y in points:
            result.verdicts[(x, y)] = ls_test(link, x, y, cross_check, margin, power)
        return result
    spec = link.to_json()
    tasks = [(spec, x, y, cross_check, margin, power) for x, y in points]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for point, verdict in pool.map(_scan_point, tasks, chunksize=8):
            result.verdicts[point] = verdict
    result.verdicts = dict(sorted(result.verdicts.items()))
    return result


# positivity and boundedness


def positivity_bound_check(link: AlgebraicLink, ls_points: Iterable, h: HFunction | None = None) -> bool:
    """With a very good point every L-space surgery has d1, d2 > 0 and d1 d2 > l^2.

    Returns False when no very good point exists (nothing to check).
    """
    h = h or h_function(link)
    if find_very_good(h) is None:
        return False
    for d1, d2 in ls_points:
        if not (d1 > 0 and d2 > 0 and d1 * d2 > link.l ** 2):
            raise BoundViolated(f"L-space surgery ({d1}, {d2}) has a framing matrix that is not positive definite")
    return True


def positivity_bound_check_table(h: HFunction, l: int, ls_points: Iterable) -> bool:
    """The same check for an h-function given as a table."""
    if find_very_good(h) is None:
        return False
    for d1, d2 in ls_points:
        if not (d1 > 0 and d2 > 0 and d1 * d2 > l ** 2):
            raise BoundViolated(f"L-space surgery ({d1}, {d2}) has a framing matrix that is not positive definite")
    return True


def _simple_in_complement(link: AlgebraicLink, keep: str, drop: str) -> bool:
    rest = link.plain_graph.without([drop])
    block = next(c for c in rest.components() if keep in c)
    return is_simple_vertex(block, keep)


@dataclass
class Boundedness:
    bounded: bool
    very_good_point: tuple | None
    incomparable_pair: tuple | None
    simple_witness: str
    conditions: dict  # condition name -> bool

    @property
    def verdict(self) -> str:
        return "BoundedBelow" if self.bounded else "UnboundedBelow"

    def explain(self) -> str:
        lines = [self.verdict]
        lines.append(f"  very good point: {self.very_good_point if self.very_good_point else 'none in [0, c]'}")
        lines.append(f"  incomparable support pair: {self.incomparable_pair if self.incomparable_pair else 'none (ordered type)'}")
        lines.append(f"  simple-vertex test: {self.simple_witness}")
        return "\n".join(lines)


def classify_boundedness(link: AlgebraicLink) -> Boundedness:
    """Bounded below iff a very good point exists iff Delta is not ordered iff the vertex test fails.

    The three conditions are computed on separate routes (value semigroup,
    Alexander polynomial, minimal cycles) and must agree.
    """
    h = h_from_semigroup(ValueSemigroup(link))
    very_good = find_very_good(h)
    pair = incomparable_pair(alexander_from_graph(link))
    if link.parallel:
        vertex_test, witness = False, "parallel: v1 = v2"
    else:
        s1 = _simple_in_complement(link, link.v1, link.v2)
        s2 = _simple_in_complement(link, link.v2, link.v1)
        vertex_test = not s1 and not s2
        if vertex_test:
            witness = "v1 is not simple in the graph without v2, and v2 is not simple in the graph without v1"
        else:
            which = "v1 is simple in the graph without v2" if s1 else "v2 is simple in the graph without v1"
            witness = which
    conditions = {"very_good": very_good is not None, "not_ordered": pair is not None, "vertex_test": vertex_test}
    if len(set(conditions.values())) != 1:
        raise EquivalenceViolation(f"{link.describe()}: {conditions}")
    return Boundedness(conditions["very_good"], very_good, pair, witness, conditions)


# corners and lines

CORNER_PROBES = (-1, -5, -20)


@dataclass
class CornerReport:
    unknot: bool
    simple: bool
    probes: dict  # d2 -> LsVerdict at d1 = m1

    @property
    def corner(self) -> bool:
        return all(v.verdict is Verdict.LSPACE for v in self.probes.values())


def corner_test(link: AlgebraicLink, probes: Sequence[int] = CORNER_PROBES) -> CornerReport:
    """L2 is an unknot iff v2 is simple; probe (m1, d2) for very negative d2."""
    unknot = link.branch2.is_smooth
    simple = is_simple_vertex(link.plain_graph, link.v2)
    if unknot != simple:
        raise EquivalenceViolation(f"{link.describe()}: unknot={unknot} but simple={simple}")
    report = CornerReport(unknot, simple, {d: ls_test(link, link.m1, d) for d in probes})
    if unknot and not report.corner:
        raise EquivalenceViolation(f"{link.describe()}: second component is an unknot but a probe failed")
    return report


def line_verdicts(link: AlgebraicLink, axis: int, value: int, samples: Iterable[int]) -> dict:
    """Verdicts on {value} x samples (axis 1) or samples x {value} (axis 2)."""
    out = {}
    for d in samples:
        point = (value, d) if axis == 1 else (d, value)
        out[d] = ls_test(link, *point)
    return out


@dataclass
class LineReport:
    first: dict  # d2 -> verdict on {m1} x Z
    second: dict  # d1 -> verdict on Z x {m2}

    @property
    def contained(self) -> bool:
        return all(v.verdict is Verdict.LSPACE for v in (*self.first.values(), *self.second.values()))


def parallel_lines(link: AlgebraicLink, samples: Sequence[int]) -> LineReport:
    """For a parallel link both lines through (m1, m2) lie in LS, apart from the point itself."""
    if not link.parallel:
        raise NotParallel(f"{link.describe()} has v1 != v2")
    first = line_verdicts(link, 1, link.m1, [d for d in samples if d != link.m2])
    second = line_verdicts(link, 2, link.m2, [d for d in samples if d != link.m1])
    return LineReport(first, second)


def first_line_unbounded(link: AlgebraicLink) -> bool:
    """v2 simple in the graph without v1 forces {m1} x Z to meet LS in an unbounded-below set."""
    if link.parallel:
        raise ValueError("the vertex test needs v1 != v2")
    return _simple_in_complement(link, link.v2, link.v1)


def summand_orders(link: AlgebraicLink, d1: int, d2: int) -> list[int]:
    """|H_1| of each connected summand of the surgered manifold, sorted."""
    return sorted(abs(determinant(p)) for p in reduce(surgery_plumbing(link, d1, d2)))
