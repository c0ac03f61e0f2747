"""Minimal cycles, Laufer's rationality criterion and surgeries along a vertex."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Mapping

from .graph_core import (
    PlumbingGraph,
    determinant,
    is_negative_definite,
    normalize_negative,
    reduce,
    vertex_key,
)


class NotNegativeDefinite(ValueError):
    pass


class UnknownVertex(KeyError):
    pass


class NotRational(ValueError):
    pass


class Verdict(str, Enum):
    LSPACE = "LSpace"
    NOT_LSPACE = "NotLSpace"
    INDETERMINATE = "Indeterminate"

    def __str__(self):
        return self.value


Cycle = dict  # vertex id -> integer coefficient


def pairing(g: PlumbingGraph, z: Mapping[str, int], v: str) -> int:
    """(z, E_v) for the intersection form of g."""
    total = z.get(v, 0) * g.euler[v]
    for w in g.neighbors(v):
        total += z.get(w, 0)
    return total


def in_lipman_cone(g: PlumbingGraph, z: Mapping[str, int]) -> bool:
    return all(pairing(g, z, v) <= 0 for v in g.euler)


# vertex-choice policies: each picks one vertex from a non-empty candidate list


def lowest_id(candidates, tests):
    return min(candidates, key=vertex_key)


def highest_id(candidates, tests):
    return max(candidates, key=vertex_key)


def largest_test(candidates, tests):
    return min(candidates, key=lambda v: (-tests[v], vertex_key(v)))


POLICIES: dict[str, Callable] = {"lowest": lowest_id, "highest": highest_id, "largest_test": largest_test}


@dataclass
class LauferTrace:
    steps: list = field(default_factory=list)  # (cycle snapshot, chosen vertex, testing number)
    result: Cycle = field(default_factory=dict)

    @property
    def testing_numbers(self) -> list[int]:
        return [t for _, _, t in self.steps]

    def to_dict(self) -> dict:
        return {
            "steps": [{"cycle": dict(sorted(c.items(), key=lambda kv: vertex_key(kv[0]))), "vertex": v, "test": t} for c, v, t in self.steps],
            "result": dict(sorted(self.result.items(), key=lambda kv: vertex_key(kv[0]))),
        }


def cone_closure(g: PlumbingGraph, start: Mapping[str, int], policy: Callable = lowest_id, trace: LauferTrace | None = None) -> Cycle:
    """Smallest element of the Lipman cone that dominates `start`.

    Repeatedly adds E_v at a vertex with positive pairing. The graph must be
    negative definite for this to terminate.
    """
    z = {v: start.get(v, 0) for v in g.euler}
    tests = {v: pairing(g, z, v) for v in g.euler}
    positive = {v for v, t in tests.items() if t > 0}
    while positive:
        v = policy(sorted(positive, key=vertex_key), tests)
        if trace is not None:
            trace.steps.append((dict(z), v, tests[v]))
        z[v] += 1
        for w in (v, *g.neighbors(v)):
            tests[w] += g.euler[v] if w == v else 1
            if tests[w] > 0:
                positive.add(w)
            else:
                positive.discard(w)
    return z


def _require_definite(g: PlumbingGraph):
    if len(g) == 0 or not g.is_connected():
        raise NotNegativeDefinite("expected a non-empty connected graph")
    if not is_negative_definite(g):
        raise NotNegativeDefinite("intersection form is not negative definite")


def minimal_cycle(g: PlumbingGraph, policy: str | Callable = "lowest", start: str | None = None) -> LauferTrace:
    _require_definite(g)
    choose = POLICIES[policy] if isinstance(policy, str) else policy
    first = start if start is not None else choose(g.vertices, {v: 0 for v in g.euler})
    if first not in g:
        raise UnknownVertex(first)
    trace = LauferTrace()
    trace.result = cone_closure(g, {first: 1}, choose, trace)
    return trace


def is_rational(g: PlumbingGraph, trace: LauferTrace | None = None) -> bool:
    trace = trace or minimal_cycle(g)
    return all(t == 1 for t in trace.testing_numbers)


def is_simple_vertex(g: PlumbingGraph, v: str) -> bool:
    if v not in g:
        raise UnknownVertex(v)
    return minimal_cycle(g).result[v] == 1


# L-space verdicts for arbitrary trees


@dataclass
class GraphVerdict:
    verdict: Verdict
    summands: list = field(default_factory=list)  # (graph, verdict, reason)

    def __str__(self):
        return str(self.verdict)


def _definite_summand(piece: PlumbingGraph):
    if is_rational(piece):
        return Verdict.LSPACE, "rational negative definite graph"
    return Verdict.NOT_LSPACE, "negative definite but not rational"


def _summand_verdict(piece: PlumbingGraph, allow_mirror: bool = True):
    if determinant(piece) == 0:
        return Verdict.NOT_LSPACE, "not a rational homology sphere"
    if is_negative_definite(piece):
        return _definite_summand(piece)
    normalized = [c for c in normalize_negative(piece).components() if len(c)]
    results = []
    for part in normalized:
        if determinant(part) == 0:
            results.append((Verdict.NOT_LSPACE, "not a rational homology sphere"))
        elif is_negative_definite(part):
            results.append(_definite_summand(part))
        elif allow_mirror:
            results.append(_summand_verdict(part.mirror(), allow_mirror=False))
        else:
            results.append((Verdict.INDETERMINATE, "no negative definite form reached"))
    return _combine(results)


def _combine(results):
    if not results:
        return Verdict.LSPACE, "3-sphere"
    for verdict in (Verdict.NOT_LSPACE, Verdict.INDETERMINATE):
        for v, reason in results:
            if v is verdict:
                return v, reason
    return Verdict.LSPACE, "; ".join(sorted({r for _, r in results}))


def is_lspace_graph(g: PlumbingGraph) -> GraphVerdict:
    """Decide the L-space property of a plumbed manifold by reducing to rational graphs.

    Summands of a connected sum are decided separately; a summand that cannot be
    brought to a negative definite form in either orientation is Indeterminate.
    """
    pieces = reduce(g.without_arrows())
    summands = []
    for piece in pieces:
        verdict, reason = _summand_verdict(piece)
        summands.append((piece, verdict, reason))
    overall, _ = _combine([(v, r) for _, v, r in summands])
    return GraphVerdict(overall, summands)


# surgery along a vertex


def vertex_surgery_graph(g: PlumbingGraph, v: str, d_prime: int, new_id: str | None = None) -> PlumbingGraph:
    if v not in g:
        raise UnknownVertex(v)
    new_id = new_id or _fresh(g, "new")
    euler = dict(g.euler)
    euler[new_id] = d_prime
    out = PlumbingGraph(euler, g.edges | {frozenset((v, new_id))}, g.arrows)
    expected = -d_prime * determinant(g) - determinant(g.without([v]))
    assert determinant(out) == expected, "vertex surgery determinant identity failed"
    return out


def _fresh(g: PlumbingGraph, base: str) -> str:
    if base not in g:
        return base
    i = 1
    while f"{base}{i}" in g:
        i += 1
    return f"{base}{i}"


def tjurina_nesting(g: PlumbingGraph, v: str) -> list[frozenset]:
    """Nested subgraphs Delta_1 > Delta_2 > ... ending with the empty set.

    Delta_{j+1} is the connected component containing v of the vertices u of
    Delta_j with (Z_min(Delta_j), E_u) = 0.
    """
    chain = []
    current = g
    while True:
        z = minimal_cycle(current).result
        tjurina = {u for u in current.euler if pairing(current, z, u) == 0}
        if v not in tjurina:
            chain.append(frozenset())
            return chain
        block = next(c for c in current.induced(tjurina).components() if v in c)
        chain.append(frozenset(block.euler))
        current = block


@dataclass
class SurgeryRange:
    vertex: str
    simple: bool
    threshold: int | None  # rational for every d' <= -threshold, when simple
    nesting: list

    def describe(self) -> str:
        if self.simple:
            return f"L-space for all d' <= -{self.threshold}"
        return "no L-space surgeries for d' << 0"


def negative_surgery_lspace_range(g: PlumbingGraph, v: str) -> SurgeryRange:
    if v not in g:
        raise UnknownVertex(v)
    if not is_rational(g):
        raise NotRational("the base graph must be rational")
    if not is_simple_vertex(g, v):
        return SurgeryRange(v, False, None, [])
    nesting = tjurina_nesting(g, v)
    return SurgeryRange(v, True, len(nesting), nesting)


def vertex_surgery_verdict(g: PlumbingGraph, v: str, d_prime: int) -> Verdict:
    return is_lspace_graph(vertex_surgery_graph(g, v, d_prime)).verdict


def lspace_vertex_surgeries(g: PlumbingGraph, v: str, probe: Iterable[int]) -> dict[int, Verdict]:
    """Verdicts for Gamma_{d'} at every probed d'."""
    return {d: vertex_surgery_verdict(g, v, d) for d in probe}
