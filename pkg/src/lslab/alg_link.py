"""Two-branch plane curve singularities built from Newton pairs.

A branch is a list of Newton pairs (p, q). The first pair is read in the
original coordinates, so q > p > 1 (the branch is tangent to the x-axis, and a
curve with q < p is the same branch in swapped coordinates). Every later pair
is the local pair at a free point of the previous node divisor, which gives the
splice decorations a_1 = q_1 and a_{i+1} = q_{i+1} + p_i p_{i+1} a_i.

How the two branches sit relative to each other:

* family "I" with n: the branches share their first n pairs and then pass
  through distinct free points of the n-th node divisor. n = 0 means they
  have different tangent lines (transversal), i.e. they separate on the
  divisor of the first blow-up.
* family "II" with n >= 1: the branches share their first n - 1 pairs and
  their n-th local pairs have different slopes q/p. Family "II" with n = 0 is
  accepted as another name for the transversal case.

The embedded resolution graph is produced by toric modifications: in a chart
whose axes are an existing divisor (or a coordinate line) and a curvette,
rays are inserted by Stern-Brocot mediants until every requested (p, q) ray
exists. Each mediant is one point blow-up.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod
from typing import Mapping, Sequence

from .graph_core import Arrow, PlumbingGraph, determinant, multiplicity_matrix, path_multiplicity


class InvalidNewtonPairs(ValueError):
    pass


class NonAlgebraicConfiguration(ValueError):
    pass


@dataclass(frozen=True)
class BranchSpec:
    pairs: tuple = ()

    def __post_init__(self):
        pairs = tuple((int(p), int(q)) for p, q in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        for i, (p, q) in enumerate(pairs):
            if p < 2 or q < 1:
                raise InvalidNewtonPairs(f"pair {i + 1} = ({p},{q}) needs p >= 2 and q >= 1")
            if gcd(p, q) != 1:
                raise InvalidNewtonPairs(f"pair {i + 1} = ({p},{q}) is not coprime")
        if pairs and pairs[0][1] <= pairs[0][0]:
            p, q = pairs[0]
            raise InvalidNewtonPairs(f"first pair ({p},{q}) must have q > p; swap it to ({q},{p})")

    @classmethod
    def parse(cls, data) -> "BranchSpec":
        try:
            return cls(tuple(tuple(x) for x in data))
        except (TypeError, ValueError) as exc:
            if isinstance(exc, InvalidNewtonPairs):
                raise
            raise InvalidNewtonPairs(f"cannot read Newton pairs from {data!r}") from exc

    def __len__(self):
        return len(self.pairs)

    @property
    def is_smooth(self) -> bool:
        return not self.pairs

    def splice_decorations(self) -> list[tuple[int, int]]:
        """(p_i, a_i) for every node of the branch."""
        out = []
        for i, (p, q) in enumerate(self.pairs):
            a = q if i == 0 else q + out[-1][0] * p * out[-1][1]
            out.append((p, a))
        return out

    def semigroup_generators(self) -> list[int]:
        """beta_0, ..., beta_g: the minimal generators of the value semigroup."""
        dec = self.splice_decorations()
        if not dec:
            return [1]
        ps = [p for p, _ in dec]
        gens = [prod(ps)]
        for i, (_, a) in enumerate(dec):
            gens.append(a * prod(ps[i + 1:]))
        return gens

    def milnor_number(self) -> int:
        """mu = sum (p_i - 1) a_i p_{i+1}...p_g - p_1...p_g + 1; zero for a smooth branch."""
        dec = self.splice_decorations()
        if not dec:
            return 0
        ps = [p for p, _ in dec]
        total = sum((p - 1) * a * prod(ps[i + 1:]) for i, (p, a) in enumerate(dec))
        return total - prod(ps) + 1


# numerical semigroups


@dataclass(frozen=True)
class NumericalSemigroup:
    """A cofinite submonoid of the non-negative integers, stored below its conductor."""

    small: frozenset  # elements strictly below the conductor
    conductor: int

    def __contains__(self, s: int) -> bool:
        return s >= self.conductor or (s >= 0 and s in self.small)

    def elements(self, upto: int) -> list[int]:
        return [s for s in range(upto + 1) if s in self]

    @property
    def gaps(self) -> list[int]:
        return [s for s in range(self.conductor) if s not in self.small]

    @property
    def generators(self) -> list[int]:
        out = []
        for s in range(1, self.conductor + max(out + [1]) + 1):
            if s in self and not any(s - g in self and s - g > 0 for g in out):
                out.append(s)
        return out

    @classmethod
    def generated_by(cls, gens: Sequence[int]) -> "NumericalSemigroup":
        gens = sorted(set(gens))
        if gens == [1] or not gens:
            return cls(frozenset(), 0)
        bound = gens[0] * gens[-1] + 1
        reach = [False] * (bound + 1)
        reach[0] = True
        for s in range(1, bound + 1):
            reach[s] = any(s >= g and reach[s - g] for g in gens)
        conductor = bound
        while conductor > 0 and reach[conductor - 1]:
            conductor -= 1
        return cls(frozenset(s for s in range(conductor) if reach[s]), conductor)


# resolution graph construction


class _Resolution:
    def __init__(self):
        self.euler: dict[str, int] = {}
        self.edges: set = set()
        self.kind: dict[str, str] = {}

    def new_vertex(self, kind: str) -> str:
        vid = f"v{len(self.euler) + 1}"
        self.euler[vid] = -1
        self.kind[vid] = kind
        return vid

    def blow_up_point(self, a: str | None, b: str | None, kind: str) -> str:
        """Blow up the intersection point of a and b (None stands for a curvette)."""
        new = self.new_vertex(kind)
        for x in (a, b):
            if x is not None:
                self.euler[x] -= 1
                self.edges.add(frozenset((x, new)))
        if a is not None and b is not None:
            self.edges.discard(frozenset((a, b)))
        return new

    def toric(self, base: str | None, targets: Sequence[tuple[int, int]]) -> dict[tuple[int, int], str]:
        """Toric modification at a fresh free point of `base` (or at the origin if None).

        Ray (1,0) is `base`, ray (0,1) a curvette. Returns the divisor of every target ray.
        """
        rays = [((1, 0), base), ((0, 1), None)]
        found = {}
        for target in targets:
            while True:
                hit = next((d for r, d in rays if r == target), "missing")
                if hit != "missing":
                    found[target] = hit
                    break
                for i in range(len(rays) - 1):
                    (a, da), (b, db) = rays[i], rays[i + 1]
                    if a[0] * target[1] - a[1] * target[0] > 0 and target[0] * b[1] - target[1] * b[0] > 0:
                        m = (a[0] + b[0], a[1] + b[1])
                        rays.insert(i + 1, (m, self.blow_up_point(da, db, "toric")))
                        break
                else:
                    raise AssertionError(f"ray {target} lies outside the chart")
        return found


def _local_pair(pairs, i, from_first_divisor: bool):
    p, q = pairs[i]
    if i == 0 and from_first_divisor:
        return (p, q - p)
    return (p, q)


def _continue_branch(res: _Resolution, base: str, pairs, start: int, from_first_divisor: bool) -> str:
    """Resolve pairs[start:] starting at a free point of `base`; returns the last node."""
    node = base
    for i in range(start, len(pairs)):
        target = _local_pair(pairs, i, from_first_divisor and node == base and i == start)
        node = res.toric(node, [target])[target]
        res.kind[node] = "node"
    return node


def _build_resolution(b1: BranchSpec, b2: BranchSpec, family: str, n: int):
    res = _Resolution()
    p1, p2 = b1.pairs, b2.pairs
    transversal = n == 0
    if transversal:
        first = res.blow_up_point(None, None, "first")
        ends = [
            _continue_branch(res, first, p1, 0, True) if p1 else first,
            _continue_branch(res, first, p2, 0, True) if p2 else first,
        ]
        return res, ends
    if b1.is_smooth or b2.is_smooth:
        raise NonAlgebraicConfiguration("a smooth branch is only supported transversal to the other (n = 0)")
    if family == "I":
        if len(p1) < n or len(p2) < n or p1[:n] != p2[:n]:
            raise NonAlgebraicConfiguration(f"family I with n={n} needs both branches to share their first {n} pairs")
        node = None
        for i in range(n):
            target = p1[i]
            node = res.toric(node, [target])[target]
            res.kind[node] = "node"
        ends = [_continue_branch(res, node, p, n, False) for p in (p1, p2)]
        return res, ends
    if family == "II":
        if len(p1) < n or len(p2) < n or p1[: n - 1] != p2[: n - 1]:
            raise NonAlgebraicConfiguration(f"family II with n={n} needs both branches to share their first {n - 1} pairs")
        if Fraction(p1[n - 1][1], p1[n - 1][0]) == Fraction(p2[n - 1][1], p2[n - 1][0]):
            raise NonAlgebraicConfiguration(f"family II needs different slopes at pair {n}")
        node = None
        for i in range(n - 1):
            target = p1[i]
            node = res.toric(node, [target])[target]
            res.kind[node] = "node"
        split = res.toric(node, [p1[n - 1], p2[n - 1]])
        ends = []
        for p in (p1, p2):
            start = split[p[n - 1]]
            res.kind[start] = "node"
            ends.append(_continue_branch(res, start, p, n, False))
        return res, ends
    raise NonAlgebraicConfiguration(f"unknown family {family!r}")


# splice diagram


@dataclass
class SpliceDiagram:
    """Nodes and leaves of the resolution tree with the edge determinants at each node.

    An edge at a node is keyed by the neighboring graph vertex, or by the arrow
    label for an arrowhead; its weight is the determinant of the part of the
    graph cut off in that direction.
    """

    graph: PlumbingGraph
    nodes: list
    leaves: list
    weights: dict = field(default_factory=dict)  # (node, key) -> determinant
    edges: list = field(default_factory=list)  # (node, key, node, key) between adjacent nodes

    @classmethod
    def from_graph(cls, g: PlumbingGraph) -> "SpliceDiagram":
        plain = g.without_arrows()
        special = {v for v in g.vertices if g.valency(v, with_arrows=True) != 2 or g.valency(v) < 2}
        nodes = [v for v in g.vertices if g.valency(v, with_arrows=True) >= 3]
        leaves = [v for v in g.vertices if g.valency(v, with_arrows=True) == 1 and g.valency(v) == 1]
        diagram = cls(g, nodes, leaves)
        for v in nodes:
            for w in g.neighbors(v):
                diagram.weights[(v, w)] = determinant(plain, _side(plain, v, w))
                chain = _chain(g, v, w, special)
                end = chain[-1]
                if end in nodes and v < end:
                    back = chain[-2] if len(chain) > 1 else v
                    diagram.edges.append((v, w, end, back))
            for a in g.arrows:
                if a.at == v:
                    diagram.weights[(v, a.label)] = 1
        return diagram

    def keys(self, v: str) -> list[str]:
        return sorted(self.graph.neighbors(v)) + [a.label for a in self.graph.arrows if a.at == v]

    def multiplicity(self, u: str, label: str) -> int:
        """Product of the edge weights adjacent to, but not on, the path from u to an arrowhead."""
        path = self.graph.tree_path(u, self.graph.arrow_vertex(label))
        total = 1
        for i, w in enumerate(path):
            if w not in self.nodes:
                continue
            on = {path[i - 1]} if i > 0 else set()
            on.add(path[i + 1] if i + 1 < len(path) else label)
            total *= prod(self.weights[(w, k)] for k in self.keys(w) if k not in on)
        return total

    def edge_inequalities(self) -> list[tuple[str, str, bool]]:
        """For adjacent nodes: product of the two edge weights exceeds the product of the others."""
        out = []
        for a, ka, b, kb in self.edges:
            on_edge = self.weights[(a, ka)] * self.weights[(b, kb)]
            others = prod(self.weights[(a, k)] for k in self.keys(a) if k != ka)
            others *= prod(self.weights[(b, k)] for k in self.keys(b) if k != kb)
            out.append((a, b, on_edge > others))
        return out


def _chain(g: PlumbingGraph, v: str, w: str, special) -> list[str]:
    """Vertices met walking from v through w until a vertex of `special`."""
    out, prev, cur = [], v, w
    while True:
        out.append(cur)
        if cur in special:
            return out
        nxt = [x for x in g.neighbors(cur) if x != prev]
        prev, cur = cur, nxt[0]


def _side(g: PlumbingGraph, v: str, w: str) -> set:
    seen, stack = {w}, [w]
    while stack:
        x = stack.pop()
        for y in g.neighbors(x):
            if y != v and y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def branch_graph(branch: BranchSpec) -> PlumbingGraph:
    """Minimal embedded resolution of a single branch, with arrow "L"."""
    res = _Resolution()
    if branch.is_smooth:
        v = res.blow_up_point(None, None, "first")
    else:
        p, q = branch.pairs[0]
        v = res.toric(None, [(p, q)])[(p, q)]
        v = _continue_branch(res, v, branch.pairs, 1, False)
    return PlumbingGraph(res.euler, frozenset(res.edges), (Arrow("L", v),))



# the link


@dataclass
class AlgebraicLink:
    branch1: BranchSpec
    branch2: BranchSpec
    family: str
    n: int
    graph: PlumbingGraph  # resolution graph with arrows "L1", "L2"
    v1: str
    v2: str
    multiplicities: dict
    splice: SpliceDiagram
    mu1: int
    mu2: int
    l: int
    m1: int
    m2: int

    @property
    def parallel(self) -> bool:
        return self.v1 == self.v2

    @property
    def g1(self) -> int:
        return self.mu1 // 2

    @property
    def g2(self) -> int:
        return self.mu2 // 2

    @property
    def c(self) -> tuple[int, int]:
        return (self.mu1 + self.l, self.mu2 + self.l)

    @property
    def degenerate(self) -> tuple[bool, bool]:
        """Branch i has exactly n pairs, so its arrow sits on the n-th shared node."""
        return (self.n > 0 and len(self.branch1) == self.n, self.n > 0 and len(self.branch2) == self.n)

    @property
    def minus_one_support(self) -> tuple[bool, bool]:
        return (self.graph.euler[self.v1] == -1, self.graph.euler[self.v2] == -1)

    @property
    def support_eulers(self) -> tuple[int, int]:
        return (self.graph.euler[self.v1], self.graph.euler[self.v2])

    @property
    def plain_graph(self) -> PlumbingGraph:
        return self.graph.without_arrows()

    def m(self, u: str, i: int) -> int:
        """m_{u v_i}: multiplicity of branch i along the divisor of u."""
        return self.multiplicities[u][self.v1 if i == 1 else self.v2]

    def to_dict(self) -> dict:
        return {
            "branch1": [list(p) for p in self.branch1.pairs],
            "branch2": [list(p) for p in self.branch2.pairs],
            "family": self.family,
            "n": self.n,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def describe(self) -> str:
        b = lambda s: "smooth" if s.is_smooth else ",".join(f"({p},{q})" for p, q in s.pairs)
        return f"[{b(self.branch1)}] + [{b(self.branch2)}] family {self.family} n={self.n}"


def build(branch1, branch2, family: str = "I", n: int = 0) -> AlgebraicLink:
    b1 = branch1 if isinstance(branch1, BranchSpec) else BranchSpec.parse(branch1)
    b2 = branch2 if isinstance(branch2, BranchSpec) else BranchSpec.parse(branch2)
    family = str(family).upper()
    if family not in ("I", "II"):
        raise NonAlgebraicConfiguration(f"family must be I or II, not {family!r}")
    n = int(n)
    if n < 0:
        raise NonAlgebraicConfiguration("n must be non-negative")
    res, (v1, v2) = _build_resolution(b1, b2, family, n)
    graph = PlumbingGraph(res.euler, frozenset(res.edges), (Arrow("L1", v1), Arrow("L2", v2)))
    plain = graph.without_arrows()
    det = determinant(plain)
    if det != 1:
        raise AssertionError(f"resolution graph has determinant {det}, expected 1")
    mult = multiplicity_matrix(plain)
    splice = SpliceDiagram.from_graph(graph)
    _check_splice(graph, splice, mult, v1, v2)
    l = mult[v1][v2]
    assert l == path_multiplicity(plain, v1, v2)
    m1 = determinant(plain.without([v1]))
    m2 = determinant(plain.without([v2]))
    return AlgebraicLink(b1, b2, family, n, graph, v1, v2, mult, splice, b1.milnor_number(), b2.milnor_number(), l, m1, m2)


def _check_splice(graph, splice: SpliceDiagram, mult, v1, v2):
    """Cross-check splice-diagram products and edge inequalities against -I^{-1}."""
    for u in splice.nodes + splice.leaves:
        for label, v in (("L1", v1), ("L2", v2)):
            if splice.multiplicity(u, label) != mult[u][v]:
                raise AssertionError(f"splice product disagrees with -I^-1 at {u}, {label}")
    for a, b, ok in splice.edge_inequalities():
        if not ok:
            raise NonAlgebraicConfiguration(f"edge inequality fails between nodes {a} and {b}")


def parse_link(data: Mapping | str) -> AlgebraicLink:
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, Mapping):
        raise InvalidNewtonPairs("link spec must be a JSON object")
    missing = [k for k in ("branch1", "branch2") if k not in data]
    if missing:
        raise InvalidNewtonPairs(f"link spec lacks field(s): {', '.join(missing)}")
    return build(data["branch1"], data["branch2"], data.get("family", "I"), data.get("n", 0))


def linking_number(link: AlgebraicLink) -> int:
    return link.l


def m_slopes(link: AlgebraicLink) -> tuple[int, int]:
    return (link.m1, link.m2)


def branch_semigroup(branch) -> NumericalSemigroup:
    """Semigroup read off Delta(t)/(1 - t), Delta from the one-branch diagram."""
    from .alexander import branch_alexander

    b = branch if isinstance(branch, BranchSpec) else BranchSpec.parse(branch)
    delta = branch_alexander(b)
    mu = max(delta, default=0)
    series, running = {}, 0
    for s in range(mu):
        running += delta.get(s, 0)
        series[s] = running
    if any(x not in (0, 1) for x in series.values()):
        raise AssertionError("Delta/(1-t) must have 0/1 coefficients below the conductor")
    return NumericalSemigroup(frozenset(s for s, x in series.items() if x == 1), mu)
