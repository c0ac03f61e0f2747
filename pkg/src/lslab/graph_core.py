"""Plumbing graphs with exact intersection-form arithmetic.

Vertex ids are strings. The intersection form I has the Euler numbers on the
diagonal and 1 for every edge; all determinants are of -I, so a negative
definite graph has positive determinant and the empty graph has determinant 1.
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence


class SingularForm(ValueError):
    """The intersection form is degenerate, so it has no inverse."""


class BadDecomposition(ValueError):
    """The two vertices do not cut the graph into the three-block pattern."""


class NotATree(ValueError):
    """Path-based formulas are only defined on forests."""


@lru_cache(maxsize=65536)
def vertex_key(vid: str):
    """Natural sort key, so that "v2" comes before "v10"."""
    return tuple((0, int(tok)) if tok.isdigit() else (1, tok) for tok in re.findall(r"\d+|\D+", vid))


@dataclass(frozen=True)
class Arrow:
    label: str
    at: str


@dataclass(frozen=True, eq=False)
class PlumbingGraph:
    euler: Mapping[str, int]
    edges: frozenset = frozenset()
    arrows: tuple = ()
    _adj: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        euler = {str(k): int(v) for k, v in self.euler.items()}
        adj = {v: set() for v in euler}
        edges = set()
        for e in self.edges:
            a, b = tuple(e)
            if a == b:
                raise ValueError(f"loop at {a}")
            if a not in euler or b not in euler:
                raise ValueError(f"edge {a}-{b} uses an unknown vertex")
            edges.add(frozenset((a, b)))
            adj[a].add(b)
            adj[b].add(a)
        arrows = tuple(sorted((a if isinstance(a, Arrow) else Arrow(*a) for a in self.arrows), key=lambda a: a.label))
        for a in arrows:
            if a.at not in euler:
                raise ValueError(f"arrow {a.label} sits on unknown vertex {a.at}")
        object.__setattr__(self, "euler", euler)
        object.__setattr__(self, "edges", frozenset(edges))
        object.__setattr__(self, "arrows", arrows)
        object.__setattr__(self, "_adj", {v: frozenset(n) for v, n in adj.items()})

    @classmethod
    def from_data(cls, vertices: Iterable[tuple[str, int]], edges: Iterable[Sequence[str]] = (), arrows=()):
        return cls(dict(vertices), frozenset(frozenset(e) for e in edges), tuple(arrows))

    @classmethod
    def chain(cls, eulers: Sequence[int], prefix: str = "v") -> "PlumbingGraph":
        ids = [f"{prefix}{i + 1}" for i in range(len(eulers))]
        return cls.from_data(zip(ids, eulers), zip(ids, ids[1:]))

    # basic structure

    @property
    def vertices(self) -> list[str]:
        return sorted(self.euler, key=vertex_key)

    def __len__(self):
        return len(self.euler)

    def __contains__(self, vid):
        return vid in self.euler

    def __eq__(self, other):
        if not isinstance(other, PlumbingGraph):
            return NotImplemented
        return (self.euler, self.edges, self.arrows) == (other.euler, other.edges, other.arrows)

    def __hash__(self):
        return hash((tuple(sorted(self.euler.items())), self.edges, self.arrows))

    def neighbors(self, vid: str) -> frozenset:
        return self._adj[vid]

    def valency(self, vid: str, with_arrows: bool = False) -> int:
        n = len(self._adj[vid])
        if with_arrows:
            n += sum(1 for a in self.arrows if a.at == vid)
        return n

    def arrow_vertex(self, label: str) -> str:
        for a in self.arrows:
            if a.label == label:
                return a.at
        raise KeyError(label)

    def induced(self, ids: Iterable[str]) -> "PlumbingGraph":
        keep = set(ids)
        return PlumbingGraph(
            {v: self.euler[v] for v in keep},
            frozenset(e for e in self.edges if e <= keep),
            tuple(a for a in self.arrows if a.at in keep),
        )

    def without(self, ids: Iterable[str]) -> "PlumbingGraph":
        drop = set(ids)
        return self.induced(v for v in self.euler if v not in drop)

    def with_euler(self, changes: Mapping[str, int]) -> "PlumbingGraph":
        euler = dict(self.euler)
        euler.update(changes)
        return PlumbingGraph(euler, self.edges, self.arrows)

    def without_arrows(self) -> "PlumbingGraph":
        return PlumbingGraph(self.euler, self.edges, ())

    def mirror(self) -> "PlumbingGraph":
        """Orientation reversal of a tree: negate every Euler number."""
        return PlumbingGraph({v: -e for v, e in self.euler.items()}, self.edges, self.arrows)

    def components(self) -> list["PlumbingGraph"]:
        seen, out = set(), []
        for start in self.vertices:
            if start in seen:
                continue
            comp, queue = {start}, deque([start])
            while queue:
                x = queue.popleft()
                for y in self._adj[x]:
                    if y not in comp:
                        comp.add(y)
                        queue.append(y)
            seen |= comp
            out.append(self.induced(comp))
        return out

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def is_forest(self) -> bool:
        return len(self.edges) == len(self.euler) - len(self.components())

    def tree_path(self, u: str, v: str) -> list[str]:
        """Vertices of the unique path from u to v, endpoints included."""
        if not self.is_forest():
            raise NotATree("path formulas need a tree-shaped graph")
        prev = {u: None}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            if x == v:
                break
            for y in sorted(self._adj[x], key=vertex_key):
                if y not in prev:
                    prev[y] = x
                    queue.append(y)
        if v not in prev:
            raise ValueError(f"{u} and {v} lie in different components")
        path = [v]
        while path[-1] != u:
            path.append(prev[path[-1]])
        return path[::-1]

    def matrix(self, order: Sequence[str] | None = None) -> list[list[int]]:
        """Intersection matrix I in the given vertex order."""
        order = self.vertices if order is None else list(order)
        pos = {v: i for i, v in enumerate(order)}
        rows = [[0] * len(order) for _ in order]
        for v, i in pos.items():
            rows[i][i] = self.euler[v]
            for w in self._adj[v]:
                if w in pos:
                    rows[i][pos[w]] = 1
        return rows

    # serialization

    def to_dict(self) -> dict:
        return {
            "vertices": [{"id": v, "e": self.euler[v]} for v in self.vertices],
            "edges": sorted((sorted(e, key=vertex_key) for e in self.edges), key=lambda p: (vertex_key(p[0]), vertex_key(p[1]))),
            "arrows": [{"label": a.label, "at": a.at} for a in self.arrows],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: Mapping) -> "PlumbingGraph":
        try:
            verts = [(str(v["id"]), int(v["e"])) for v in data["vertices"]]
            edges = [tuple(map(str, e)) for e in data.get("edges", [])]
            arrows = [Arrow(str(a["label"]), str(a["at"])) for a in data.get("arrows", [])]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed graph data: {exc}") from exc
        if len({v for v, _ in verts}) != len(verts):
            raise ValueError("duplicate vertex id")
        if any(len(e) != 2 for e in edges):
            raise ValueError("edges must be pairs")
        if len({frozenset(e) for e in edges}) != len(edges):
            raise ValueError("multiple edges between the same vertices")
        return cls.from_data(verts, edges, arrows)

    @classmethod
    def from_json(cls, text: str) -> "PlumbingGraph":
        return cls.from_dict(json.loads(text))


# determinants


def bareiss_determinant(rows: Sequence[Sequence[int]]) -> int:
    """Fraction-free Gaussian elimination; every division is exact."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def cofactor_determinant(rows: Sequence[Sequence[int]]) -> int:
    """Laplace expansion along the first row. Exponential; used as an oracle on small inputs."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    for j, x in enumerate(rows[0]):
        if x:
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            total += (-1) ** j * x * cofactor_determinant(minor)
    return total


def determinant(g: PlumbingGraph, subset: Iterable[str] | None = None) -> int:
    """det(-I) of the graph, or of the full subgraph on `subset`."""
    order = g.vertices if subset is None else sorted(set(subset), key=vertex_key)
    m = g.matrix(order)
    return bareiss_determinant([[-x for x in row] for row in m])


def is_negative_definite(g: PlumbingGraph) -> bool:
    neg = [[-x for x in row] for row in g.matrix()]
    return all(bareiss_determinant([r[:k] for r in neg[:k]]) > 0 for k in range(1, len(neg) + 1))


def _invert(rows: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(rows)
    aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if piv is None:
            raise SingularForm("intersection form is degenerate")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    return [r[n:] for r in aug]


def multiplicity_matrix(g: PlumbingGraph) -> dict[str, dict[str, Fraction | int]]:
    """Entries of -I^{-1}, keyed by vertex ids. Integral entries are returned as ints."""
    order = g.vertices
    inv = _invert(g.matrix(order))
    out = {}
    for i, u in enumerate(order):
        out[u] = {}
        for j, v in enumerate(order):
            x = -inv[i][j]
            out[u][v] = int(x) if x.denominator == 1 else x
    return out


def path_multiplicity(g: PlumbingGraph, u: str, v: str) -> int:
    """det of the graph with the u-v path removed; equals m_uv when det(g) = 1."""
    return determinant(g.without(g.tree_path(u, v)))


# the three-block decomposition around two vertices


@dataclass(frozen=True)
class Decomposition:
    left: frozenset
    middle: frozenset
    right: frozenset
    a: int
    p: int
    a_prime: int
    p_prime: int
    gap: int

    def holds(self, g: PlumbingGraph) -> bool:
        lhs = determinant(g, self.middle) * determinant(g)
        return lhs == self.a_prime * self.p - self.a * self.p_prime * self.gap ** 2


def decompose(g: PlumbingGraph, u: str, v: str) -> Decomposition:
    for x in (u, v):
        if x not in g:
            raise BadDecomposition(f"unknown vertex {x}")
    if u == v:
        raise BadDecomposition("the two cut vertices must differ")
    if not g.is_connected() or not g.is_forest():
        raise BadDecomposition("decomposition needs a connected tree")
    path = g.tree_path(u, v)
    interior = set(path[1:-1])
    rest = g.without([u, v])
    left, middle, right = set(), set(), set()
    for comp in rest.components():
        ids = set(comp.euler)
        touches_u = any(u in g.neighbors(x) for x in ids)
        touches_v = any(v in g.neighbors(x) for x in ids)
        if touches_u and touches_v:
            middle |= ids
        elif touches_u:
            left |= ids
        else:
            right |= ids
    if interior and not interior <= middle:
        raise BadDecomposition("path between the cut vertices leaves the middle block")
    return Decomposition(
        left=frozenset(left),
        middle=frozenset(middle),
        right=frozenset(right),
        a=determinant(g, left),
        p=determinant(g, middle | right | {v}),
        a_prime=determinant(g, middle | left | {u}),
        p_prime=determinant(g, right),
        gap=determinant(g, middle - interior),
    )


def determinant_decomposition_check(g: PlumbingGraph, u: str, v: str) -> bool:
    return decompose(g, u, v).holds(g)


# plumbing calculus


def _fresh_id(g: PlumbingGraph, base: str) -> str:
    i = 1
    while f"{base}{i}" in g:
        i += 1
    return f"{base}{i}"


def _blow_down(g: PlumbingGraph, v: str) -> PlumbingGraph:
    sign = g.euler[v]
    nbrs = sorted(g.neighbors(v), key=vertex_key)
    h = g.without([v]).with_euler({w: g.euler[w] - sign for w in nbrs})
    if len(nbrs) == 2:
        h = PlumbingGraph(h.euler, h.edges | {frozenset(nbrs)}, h.arrows)
    return h


def _absorb_zero_chain(g: PlumbingGraph, v: str) -> PlumbingGraph:
    a, b = sorted(g.neighbors(v), key=vertex_key)
    merged = (set(g.neighbors(a)) | set(g.neighbors(b))) - {v, a, b}
    h = g.without([v, b]).with_euler({a: g.euler[a] + g.euler[b]})
    edges = {e for e in h.edges if a not in e} | {frozenset((a, w)) for w in merged}
    arrows = tuple(Arrow(x.label, a if x.at == b else x.at) for x in h.arrows + tuple(x for x in g.arrows if x.at == b))
    return PlumbingGraph(h.euler, frozenset(edges), arrows)


def _movable(g: PlumbingGraph, v: str) -> bool:
    return all(a.at != v for a in g.arrows)


def reduce_step(g: PlumbingGraph):
    """One plumbing move, or None at a fixpoint. Returns (name, vertex, graph)."""
    for v in g.vertices:
        if not _movable(g, v):
            continue
        e, k = g.euler[v], g.valency(v)
        if e in (1, -1) and k <= 2:
            return "blow_down", v, _blow_down(g, v)
    for v in g.vertices:
        if not _movable(g, v) or g.euler[v] != 0:
            continue
        k = g.valency(v)
        if k == 2:
            a, b = g.neighbors(v)
            if g.is_forest() and _movable(g, b):
                return "absorb_zero_chain", v, _absorb_zero_chain(g, v)
        if k == 1:
            (w,) = g.neighbors(v)
            if _movable(g, w) and g.is_forest():
                return "split_zero_leaf", v, g.without([v, w])
    return None


def reduce(g: PlumbingGraph) -> list[PlumbingGraph]:
    """Apply blow-downs, 0-chain absorption and 0-leaf splitting until none applies.

    The result is the list of connected summands; summands that reduce to the
    empty graph (the 3-sphere) are dropped.
    """
    current = g
    while True:
        step = reduce_step(current)
        if step is None:
            break
        current = step[2]
    return [c for c in current.components() if len(c)]


def unfold_positive(g: PlumbingGraph) -> PlumbingGraph | None:
    """Replace one positive vertex of valency <= 2 by a chain of (-2)-vertices.

    A leaf +k on u becomes u with Euler number lowered by one and a tail of
    k-1 vertices of weight -2; a +k vertex between a and b becomes such a chain
    between a and b, both lowered by one. Returns None if no vertex qualifies.
    """
    for v in g.vertices:
        k = g.euler[v]
        if k < 1 or g.valency(v) > 2 or not _movable(g, v) or not g.is_forest():
            continue
        nbrs = sorted(g.neighbors(v), key=vertex_key)
        h = g.without([v]).with_euler({w: g.euler[w] - 1 for w in nbrs})
        euler, edges = dict(h.euler), set(h.edges)
        chain = []
        for _ in range(k - 1):
            vid = _fresh_id(PlumbingGraph(euler), v + "_")
            euler[vid] = -2
            chain.append(vid)
        ends = chain or []
        for x, y in zip(chain, chain[1:]):
            edges.add(frozenset((x, y)))
        if len(nbrs) == 1 and ends:
            edges.add(frozenset((nbrs[0], ends[0])))
        elif len(nbrs) == 2:
            if ends:
                edges.add(frozenset((nbrs[0], ends[0])))
                edges.add(frozenset((ends[-1], nbrs[1])))
            else:
                edges.add(frozenset(nbrs))
        return PlumbingGraph(euler, frozenset(edges), h.arrows)
    return None


def normalize_negative(g: PlumbingGraph, limit: int = 10_000) -> PlumbingGraph:
    """Unfold positive vertices and reduce, repeatedly, within each connected piece."""
    current = g
    for _ in range(limit):
        nxt = unfold_positive(current)
        if nxt is None:
            return current
        pieces = reduce(nxt)
        current = disjoint_union(pieces)
    raise RuntimeError("positive-vertex unfolding did not terminate")


def disjoint_union(pieces: Sequence[PlumbingGraph]) -> PlumbingGraph:
    euler, edges, arrows = {}, set(), []
    for i, p in enumerate(pieces):
        rename = {v: (v if v not in euler else f"{v}#{i}") for v in p.euler}
        for v, e in p.euler.items():
            euler[rename[v]] = e
        edges |= {frozenset(rename[x] for x in e) for e in p.edges}
        arrows += [Arrow(a.label, rename[a.at]) for a in p.arrows]
    return PlumbingGraph(euler, frozenset(edges), tuple(arrows))
