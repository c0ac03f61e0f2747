"""h-functions of two-component L-space links and good / very good points.

Three providers share one interface: the value semigroup of an algebraic link
(computed on its resolution graph), the Alexander polynomial (closed form), and
an explicit table for links that are not algebraic.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

from .alexander import BivariatePolynomial, alexander_from_graph, incomparable_pair
from .alg_link import AlgebraicLink, branch_semigroup


class InconsistentSemigroup(AssertionError):
    pass


class StabilizationMissing(ValueError):
    pass


Point = tuple[int, int]


# value semigroup of an algebraic link


class ValueSemigroup:
    """The semigroup S_C of value pairs, decided on the resolution graph.

    For a target T the filtration piece F(T) = {f : nu(f) >= T} has a generic
    element whose exceptional part is the smallest cycle Z of the Lipman cone
    of the graph extended by long blow-up chains along both branches. The chain
    along branch i is never materialized: while Z at the support vertex is below
    T_i the chain adds 1 to the pairing there, otherwise nothing. The generic
    values are nu(T)_i = max(Z_{v_i}, T_i); T lies in S_C iff nu(T) = T.
    """

    def __init__(self, link: AlgebraicLink):
        g = link.plain_graph
        self.link = link
        self.order = g.vertices
        index = {v: i for i, v in enumerate(self.order)}
        self.euler = [g.euler[v] for v in self.order]
        self.adj = [[index[w] for w in g.neighbors(v)] for v in self.order]
        self.s1, self.s2 = index[link.v1], index[link.v2]
        self._cache: dict[Point, tuple] = {}

    def _pairing(self, z, u, target) -> int:
        total = self.euler[u] * z[u] + sum(z[w] for w in self.adj[u])
        if u == self.s1 and z[u] < target[0]:
            total += 1
        if u == self.s2 and z[u] < target[1]:
            total += 1
        return total

    def closure(self, target: Point) -> tuple:
        target = (max(target[0], 0), max(target[1], 0))
        if target in self._cache:
            return self._cache[target]
        z = [0] * len(self.order)
        for prev in ((target[0] - 1, target[1]), (target[0], target[1] - 1)):
            if prev in self._cache:
                z = [max(a, b) for a, b in zip(z, self._cache[prev])]
        pending = [u for u in range(len(z)) if self._pairing(z, u, target) > 0]
        while pending:
            u = pending.pop()
            if self._pairing(z, u, target) <= 0:
                continue
            z[u] += 1
            for w in (u, *self.adj[u]):
                if self._pairing(z, w, target) > 0:
                    pending.append(w)
        result = tuple(z)
        self._cache[target] = result
        return result

    def generic_values(self, target: Point) -> Point:
        z = self.closure(target)
        t = (max(target[0], 0), max(target[1], 0))
        return (max(z[self.s1], t[0]), max(z[self.s2], t[1]))

    def __contains__(self, point: Point) -> bool:
        return point[0] >= 0 and point[1] >= 0 and self.generic_values(point) == tuple(point)

    def column_witness(self, v1: int, v2: int) -> Point | None:
        """Some u in S_C with u1 = v1 and u2 >= v2, if one exists."""
        nu = self.generic_values((v1, v2))
        return nu if nu[0] == v1 and v1 >= 0 else None

    def row_witness(self, v1: int, v2: int) -> Point | None:
        """Some u in S_C with u2 = v2 and u1 >= v1, if one exists."""
        nu = self.generic_values((v1, v2))
        return nu if nu[1] == v2 and v2 >= 0 else None

    def points(self, box: tuple[range, range]) -> list[Point]:
        return [(a, b) for b in box[1] for a in box[0] if (a, b) in self]


# the common interface


@dataclass
class HFunction:
    kind: str  # "Semigroup", "FromAlexander" or "Table"
    c: Point
    value: Callable[[Point], int]
    h1: Callable[[int], int]
    h2: Callable[[int], int]
    semigroup: ValueSemigroup | None = None
    delta: BivariatePolynomial | None = None
    floor: Point = (0, 0)  # h(v) = h_j(v_j) once v_i <= floor_i
    meta: dict = field(default_factory=dict)

    def __call__(self, v: Sequence[int]) -> int:
        return self.value((int(v[0]), int(v[1])))

    def hk(self, subset: tuple, w: Point) -> int:
        """h of the sublink indexed by subset: () -> 0, (1,) -> h1, (2,) -> h2, (1, 2) -> h."""
        if subset == ():
            return 0
        if subset == (1,):
            return self.h1(w[0])
        if subset == (2,):
            return self.h2(w[1])
        return self(w)

    def dual(self, v: Point) -> Point:
        return (self.c[0] - v[0], self.c[1] - v[1])

    def grid(self, box: tuple[range, range]) -> list[list[int]]:
        """Rows for v2 descending, columns for v1 ascending."""
        return [[self((a, b)) for a in box[0]] for b in reversed(box[1])]

    def grid_csv(self, box: tuple[range, range]) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["v2\\v1", *box[0]])
        for b, row in zip(reversed(box[1]), self.grid(box)):
            writer.writerow([b, *row])
        return out.getvalue()

    def grid_json(self, box: tuple[range, range]) -> str:
        data = {"v1": list(box[0]), "v2": list(reversed(box[1])), "rows": self.grid(box)}
        return json.dumps(data, separators=(",", ":"))

    def grid_ascii(self, box: tuple[range, range]) -> str:
        width = max(len(str(x)) for row in self.grid(box) for x in row + [min(box[0]), max(box[0])]) + 1
        label = max(len(str(b)) for b in box[1])
        lines = []
        for b, row in zip(reversed(box[1]), self.grid(box)):
            lines.append(f"{b:>{label}} |" + "".join(f"{x:>{width}}" for x in row))
        lines.append(" " * label + " +" + "-" * (width * len(box[0])))
        lines.append(" " * (label + 2) + "".join(f"{a:>{width}}" for a in box[0]))
        return "\n".join(lines) + "\n"


def _counting(semigroup) -> Callable[[int], int]:
    @lru_cache(maxsize=None)
    def h(x: int) -> int:
        return sum(1 for s in range(max(x, 0)) if s in semigroup)

    return h


def h_from_semigroup(semigroup: ValueSemigroup, check_box: Point | None = None) -> HFunction:
    """h from the increment rule h(v1+1, v2) = h(v) + 1 iff S_C has a point (v1, >= v2).

    The value at v >= 0 is accumulated along the v1-axis and then up the column
    at v1; path independence is asserted on [0, c1] x [0, c2] (or check_box).
    """
    link = semigroup.link

    @lru_cache(maxsize=None)
    def along_axis(a: int) -> int:
        if a <= 0:
            return 0
        return along_axis(a - 1) + (semigroup.column_witness(a - 1, 0) is not None)

    @lru_cache(maxsize=None)
    def value(v: Point) -> int:
        a, b = max(v[0], 0), max(v[1], 0)
        if b == 0:
            return along_axis(a)
        return value((a, b - 1)) + (semigroup.row_witness(a, b - 1) is not None)

    h1 = lambda x: value((x, 0))
    h2 = lambda x: value((0, x))
    hf = HFunction("Semigroup", link.c, value, h1, h2, semigroup=semigroup)
    top = check_box or link.c
    for b in range(top[1] + 1):
        for a in range(top[0] + 1):
            step = value((a + 1, b)) - value((a, b))
            if step != (semigroup.column_witness(a, b) is not None):
                raise InconsistentSemigroup(f"increment rule is path dependent at {(a, b)}")
    return hf


def h_from_alexander(link: AlgebraicLink, delta: BivariatePolynomial | None = None) -> HFunction:
    """h(v) = h1(v1+) + h2(v2+) - sum of a_u over 0 <= u < v (open lower box)."""
    delta = delta or alexander_from_graph(link)
    if any(x not in (0, 1) for x in delta.terms.values()):
        raise ValueError("closed form needs a 0/1 Alexander polynomial")
    h1 = _counting(branch_semigroup(link.branch1))
    h2 = _counting(branch_semigroup(link.branch2))
    pts = delta.support()

    @lru_cache(maxsize=None)
    def value(v: Point) -> int:
        a, b = max(v[0], 0), max(v[1], 0)
        below = sum(1 for x, y in pts if x < a and y < b)
        return h1(a) + h2(b) - below

    return HFunction("FromAlexander", link.c, value, h1, h2, delta=delta)


def h_table(grid: Sequence[Sequence[int]], origin: Point, c: Point, h1=None, h2=None) -> HFunction:
    """Table provider. grid[i][j] is h at (origin1 + j, origin2 + i), i.e. rows by ascending v2.

    Below the table the values are stabilized by clamping; above it the
    symmetry h(v) = h(c - v) + |v| - |c|/2 is used, which needs
    max_i >= c_i - min_i so that c - v lands back in the clamped range.
    Optional h1 / h2 are checked against the bottom row / left column.
    """
    rows = [list(map(int, r)) for r in grid]
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise StabilizationMissing("table must be a non-empty rectangle")
    lo = (int(origin[0]), int(origin[1]))
    hi = (lo[0] + len(rows[0]) - 1, lo[1] + len(rows) - 1)
    if (c[0] + c[1]) % 2:
        raise StabilizationMissing("|c| must be even")
    for i in range(2):
        if hi[i] < c[i] - lo[i]:
            raise StabilizationMissing(f"table too small in direction {i + 1}: need max >= c - min")
    table = {(lo[0] + j, lo[1] + i): x for i, r in enumerate(rows) for j, x in enumerate(r)}

    def value(v: Point) -> int:
        a, b = max(v[0], lo[0]), max(v[1], lo[1])
        if a <= hi[0] and b <= hi[1]:
            return table[(a, b)]
        w = (max(c[0] - a, lo[0]), max(c[1] - b, lo[1]))
        return table[w] + a + b - (c[0] + c[1]) // 2

    bottom = lambda x: value((x, lo[1]))
    left = lambda x: value((lo[0], x))
    for given, derived, name, axis in ((h1, bottom, "h1", 0), (h2, left, "h2", 1)):
        if given is None:
            continue
        for x in range(lo[axis], hi[axis] + 1):
            if given(x) != derived(x):
                raise StabilizationMissing(f"{name}({x}) = {given(x)} does not match the table ({derived(x)})")
    return HFunction("Table", tuple(c), value, h1 or bottom, h2 or left, floor=lo, meta={"origin": lo, "top": hi})


def semigroup_from_h(h: HFunction, box: tuple[range, range]) -> list[Point]:
    """Points v of the box with h(v1+1, v2) = h(v1, v2+1) = h(v) + 1."""
    out = []
    for b in box[1]:
        for a in box[0]:
            base = h((a, b))
            if h((a + 1, b)) == base + 1 and h((a, b + 1)) == base + 1:
                out.append((a, b))
    return out


def alexander_from_h(h: HFunction, box: tuple[range, range]) -> dict[Point, int]:
    """a_v = h(v1+1, v2) + h(v1, v2+1) - h(v) - h(v1+1, v2+1), non-zero entries only."""
    out = {}
    for b in box[1]:
        for a in box[0]:
            x = h((a + 1, b)) + h((a, b + 1)) - h((a, b)) - h((a + 1, b + 1))
            if x:
                out[(a, b)] = x
    return out


# good and very good points


def is_good(h: HFunction, v: Point) -> bool:
    value = h(v)
    return value > h.h1(v[0]) and value > h.h2(v[1])


def is_very_good(h: HFunction, v: Point) -> bool:
    return is_good(h, v) and is_good(h, h.dual(v))


def good_by_semigroup_witnesses(semigroup: ValueSemigroup, v: Point) -> bool:
    """Semigroup points exist in [v1, oo) x [0, v2 - 1] and in [0, v1 - 1] x [v2, oo)."""
    right = any(semigroup.row_witness(v[0], b) is not None for b in range(max(v[1], 0)))
    above = any(semigroup.column_witness(a, v[1]) is not None for a in range(max(v[0], 0)))
    return right and above


def find_very_good(h: HFunction, delta: BivariatePolynomial | None = None) -> Point | None:
    """A very good point in [0, c1] x [0, c2], preferring points near c/2.

    With an unordered Alexander polynomial the witness pair u, v gives the
    candidate inf(u, v) + 1 directly; it is asserted very good.
    """
    if delta is not None:
        pair = incomparable_pair(delta)
        if pair is not None:
            u, w = pair
            candidate = (min(u[0], w[0]) + 1, min(u[1], w[1]) + 1)
            if not is_very_good(h, candidate):
                raise AssertionError(f"{candidate} from the incomparable pair {pair} is not very good")
            return candidate
    c = h.c
    box = [(a, b) for a in range(min(0, c[0]), max(0, c[0]) + 1) for b in range(min(0, c[1]), max(0, c[1]) + 1)]
    box.sort(key=lambda v: (abs(2 * v[0] - c[0]) + abs(2 * v[1] - c[1]), v))
    return next((v for v in box if is_very_good(h, v)), None)
