"""Surgery complex of a two-component L-space link, truncated and unrolled over F[U]/U^N.

Generators are z_K(w) for K a subset of {1, 2} and w in Z^2. For i in K there
is a short arrow z_K(w) -> z_{K-i}(w) weighted U^{h_K(w) - h_{K-i}(w)} and a
long arrow z_K(w) -> z_{K-i}(w - Lambda_i) weighted by the same difference
evaluated at w* - Lambda_{complement of K}.

Truncation keeps z_empty(w) for w in [-M, c + M] and every generator with an
arrow into something kept. The dropped generators then form a subcomplex, and
outside the box they cancel in pairs along arrows of weight U^0, so the kept
part is a quotient complex with the same homology.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .hfun import HFunction
from .rational import Verdict

SUBSETS = ((), (1,), (2,), (1, 2))
DEFAULT_POWER = 6


class ComplexError(AssertionError):
    pass


@dataclass(frozen=True)
class FramingMatrix:
    """[[d1, l], [l, d2]]."""

    d1: int
    d2: int
    l: int

    @property
    def det(self) -> int:
        return self.d1 * self.d2 - self.l * self.l

    def column(self, i: int) -> tuple[int, int]:
        return (self.d1, self.l) if i == 1 else (self.l, self.d2)

    @property
    def homology_order(self) -> int | None:
        """|H_1| of the surgered manifold; None when it is infinite."""
        return abs(self.det) or None

    def is_positive_definite(self) -> bool:
        return self.d1 > 0 and self.det > 0

    def class_key(self, w) -> tuple[int, int]:
        """Injective label of w modulo the lattice spanned by the columns."""
        n = abs(self.det)
        return ((self.d2 * w[0] - self.l * w[1]) % n, (self.d1 * w[1] - self.l * w[0]) % n)

    def solve(self, w) -> tuple[int, int]:
        """u with Lambda u = w; w must lie in the column lattice."""
        u1 = Fraction(self.d2 * w[0] - self.l * w[1], self.det)
        u2 = Fraction(self.d1 * w[1] - self.l * w[0], self.det)
        if u1.denominator != 1 or u2.denominator != 1:
            raise ComplexError(f"{w} is not in the framing lattice")
        return (int(u1), int(u2))


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _complement_shift(framing: FramingMatrix, subset) -> tuple[int, int]:
    out = (0, 0)
    for j in (1, 2):
        if j not in subset:
            col = framing.column(j)
            out = (out[0] + col[0], out[1] + col[1])
    return out


def arrows_from(h: HFunction, framing: FramingMatrix, subset, w):
    """(target subset, target point, U-exponent, kind) for each arrow leaving z_subset(w)."""
    out = []
    dual = _sub(h.dual(w), _complement_shift(framing, subset))
    for i in subset:
        smaller = tuple(j for j in subset if j != i)
        out.append((smaller, w, h.hk(subset, w) - h.hk(smaller, w), "short"))
        out.append((smaller, _sub(w, framing.column(i)), h.hk(subset, dual) - h.hk(smaller, dual), "long"))
    return out


@dataclass
class SurgeryComplex:
    framing: FramingMatrix
    key: tuple[int, int]
    representative: tuple[int, int]
    generators: list  # (subset, point)
    arrows: list  # (source index, target index, exponent)
    margin: int
    power: int
    dropped_arrows: int = 0
    index: dict = field(default_factory=dict, repr=False)

    def to_json(self) -> str:
        data = {
            "framing": [self.framing.d1, self.framing.d2, self.framing.l],
            "class": list(self.key),
            "margin": self.margin,
            "power": self.power,
            "generators": [{"K": list(k), "w": list(w)} for k, w in self.generators],
            "arrows": [list(a) for a in self.arrows],
            "dropped_arrows": self.dropped_arrows,
        }
        return json.dumps(data, separators=(",", ":"))

    def degree(self, h: HFunction, i: int) -> int:
        """Absolute grading up to a per-class constant."""
        subset, w = self.generators[i]
        u = self.framing.solve(_sub(w, self.representative))
        v = self.representative
        gamma = (2 * v[0] - self._genus2(h, 1) + self.framing.d1, 2 * v[1] - self._genus2(h, 2) + self.framing.d2)
        f = self.framing
        quad = u[0] * (f.d1 * u[0] + f.l * u[1]) + u[1] * (f.l * u[0] + f.d2 * u[1])
        return quad + gamma[0] * u[0] + gamma[1] * u[1] - 2 * h.hk(subset, w) + len(subset)

    def _genus2(self, h: HFunction, i: int) -> int:
        """2 g_i = c_i - l."""
        return h.c[i - 1] - self.framing.l


def _bands(h: HFunction, framing: FramingMatrix, margin: int) -> dict:
    """w1-interval kept for each generator type, closed under the shifts of the arrows."""
    s1 = h.floor[0]
    top = h.c[0] + max(0, -framing.l)
    bands = {(): (s1 - margin, top - s1 + margin)}
    for subset in SUBSETS[1:]:
        lo, hi = None, None
        for i in subset:
            smaller = tuple(j for j in subset if j != i)
            a, b = bands[smaller]
            shift = framing.column(i)[0]
            lo = min(x for x in (lo, a, a + shift) if x is not None)
            hi = max(x for x in (hi, b, b + shift) if x is not None)
        bands[subset] = (lo, hi)
    return bands


def class_representatives(framing: FramingMatrix) -> list[tuple[int, int]]:
    n = abs(framing.det)
    reps, seen = [], set()
    for a in range(n):
        for b in range(n):
            key = framing.class_key((a, b))
            if key not in seen:
                seen.add(key)
                reps.append((a, b))
            if len(reps) == n:
                return reps
    raise ComplexError("could not enumerate the spin^c classes")


class _Rows:
    """Generators of one spin^c class, organized by rows u2 = const of w = v + Lambda u."""

    def __init__(self, framing: FramingMatrix, rep, bands):
        self.f, self.rep, self.bands = framing, rep, bands

    def u1_range(self, subset, r) -> range:
        lo, hi = self.bands[subset]
        base = self.rep[0] + self.f.l * r
        return range(-((base - lo) // self.f.d1), (hi - base) // self.f.d1 + 1)

    def point(self, u) -> tuple[int, int]:
        f, v = self.f, self.rep
        return (v[0] + f.d1 * u[0] + f.l * u[1], v[1] + f.l * u[0] + f.d2 * u[1])

    def w2_extent(self, r) -> tuple[int, int]:
        values = []
        for subset in SUBSETS:
            span = self.u1_range(subset, r)
            if len(span):
                values += [self.point((span[0], r))[1], self.point((span[-1], r))[1]]
        return min(values), max(values)


def _row_limits(rows: _Rows, low: int, high: int, increasing: bool):
    """First and last rows whose w2-extent leaves the stable zones (w2 <= low, w2 >= high)."""
    step = 1 if increasing else -1
    # walk to a row deep in the low zone, then scan towards the high zone
    r = 0
    while rows.w2_extent(r)[1] > low:
        r -= step
    while rows.w2_extent(r)[1] <= low:
        r += step
    first_unstable_low = r
    r = first_unstable_low
    while rows.w2_extent(r)[0] < high:
        r += step
    last_unstable_high = r - step
    return first_unstable_low, last_unstable_high


def build_all(h: HFunction, framing: FramingMatrix, margin: int, power: int = DEFAULT_POWER) -> dict:
    """Truncated complexes for every spin^c class, keyed by FramingMatrix.class_key.

    Rows u2 = const are cut to a w1-band (a quotient by an acyclic subcomplex),
    then whole rows are dropped where the arrows removing 2 pair neighbouring
    rows quasi-isomorphically: short arrows once w2 <= floor_2, long arrows once
    w2 >= c2 - floor_2. For det > 0 this is again a quotient; for det < 0 the
    kept rows form a subcomplex.
    """
    if framing.det == 0:
        raise ComplexError("framing matrix is singular")
    if framing.d1 <= 0:
        raise ComplexError("row truncation needs d1 > 0")
    bands = _bands(h, framing, margin)
    s2 = h.floor[1]
    low, high = s2, h.c[1] + max(0, -framing.l) - s2
    out = {}
    for rep in class_representatives(framing):
        rows = _Rows(framing, rep, bands)
        # when the two stable zones overlap, a single row survives the cancellations
        if framing.det > 0:
            r0, r1 = _row_limits(rows, low, high, True)
            r1 = max(r1, r0)
            row_span = {True: (r0, r1), False: (r0, r1 - 1)}
        else:
            top, bottom = _row_limits(rows, low, high, False)
            top = max(top, bottom - 1)
            row_span = {True: (bottom, top), False: (bottom - 1, top)}
        gens = []
        for subset in SUBSETS:
            a, b = row_span[2 in subset]
            for r in range(a, b + 1):
                for u1 in rows.u1_range(subset, r):
                    gens.append((subset, (u1, r)))
        index = {(k, rows.point(u)): i for i, (k, u) in enumerate(gens)}
        generators = [(k, rows.point(u)) for k, u in gens]
        arrows, dropped = [], 0
        for i, (subset, w) in enumerate(generators):
            for smaller, target, e, _ in arrows_from(h, framing, subset, w):
                if e < 0:
                    raise ComplexError(f"negative exponent on an arrow from z_{subset}({w})")
                j = index.get((smaller, target))
                if j is None:
                    dropped += 1
                else:
                    arrows.append((i, j, e))
        key = framing.class_key(rep)
        out[key] = SurgeryComplex(framing, key, rep, generators, arrows, margin, power, dropped, index)
    return out


def build(h: HFunction, framing: FramingMatrix, representative, margin: int, power: int = DEFAULT_POWER) -> SurgeryComplex:
    return build_all(h, framing, margin, power)[framing.class_key(representative)]


def check_square_zero(cx: SurgeryComplex) -> None:
    """d^2 = 0 over F[U]: every (target, exponent) is reached an even number of times."""
    outgoing: dict = {}
    for i, j, e in cx.arrows:
        outgoing.setdefault(i, []).append((j, e))
    for i in range(len(cx.generators)):
        parity: dict = {}
        for j, e in outgoing.get(i, []):
            for k, f in outgoing.get(j, []):
                parity[(k, e + f)] = parity.get((k, e + f), 0) ^ 1
        if any(parity.values()):
            raise ComplexError(f"d^2 != 0 at generator {cx.generators[i]}")


def check_gradings(cx: SurgeryComplex, h: HFunction) -> None:
    """Every arrow lowers the absolute degree by one (U has degree -2)."""
    for i, j, e in cx.arrows:
        if cx.degree(h, i) - 1 != cx.degree(h, j) - 2 * e:
            raise ComplexError(f"arrow {cx.generators[i]} -> {cx.generators[j]} breaks the grading")


def homology_dim(cx: SurgeryComplex, power: int | None = None) -> int:
    """F-dimension of the homology of cx tensored with F[U]/U^power."""
    n = power or cx.power
    images = [0] * (len(cx.generators) * n)
    for i, j, e in cx.arrows:
        for k in range(n - e):
            images[i * n + k] ^= 1 << (j * n + k + e)
    pivots: dict[int, int] = {}
    rank = 0
    for vec in images:
        while vec:
            top = vec.bit_length() - 1
            if top in pivots:
                vec ^= pivots[top]
            else:
                pivots[top] = vec
                rank += 1
                break
    return len(images) - 2 * rank


def auto_margin(framing: FramingMatrix) -> int:
    return max(abs(framing.d1), abs(framing.d2), abs(framing.l)) + 2


@dataclass
class HfResult:
    verdict: Verdict
    certificate: str
    dims: dict = field(default_factory=dict)  # class key -> (dim at (M, N), dim at (M + 2, N + 1))


def in_regime(framing: FramingMatrix) -> bool:
    return framing.d1 > 0 and framing.d2 > 0 and framing.det != 0


def ls_test(h: HFunction, framing: FramingMatrix, margin: int | None = None, power: int = DEFAULT_POWER, checks: bool = False) -> HfResult:
    """L-space iff every spin^c class has homology of dimension exactly N, stably."""
    if framing.det == 0:
        return HfResult(Verdict.NOT_LSPACE, "det Lambda = 0: first homology is infinite")
    if not in_regime(framing):
        return HfResult(Verdict.INDETERMINATE, "outside the supported regime d1, d2 > 0")
    margin = auto_margin(framing) if margin is None else margin
    small = build_all(h, framing, margin, power)
    large = build_all(h, framing, margin + 2, power + 1)
    dims = {}
    for key in sorted(small):
        if checks:
            for cx in (small[key], large[key]):
                check_square_zero(cx)
                check_gradings(cx, h)
        dims[key] = (homology_dim(small[key]), homology_dim(large[key]))
    minimal = all(a == power for a, _ in dims.values())
    stable_minimal = all(b == power + 1 for _, b in dims.values())
    excess = [k for k, (a, b) in dims.items() if a > power and b > power + 1]
    if minimal and stable_minimal:
        return HfResult(Verdict.LSPACE, f"rank {power} in all {len(dims)} spin^c classes (M={margin}, N={power}), stable", dims)
    if excess and all(a >= power for a, _ in dims.values()) and all(b >= power + 1 for _, b in dims.values()):
        k = excess[0]
        return HfResult(Verdict.NOT_LSPACE, f"class {k} has homology dimension {dims[k][0]} > {power} (M={margin}, N={power}), stable", dims)
    return HfResult(Verdict.INDETERMINATE, "homology dimensions not stable under truncation growth", dims)
