"""Alexander polynomials of algebraic links from resolution graphs."""

from __future__ import annotations

import json
from collections import defaultdict
from itertools import combinations
from typing import Iterable, Mapping

from .alg_link import AlgebraicLink, BranchSpec, branch_graph
from .graph_core import Arrow, PlumbingGraph, multiplicity_matrix

TERM_CAP = 10**6


class InexactDivision(ArithmeticError):
    pass


class NormalizationMismatch(AssertionError):
    pass


class PreconditionViolated(ValueError):
    pass


class BivariatePolynomial:
    """Sparse Laurent polynomial in t1, t2 with integer coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], int] | None = None):
        self.terms = {(int(a), int(b)): int(c) for (a, b), c in (terms or {}).items() if c}

    @classmethod
    def one(cls):
        return cls({(0, 0): 1})

    @classmethod
    def binomial(cls, exponent: tuple[int, int]):
        """1 - t^exponent."""
        return cls({(0, 0): 1}) - cls({exponent: 1})

    def __sub__(self, other):
        out = defaultdict(int, self.terms)
        for k, c in other.terms.items():
            out[k] -= c
        return BivariatePolynomial(out)

    def __add__(self, other):
        out = defaultdict(int, self.terms)
        for k, c in other.terms.items():
            out[k] += c
        return BivariatePolynomial(out)

    def __mul__(self, other):
        out = defaultdict(int)
        for (a, b), c in self.terms.items():
            for (x, y), d in other.terms.items():
                out[(a + x, b + y)] += c * d
        return BivariatePolynomial(out)

    def __eq__(self, other):
        return isinstance(other, BivariatePolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"BivariatePolynomial({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self.terms.items()):
            mono = "*".join(x for x in (_power("t1", a), _power("t2", b)) if x)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def coefficient(self, v: tuple[int, int]) -> int:
        return self.terms.get(tuple(v), 0)

    def divide_by_binomial(self, exponent: tuple[int, int]) -> "BivariatePolynomial":
        """Exact quotient by 1 - t^exponent; raises InexactDivision otherwise."""
        a, b = exponent
        if (a, b) == (0, 0) or a < 0 or b < 0:
            raise InexactDivision(f"cannot divide by 1 - t^{exponent}")
        chains = defaultdict(dict)
        for (x, y), c in self.terms.items():
            k = min(x // a if a else 10**18, y // b if b else 10**18)
            chains[(x - k * a, y - k * b)][k] = c
        out = {}
        for (x0, y0), coeffs in sorted(chains.items()):
            ks = sorted(coeffs)
            running = 0
            for k in range(ks[0], ks[-1]):
                running += coeffs.get(k, 0)
                if running:
                    out[(x0 + k * a, y0 + k * b)] = running
            if running + coeffs[ks[-1]] != 0:
                raise InexactDivision(f"nonzero remainder dividing by 1 - t^{exponent}")
        return BivariatePolynomial(out)

    def support(self) -> list[tuple[int, int]]:
        return sorted(self.terms)

    def normalized(self) -> "BivariatePolynomial":
        """Shift so the minimal exponents are (0, 0) and the constant term is positive."""
        if not self.terms:
            return self
        a = min(x for x, _ in self.terms)
        b = min(y for _, y in self.terms)
        sign = 1 if self.terms.get((a, b), 1) > 0 else -1
        return BivariatePolynomial({(x - a, y - b): sign * c for (x, y), c in self.terms.items()})

    def at_t2_one(self) -> dict[int, int]:
        return _clean({x: sum(c for (a, _), c in self.terms.items() if a == x) for x, _ in self.terms})

    def at_t1_one(self) -> dict[int, int]:
        return _clean({y: sum(c for (_, b), c in self.terms.items() if b == y) for _, y in self.terms})

    def swapped(self) -> "BivariatePolynomial":
        return BivariatePolynomial({(b, a): c for (a, b), c in self.terms.items()})

    def degree(self) -> tuple[int, int]:
        return (max(a for a, _ in self.terms), max(b for _, b in self.terms))

    def to_json(self) -> str:
        return json.dumps({"terms": [[a, b, c] for (a, b), c in sorted(self.terms.items())]}, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "BivariatePolynomial":
        data = json.loads(text)
        return cls({(a, b): c for a, b, c in data["terms"]})

    def support_csv(self) -> str:
        return "v1,v2\n" + "".join(f"{a},{b}\n" for a, b in self.support())


def _power(var: str, k: int) -> str:
    if k == 0:
        return ""
    return var if k == 1 else f"{var}^{k}"


def _clean(d: Mapping[int, int]) -> dict[int, int]:
    return {k: v for k, v in sorted(d.items()) if v}


# one-variable helpers (dict exponent -> coefficient)


def poly_mul(p: Mapping[int, int], q: Mapping[int, int]) -> dict[int, int]:
    out = defaultdict(int)
    for a, x in p.items():
        for b, y in q.items():
            out[a + b] += x * y
    return _clean(out)


def divide_by_one_minus(p: Mapping[int, int], k: int) -> dict[int, int]:
    """Exact quotient of p by 1 - t^k."""
    poly = BivariatePolynomial({(e, 0): c for e, c in p.items()})
    return {a: c for (a, _), c in poly.divide_by_binomial((k, 0)).terms.items()}


def one_minus(k: int) -> dict[int, int]:
    return _clean({0: 1, k: -1}) if k else {}


# the EN product


def _product(factors_up: Iterable, factors_down: Iterable, cap: int) -> BivariatePolynomial:
    result = BivariatePolynomial.one()
    for exponent in factors_up:
        result = result * BivariatePolynomial.binomial(exponent)
        if len(result) > cap:
            raise OverflowError(f"intermediate polynomial exceeds {cap} terms")
    for exponent in factors_down:
        result = result.divide_by_binomial(exponent)
        if len(result) > cap:
            raise OverflowError(f"intermediate polynomial exceeds {cap} terms")
    return result


def _en_factors(g: PlumbingGraph, mult, arrow_vertices: list[str]):
    up, down = [], []
    for u in g.vertices:
        delta = g.valency(u, with_arrows=True)
        exponent = tuple(mult[u][v] for v in arrow_vertices)
        if len(exponent) == 1:
            exponent = (exponent[0], 0)
        if delta > 2:
            up += [exponent] * (delta - 2)
        elif delta == 1:
            down.append(exponent)
    return up, down


def alexander_from_graph(link: AlgebraicLink, cap: int = TERM_CAP) -> BivariatePolynomial:
    """Delta(t1, t2) = prod over vertices of (1 - t1^m_u1 t2^m_u2)^(valency - 2)."""
    up, down = _en_factors(link.graph, link.multiplicities, [link.v1, link.v2])
    delta = _product(up, down, cap).normalized()
    if any(c not in (0, 1) for c in delta.terms.values()):
        raise AssertionError("Alexander polynomial of an algebraic link must have 0/1 coefficients")
    return delta


def branch_alexander(branch: BranchSpec, cap: int = TERM_CAP) -> dict[int, int]:
    """Delta(t) = (1 - t) * prod (1 - t^m_u)^(valency - 2) on the one-branch graph."""
    g = branch_graph(branch)
    mult = multiplicity_matrix(g.without_arrows())
    up, down = _en_factors(g, mult, [g.arrows[0].at])
    up.append((1, 0))
    poly = _product(up, down, cap).normalized()
    return {a: c for (a, _), c in sorted(poly.terms.items())}


def component_alexander(link: AlgebraicLink, i: int) -> dict[int, int]:
    """Delta_i from the two-branch graph, keeping only the arrow of branch i."""
    v = link.v1 if i == 1 else link.v2
    g = PlumbingGraph(link.graph.euler, link.graph.edges, (Arrow("L", v),))
    up, down = _en_factors(g, link.multiplicities, [v])
    up.append((1, 0))
    poly = _product(up, down, TERM_CAP).normalized()
    return {a: c for (a, _), c in sorted(poly.terms.items())}


# support structure


def support(p: BivariatePolynomial) -> list[tuple[int, int]]:
    return p.support()


def _comparable(u, v) -> bool:
    return (u[0] <= v[0] and u[1] <= v[1]) or (v[0] <= u[0] and v[1] <= u[1])


def incomparable_pairs(p: BivariatePolynomial) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    return [(u, v) for u, v in combinations(p.support(), 2) if not _comparable(u, v)]


def incomparable_pair(p: BivariatePolynomial):
    """First incomparable pair of support points in lexicographic order, or None."""
    for u, v in combinations(p.support(), 2):
        if not _comparable(u, v):
            return (u, v)
    return None


def ordered_type(p: BivariatePolynomial) -> bool:
    return incomparable_pair(p) is None


def symmetry_check(p: BivariatePolynomial, c: tuple[int, int]) -> bool:
    pts = set(p.support())
    return all((c[0] - 1 - a, c[1] - 1 - b) in pts for a, b in pts)


def recover_delta1(p: BivariatePolynomial, l: int, component: int = 1) -> dict[int, int]:
    """Delta_i(t) = Delta(t, 1) (1 - t) / (1 - t^l), by exact division."""
    restricted = p.at_t2_one() if component == 1 else p.at_t1_one()
    return divide_by_one_minus(poly_mul(restricted, one_minus(1)), l)


def torres_check(link: AlgebraicLink, p: BivariatePolynomial) -> bool:
    """Delta(t, 1) = Delta_1(t) (1 - t^l) / (1 - t), and the same with the roles swapped."""
    for i, restricted in ((1, p.at_t2_one()), (2, p.at_t1_one())):
        delta_i = branch_alexander(link.branch1 if i == 1 else link.branch2)
        expected = divide_by_one_minus(poly_mul(delta_i, one_minus(link.l)), 1)
        if restricted != expected:
            raise NormalizationMismatch(f"component {i}: Delta restricted = {restricted}, Torres side = {expected}")
    return True


def support_on_line(link: AlgebraicLink, p: BivariatePolynomial, v1: int) -> int:
    from .alg_link import branch_semigroup

    semigroup = branch_semigroup(link.branch1)
    if not (0 < v1 < link.l) or v1 not in semigroup:
        raise PreconditionViolated(f"need 0 < v1 < l = {link.l} and v1 in the semigroup of the first branch")
    hits = [b for a, b in p.support() if a == v1]
    if not hits:
        raise AssertionError(f"no support point on the line v1 = {v1}")
    return hits[0]
