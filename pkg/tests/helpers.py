"""Small-tree enumeration and brute-force oracles shared by several test files."""

from fractions import Fraction
from itertools import permutations, product

import numpy as np

from lslab.graph_core import PlumbingGraph

# unlabeled trees with up to six vertices, as edge lists on 0..n-1
TREE_SHAPES = {
    1: [[]],
    2: [[(0, 1)]],
    3: [[(0, 1), (1, 2)]],
    4: [[(0, 1), (1, 2), (2, 3)], [(0, 1), (0, 2), (0, 3)]],
    5: [[(0, 1), (1, 2), (2, 3), (3, 4)], [(0, 1), (1, 2), (2, 3), (1, 4)], [(0, 1), (0, 2), (0, 3), (0, 4)]],
    6: [
        [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)],
        [(0, 1), (1, 2), (2, 3), (3, 4), (1, 5)],
        [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)],
        [(0, 1), (1, 2), (2, 3), (1, 4), (1, 5)],
        [(0, 1), (1, 2), (2, 3), (1, 4), (2, 5)],
        [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)],
    ],
}


def tree_graph(edges, eulers) -> PlumbingGraph:
    return PlumbingGraph(
        {f"v{i}": e for i, e in enumerate(eulers)},
        frozenset(frozenset((f"v{a}", f"v{b}")) for a, b in edges),
    )


def leaf_pruning_definite(n, edges, eulers) -> bool:
    """Negative definiteness of a tree by eliminating leaves (Schur complements)."""
    adj = {i: set() for i in range(n)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    pivot = {i: Fraction(e) for i, e in enumerate(eulers)}
    alive = set(range(n))
    while alive:
        leaf = next(i for i in sorted(alive) if len(adj[i] & alive) <= 1)
        if pivot[leaf] >= 0:
            return False
        for w in adj[leaf] & alive:
            pivot[w] -= 1 / pivot[leaf]
        alive.remove(leaf)
    return True


def definite_trees(max_vertices=6, eulers=range(-5, 0)):
    """(edges, euler tuple) for every negative definite tree, one per isomorphism class."""
    for n in range(1, max_vertices + 1):
        for edges in TREE_SHAPES[n]:
            shape = {frozenset(e) for e in edges}
            autos = [p for p in permutations(range(n)) if {frozenset((p[a], p[b])) for a, b in edges} == shape]
            for eul in product(eulers, repeat=n):
                if any(tuple(eul[p[i]] for i in range(n)) < eul for p in autos):
                    continue
                if leaf_pruning_definite(n, edges, eul):
                    yield edges, eul


def cone_points_below(edges, eulers, top):
    """All cycles z with 1 <= z <= top (componentwise) satisfying (z, E_v) <= 0 for every v."""
    n = len(eulers)
    form = np.zeros((n, n), dtype=np.int64)
    for a, b in edges:
        form[a, b] = form[b, a] = 1
    np.fill_diagonal(form, eulers)
    pts = np.indices(tuple(top)).reshape(n, -1) + 1
    inside = np.all(form @ pts <= 0, axis=0)
    return [tuple(int(x) for x in col) for col in pts[:, inside].T]


def random_tree(rng, n, lo=-5, hi=-1) -> PlumbingGraph:
    edges = [(i, rng.randrange(i)) for i in range(1, n)]
    return tree_graph(edges, [rng.randint(lo, hi) for _ in range(n)])

