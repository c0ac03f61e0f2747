"""Generated two-branch links shared by the property and acceptance tests."""

from itertools import combinations_with_replacement

from lslab.alg_link import build

BRANCHES = [(), ((2, 3),), ((2, 5),), ((3, 4),), ((2, 3), (2, 1)), ((2, 3), (2, 3)), ((2, 3), (3, 2))]
FIRST_PAIRS = [(2, 3), (2, 5), (3, 4), (3, 5)]
SECOND_PAIRS = [(2, 1), (2, 3), (3, 1), (3, 2)]


def _specs():
    # transversal, smooth branches allowed
    for b1, b2 in combinations_with_replacement(BRANCHES, 2):
        yield b1, b2, "I", 0
    # family I, n = 1: common first pair, then free points of its node
    for first in FIRST_PAIRS:
        tails = [()] + [(s,) for s in SECOND_PAIRS]
        for t1, t2 in combinations_with_replacement(tails, 2):
            yield (first, *t1), (first, *t2), "I", 1
    # family I, n = 2, including the doubled two-pair branch
    for second in SECOND_PAIRS[:2]:
        yield ((2, 3), second), ((2, 3), second), "I", 2
        yield ((2, 3), second, (2, 1)), ((2, 3), second), "I", 2
    # family II: distinct slopes at pair n
    for a, b in [((2, 3), (2, 5)), ((2, 3), (3, 4)), ((2, 5), (3, 5)), ((3, 4), (3, 5))]:
        yield (a,), (b,), "II", 1
        yield (a, (2, 1)), (b,), "II", 1
    for a, b in [((2, 1), (2, 3)), ((2, 1), (3, 1)), ((3, 2), (2, 3))]:
        yield ((2, 3), a), ((2, 3), b), "II", 2


def corpus():
    links = []
    for b1, b2, family, n in _specs():
        links.append(build(list(b1), list(b2), family, n))
    return links


CORPUS = corpus()
