import json

import pytest

from corpus import CORPUS
from lslab.alexander import branch_alexander
from lslab.alg_link import (
    BranchSpec,
    InvalidNewtonPairs,
    NonAlgebraicConfiguration,
    NumericalSemigroup,
    branch_semigroup,
    build,
    linking_number,
    m_slopes,
    parse_link,
)
from lslab.graph_core import determinant, multiplicity_matrix
from lslab.rational import is_simple_vertex


@pytest.fixture(scope="module")
def two_trefoils():
    return build([(2, 3)], [(2, 3)], "I", 0)


@pytest.fixture(scope="module")
def cable():
    return build([(2, 3)], [(2, 3), (3, 2)], "I", 1)


def test_two_trefoils(two_trefoils):
    L = two_trefoils
    assert (L.l, L.c, L.g1, L.g2) == (4, (6, 6), 1, 1)
    assert linking_number(L) == 4
    assert m_slopes(L) == (6, 6)
    assert not L.parallel


def test_family_two_with_n_zero_is_the_transversal_case(two_trefoils):
    alias = build([(2, 3)], [(2, 3)], "II", 0)
    assert (alias.l, alias.c, alias.m1, alias.m2) == (two_trefoils.l, two_trefoils.c, 6, 6)


def test_trefoil_and_cable(cable):
    assert m_slopes(cable) == (6, 60)
    assert (cable.mu1, cable.mu2) == (2, 44)
    assert cable.c == (20, 62)


def test_smooth_branch_is_an_unknot():
    L = build([(2, 3)], [], "I", 0)
    assert L.branch2.is_smooth and L.mu2 == 0 and L.m2 == 1
    assert branch_alexander(L.branch2) == {0: 1}


def test_lambda_family_linking_number_from_torres_degree():
    for s in (6, 7, 8):
        L = build([(2, 3), (2, 2 * s - 11)], [(2, 3)], "I", 1)
        # Delta(t, 1) has degree mu1 - 1 + l
        from lslab.alexander import alexander_from_graph

        delta = alexander_from_graph(L)
        assert max(delta.at_t2_one()) == L.mu1 - 1 + L.l
        assert L.l == 12


def test_parallel_link_has_equal_slopes():
    L = build([(2, 3), (2, 1)], [(2, 3), (2, 1)], "I", 2)
    assert L.parallel and L.m1 == L.m2 == 26


def test_semigroups():
    tre = branch_semigroup(BranchSpec(((2, 3),)))
    assert tre.conductor == 2 and tre.elements(6) == [0, 2, 3, 4, 5, 6]
    unknot = branch_semigroup(BranchSpec(()))
    assert unknot.conductor == 0 and 0 in unknot and 1 in unknot
    second = branch_semigroup(BranchSpec(((2, 3), (2, 1))))
    assert second.conductor == max(branch_alexander(BranchSpec(((2, 3), (2, 1)))))


def test_semigroup_matches_generators_and_is_closed():
    for pairs in [((2, 3),), ((3, 4),), ((2, 3), (2, 1)), ((2, 3), (3, 2)), ((2, 5), (2, 3))]:
        b = BranchSpec(pairs)
        s = branch_semigroup(b)
        assert s == NumericalSemigroup.generated_by(b.semigroup_generators())
        bound = 2 * s.conductor
        members = s.elements(bound)
        for x in members:
            for y in members:
                if x + y <= bound:
                    assert x + y in s
        assert s.conductor == b.milnor_number()


def test_splice_decorations():
    assert BranchSpec(((2, 3), (3, 2))).splice_decorations() == [(2, 3), (3, 20)]


@pytest.mark.parametrize(
    "pairs",
    [[(1, 3)], [(2, 4)], [(3, 2)], [(2, 3), (0, 1)], "junk", [(2,)]],
)
def test_invalid_newton_pairs(pairs):
    with pytest.raises(InvalidNewtonPairs):
        build(pairs, [(2, 3)], "I", 0)


@pytest.mark.parametrize(
    "b1,b2,family,n",
    [
        ([(2, 3)], [(2, 5)], "I", 1),
        ([(2, 3)], [(2, 3)], "II", 1),
        ([(2, 3)], [], "I", 1),
        ([(2, 3)], [(2, 3)], "III", 0),
        ([(2, 3)], [(2, 3)], "I", -1),
    ],
)
def test_non_algebraic_configurations(b1, b2, family, n):
    with pytest.raises(NonAlgebraicConfiguration):
        build(b1, b2, family, n)


def test_parse_link_round_trip(cable):
    again = parse_link(cable.to_json())
    assert again.to_json() == cable.to_json()
    assert parse_link(json.loads(cable.to_json())).c == cable.c


@pytest.mark.parametrize("payload", ['{"branch1": [[2,3]]}', "[1, 2]"])
def test_parse_link_errors(payload):
    with pytest.raises(InvalidNewtonPairs):
        parse_link(payload)


def test_corpus_invariants():
    for L in CORPUS:
        assert determinant(L.plain_graph) == 1
        mult = multiplicity_matrix(L.plain_graph)
        assert L.l == mult[L.v1][L.v2]
        assert L.m1 == determinant(L.plain_graph.without([L.v1]))
        assert L.c == (L.mu1 + L.l, L.mu2 + L.l)
        assert 2 * L.g1 == max(branch_alexander(L.branch1))
        if L.parallel:
            assert L.m1 == L.m2
        assert all(ok for _, _, ok in L.splice.edge_inequalities())


def test_degenerate_support_vertex_flags():
    # the Euler number at a degenerate support depends on later blow-ups, so it is computed
    flagged = unflagged = 0
    for L in CORPUS:
        for i, v, other in ((0, L.v1, L.v2), (1, L.v2, L.v1)):
            if not L.degenerate[i]:
                continue
            assert L.minus_one_support[i] == (L.graph.euler[v] == -1)
            if not L.minus_one_support[i]:
                unflagged += 1
                continue
            flagged += 1
            rest = L.plain_graph if L.parallel else L.plain_graph.without([other])
            block = next(c for c in rest.components() if v in c)
            if block.valency(v) >= 2:
                assert not is_simple_vertex(block, v), L.describe()
    assert flagged >= 5 and unflagged >= 5
