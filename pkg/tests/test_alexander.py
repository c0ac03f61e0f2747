import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import CORPUS
from lslab.alexander import (
    BivariatePolynomial,
    InexactDivision,
    NormalizationMismatch,
    PreconditionViolated,
    alexander_from_graph,
    component_alexander,
    divide_by_one_minus,
    incomparable_pair,
    ordered_type,
    poly_mul,
    one_minus,
    recover_delta1,
    support_on_line,
    symmetry_check,
    torres_check,
)
from lslab.alg_link import build
from lslab.hfun import ValueSemigroup

P = BivariatePolynomial


def lam(s):
    return build([(2, 3), (2, 2 * s - 11)], [(2, 3)], "I", 1)


def lam_expected(s):
    first = P({(0, 0): 1, (4, 2): 1, (6, 3): 1, (8, 4): 1, (10, 5): 1, (14, 7): 1})
    return first * P({(0, 0): 1, (2 * s + 1, 6): 1})


@pytest.fixture(scope="module")
def two_trefoils():
    return build([(2, 3)], [(2, 3)], "I", 0)


def test_two_trefoils(two_trefoils):
    delta = alexander_from_graph(two_trefoils)
    assert delta == P({(0, 0): 1, (2, 3): 1}) * P({(0, 0): 1, (3, 2): 1})
    assert delta.to_json() == '{"terms":[[0,0,1],[2,3,1],[3,2,1],[5,5,1]]}'
    assert P.from_json(delta.to_json()) == delta


@pytest.mark.parametrize("s", [6, 7, 8, 9, 10])
def test_lambda_family(s):
    assert alexander_from_graph(lam(s)) == lam_expected(s)


def test_ordered_type():
    assert ordered_type(alexander_from_graph(lam(6)))
    assert ordered_type(P.one())
    for s in (7, 8, 9, 10):
        delta = alexander_from_graph(lam(s))
        pair = incomparable_pair(delta)
        assert pair is not None
        assert (14, 7) in pair and (2 * s + 1, 6) in pair


def test_lambda_seven_support_is_symmetric():
    L = lam(7)
    delta = alexander_from_graph(L)
    assert len(delta.support()) == 12
    assert symmetry_check(delta, L.c)


def test_torres_two_trefoils(two_trefoils):
    delta = alexander_from_graph(two_trefoils)
    expected = divide_by_one_minus(poly_mul({0: 1, 1: -1, 2: 1}, one_minus(4)), 1)
    assert delta.at_t2_one() == expected
    assert torres_check(two_trefoils, delta)
    assert recover_delta1(delta, 4) == {0: 1, 1: -1, 2: 1}


def test_unknot_component_restriction():
    L = build([(2, 3)], [], "I", 0)
    delta = alexander_from_graph(L)
    assert delta.at_t1_one() == divide_by_one_minus(one_minus(L.l), 1)


def test_torres_mismatch_is_reported(two_trefoils):
    wrong = P({(0, 0): 1, (1, 1): 1})
    with pytest.raises(NormalizationMismatch):
        torres_check(two_trefoils, wrong)


def test_symmetry_of_two_trefoils(two_trefoils):
    assert symmetry_check(alexander_from_graph(two_trefoils), (6, 6))
    assert not symmetry_check(P({(0, 0): 1, (2, 3): 1}), (6, 6))


def test_support_on_line(two_trefoils):
    delta = alexander_from_graph(two_trefoils)
    assert support_on_line(two_trefoils, delta, 2) == 3
    assert support_on_line(two_trefoils, delta, 3) == 2
    with pytest.raises(PreconditionViolated):
        support_on_line(two_trefoils, delta, 1)


def test_component_alexander_matches_branch(two_trefoils):
    assert component_alexander(two_trefoils, 1) == {0: 1, 1: -1, 2: 1}


def test_inexact_division():
    with pytest.raises(InexactDivision):
        P({(0, 0): 1, (1, 0): 1}).divide_by_binomial((1, 0))
    with pytest.raises(InexactDivision):
        P.one().divide_by_binomial((0, 0))


polys = st.dictionaries(st.tuples(st.integers(0, 6), st.integers(0, 6)), st.integers(-3, 3), max_size=8)


@settings(max_examples=200, deadline=None)
@given(polys, st.tuples(st.integers(0, 4), st.integers(0, 4)).filter(lambda e: e != (0, 0)))
def test_division_inverts_multiplication(terms, exponent):
    p = P(terms)
    assert (p * P.binomial(exponent)).divide_by_binomial(exponent) == p


def test_corpus_identities():
    for L in CORPUS:
        delta = alexander_from_graph(L)
        pts = delta.support()
        assert set(delta.terms.values()) <= {1}
        assert torres_check(L, delta)
        assert symmetry_check(delta, L.c)
        assert delta.degree() == (L.c[0] - 1, L.c[1] - 1)
        assert len({a for a, _ in pts}) == len(pts) and len({b for _, b in pts}) == len(pts)
        semigroup = ValueSemigroup(L)
        assert all(p in semigroup for p in pts)
        assert ordered_type(delta) == (incomparable_pair(delta) is None)


def test_corpus_support_on_line():
    from lslab.alg_link import branch_semigroup

    checked = 0
    for L in CORPUS[:40]:
        delta = alexander_from_graph(L)
        s1 = branch_semigroup(L.branch1)
        for v1 in range(1, L.l):
            if v1 in s1:
                assert support_on_line(L, delta, v1) > 0
                checked += 1
    assert checked > 20


def test_trefoil_cable_support_with_coordinates_swapped():
    cable = build([(2, 3)], [(2, 3), (3, 2)], "I", 1)
    cable_first = [(0, 0), (6, 2), (9, 3), (12, 4), (15, 5), (21, 7), (20, 6), (26, 8), (29, 9),
                 (32, 10), (35, 11), (41, 13), (40, 12), (46, 14), (49, 15), (52, 16), (55, 17), (61, 19)]
    assert set(alexander_from_graph(cable).support()) == {(b, a) for a, b in cable_first}
    assert ordered_type(alexander_from_graph(cable))
