import json

import pytest

from test_hfun import whitehead
from lslab.alg_link import build
from lslab.hf_complex import (
    ComplexError,
    FramingMatrix,
    arrows_from,
    auto_margin,
    build_all,
    check_gradings,
    check_square_zero,
    class_representatives,
    homology_dim,
    in_regime,
    ls_test,
)
from lslab.hfun import h_from_alexander, h_table
from lslab.rational import Verdict

N = 6


@pytest.fixture(scope="module")
def trefoils():
    return h_from_alexander(build([(2, 3)], [(2, 3)], "I", 0))


def test_framing_matrix():
    f = FramingMatrix(7, 7, 4)
    assert f.det == 33 and f.homology_order == 33 and f.is_positive_definite()
    assert len(class_representatives(f)) == 33
    assert len({f.class_key(w) for w in class_representatives(f)}) == 33
    assert f.class_key((7, 4)) == f.class_key((0, 0))
    assert FramingMatrix(4, 4, 4).homology_order is None
    assert not FramingMatrix(3, 3, 4).is_positive_definite()


def test_arrow_exponents_follow_the_h_function(trefoils):
    h, f, w = trefoils, FramingMatrix(7, 7, 4), (2, 4)
    arrows = {(smaller, target): e for smaller, target, e, _ in arrows_from(h, f, (1, 2), w)}
    assert arrows[((2,), w)] == h(w) - h.h2(w[1])
    assert arrows[((1,), w)] == h(w) - h.h1(w[0])
    for _, _, e, _ in arrows_from(h, f, (1,), w):
        assert e >= 0
    assert arrows_from(h, f, (), w) == []


@pytest.mark.parametrize("framing", [(7, 7, 4), (5, 4, 4), (3, 6, 4), (1, 3, 4), (2, 9, 4)])
def test_square_zero_and_gradings(trefoils, framing):
    f = FramingMatrix(*framing)
    for cx in build_all(trefoils, f, auto_margin(f), 3).values():
        check_square_zero(cx)
        check_gradings(cx, trefoils)


def test_seven_seven_is_an_lspace(trefoils):
    f = FramingMatrix(7, 7, 4)
    complexes = build_all(trefoils, f, auto_margin(f), N)
    assert len(complexes) == 33
    assert all(homology_dim(cx) == N for cx in complexes.values())
    assert ls_test(trefoils, f).verdict is Verdict.LSPACE


def test_three_six_is_an_lspace(trefoils):
    assert ls_test(trefoils, FramingMatrix(3, 6, 4)).verdict is Verdict.LSPACE


def test_two_nine_has_excess_homology(trefoils):
    f = FramingMatrix(2, 9, 4)
    result = ls_test(trefoils, f)
    assert result.verdict is Verdict.NOT_LSPACE
    assert any(a > N for a, _ in result.dims.values())


def test_singular_and_out_of_regime(trefoils):
    assert ls_test(trefoils, FramingMatrix(4, 4, 4)).verdict is Verdict.NOT_LSPACE
    assert ls_test(trefoils, FramingMatrix(-3, 5, 4)).verdict is Verdict.INDETERMINATE
    assert not in_regime(FramingMatrix(0, 5, 4))
    with pytest.raises(ComplexError):
        build_all(trefoils, FramingMatrix(-3, 5, 4), 5)


def test_unlink_surgeries_are_lspaces():
    unlink = h_table([[0]], (0, 0), (0, 0))
    for d in [(1, 1), (2, 3), (5, 1)]:
        f = FramingMatrix(*d, 0)
        assert all(homology_dim(cx) == N for cx in build_all(unlink, f, auto_margin(f), N).values())
        assert ls_test(unlink, f).verdict is Verdict.LSPACE


def test_whitehead_small_positive_surgeries():
    h = whitehead()
    for d in [(1, 1), (1, 3), (2, 2), (3, 1)]:
        assert ls_test(h, FramingMatrix(*d, 0), checks=True).verdict is Verdict.LSPACE


def test_verdict_stable_under_truncation_growth(trefoils):
    f = FramingMatrix(6, 5, 4)
    base = ls_test(trefoils, f).verdict
    assert ls_test(trefoils, f, margin=auto_margin(f) + 4, power=N + 2).verdict is base


def test_complex_json_dump(trefoils):
    f = FramingMatrix(3, 6, 4)
    cx = next(iter(build_all(trefoils, f, 4, 2).values()))
    data = json.loads(cx.to_json())
    assert data["framing"] == [3, 6, 4] and len(data["generators"]) == len(cx.generators)
    assert all(len(a) == 3 for a in data["arrows"])
