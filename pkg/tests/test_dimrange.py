import pytest
from hypothesis import given, settings

from bratteli import criteria, dimrange, ideals
from bratteli.diagram import BratteliDiagram
from bratteli.dynamics import fc2_diagram, sec5_G_diagram, sec5_H_diagram

from _strategies import diagrams


def test_scaled_level_frozen():
    G = sec5_G_diagram(3)
    assert dimrange.scaled_level(G, 0).rank == 1
    assert dimrange.scaled_level(G, 0).scale == (1,)
    lvl = dimrange.scaled_level(G, 2)
    assert lvl.rank == 5
    assert lvl.scale == (2, 2, 2, 1, 1)
    assert lvl == dimrange.scaled_level(sec5_G_diagram(4), 2)


def test_transition_matrix_is_the_adjacency_matrix():
    G = sec5_G_diagram(3)
    for n in range(1, G.depth):
        assert dimrange.transition_matrix(G, n) is G.matrices[n]
    with pytest.raises(ValueError):
        dimrange.transition_matrix(G, 0)
    with pytest.raises(ValueError):
        dimrange.transition_matrix(G, G.depth)


@given(diagrams())
def test_scale_recursion(d):
    for n in range(1, d.depth):
        cur = dimrange.scaled_level(d, n).scale
        nxt = dimrange.scaled_level(d, n + 1).scale
        m = dimrange.transition_matrix(d, n)
        for v in range(len(nxt)):
            assert nxt[v] == sum(m[u][v] * cur[u] for u in range(len(cur)))
    assert dimrange.scaled_level(d, 1).scale == tuple(d.matrices[0][0])


# ------------------------------------------------------------------ zero-one

def test_zero_one_frozen():
    rep = dimrange.zero_one_report(sec5_G_diagram(4))
    assert rep["verdict"] is True
    assert rep["first_bad_level"] is None
    assert rep["clean_from"] == 1

    rep = dimrange.zero_one_report(sec5_H_diagram(4))
    assert rep["verdict"] is False
    assert rep["first_bad_level"] == 1
    assert rep["clean_from"] is None


def test_zero_one_clean_after_early_blowup():
    d = BratteliDiagram([[("r", 1)], [("a", 1)], [("b", 2)], [("c", 2)]],
                        [[[1]], [[2]], [[1]]])
    rep = dimrange.zero_one_report(d)
    assert rep["verdict"] is False
    assert rep["first_bad_level"] == 1
    assert rep["clean_from"] == 2


@given(diagrams())
@settings(deadline=None)
def test_zero_one_matches_multitree(d):
    zo = dimrange.zero_one_report(d)
    mt = criteria.multitree_report(d)
    assert zo["verdict"] == (mt["verdict"] == "MULTITREE")
    assert zo["clean_from"] == mt["min_clean_level"]


# -------------------------------------------------------------- order ideals

def test_order_ideal_shapes():
    F = fc2_diagram(2)
    assert dimrange.enumerate_order_ideals(F) == [
        ((), ()), ((), (0,)), ((), (1,)), ((0,), (0, 1))]


def test_depth_one_supports_are_all_subsets():
    d = BratteliDiagram([[("r", 1)], [("a", 1), ("b", 1), ("c", 1)]],
                        [[[1, 1, 1]]])
    assert len(dimrange.enumerate_order_ideals(d)) == 8


def test_order_ideal_counts_match_ideal_counts():
    for d in (fc2_diagram(3), sec5_G_diagram(2), sec5_H_diagram(2)):
        assert len(dimrange.enumerate_order_ideals(d)) == \
            len(ideals.enumerate_ideals(d))


def test_order_ideal_map_is_a_bijection():
    d = fc2_diagram(3)
    supports = set(dimrange.enumerate_order_ideals(d))
    seen = set()
    for S in ideals.enumerate_ideals(d):
        sup = dimrange.order_ideal_map(d, list(S))
        assert sup in supports
        assert tuple(dimrange.order_ideal_union(d, sup)) == S
        seen.add(sup)
    assert seen == supports


def test_order_ideal_union_inverts_from_the_other_side():
    d = sec5_G_diagram(2)
    for sup in dimrange.enumerate_order_ideals(d):
        S = dimrange.order_ideal_union(d, sup)
        assert ideals.is_ideal(d, S)[0]
        assert dimrange.order_ideal_map(d, S) == sup


def test_order_ideal_map_rejects_non_ideal():
    with pytest.raises(ValueError):
        dimrange.order_ideal_map(sec5_G_diagram(2), ["01"])


def test_order_ideal_guard():
    wide = BratteliDiagram(
        [[("r", 1)], [(f"a{i}", 1) for i in range(3)]], [[[1, 1, 1]]])
    with pytest.raises(ValueError):
        dimrange.enumerate_order_ideals(wide, guard=2)


def test_is_order_ideal_rejects_unsupported_growth():
    # support that gains a vertex with no supported parent
    F = fc2_diagram(2)
    ok, why = dimrange.is_order_ideal(F, ((0,), (0,)))
    assert not ok and why["clause"] == "downward"
    assert dimrange.is_order_ideal(F, ((0,), (0, 1))) == (True, None)
    ok, why = dimrange.is_order_ideal(F, ((0,),))
    assert not ok and why["clause"] == "shape"
