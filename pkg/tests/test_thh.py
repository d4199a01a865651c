import itertools
from math import comb

import pytest

from bypass.cyclic import check_functoriality, check_identities, hom_count
from bypass.eulerian import Tour, enumerate_tours
from bypass.graphcat import Edge, Graph, all_graphs, cycle_graph, empty_graph, pair_graph
from bypass.thh import (OthhError, build_othh, itinerary_count_invariance, othh_homology,
                        othh_report, pi0_orbits, tour_decomposition, underlying_tour)

from conftest import loops


def test_empty_graph_levels():
    X = build_othh(empty_graph(("A", "B")), 3)
    for n in range(4):
        assert len(X.level(n)) == 2
        assert all(len(set(x.labels)) == 1 for x in X.level(n))
    assert check_identities(X) == []


def test_one_loop_levels():
    X = build_othh(loops(1), 3)
    assert [len(X.level(n)) for n in range(4)] == [1, 2, 3, 4]


def test_single_edge_is_empty():
    X = build_othh(pair_graph(("A", "B"), "A", "B"), 3)
    assert all(len(X.level(n)) == 0 for n in range(4))
    assert othh_report(pair_graph(("A", "B"), "A", "B")).betti == (0, 0, 0)


def test_identities_and_functoriality():
    for g in (loops(2), cycle_graph(("A", "B"), "A", "B"),
              Graph(("A", "B"), (Edge("a", "A", "B"), Edge("b", "B", "A"), Edge("c", "A", "A")))):
        X = build_othh(g, 3)
        assert check_identities(X) == []
        assert check_functoriality(X, 2) == []


def test_homology_examples():
    assert othh_report(loops(1)).betti == (1, 1, 0)
    rep = othh_report(loops(3))
    assert rep.betti == (2, 2, 0) and rep.passed and rep.torsion == ()
    rep = othh_report(empty_graph(("A", "B", "C")))
    assert rep.betti == (3, 0) and rep.passed
    assert rep.to_json()["betti"] == [3, 0]


def test_rational_and_integer_betti_agree():
    from bypass.homology import homology_all, normalized_chains
    for g in (loops(3), cycle_graph(("A", "B"), "A", "B", "A", "B")):
        cx, _ = normalized_chains(build_othh(g, 3))
        ints = [h.betti for h in homology_all(cx)]
        rats = [h.betti for h in homology_all(cx.over_rationals())]
        assert ints == rats


def test_truncation_does_not_change_low_degrees():
    g = loops(2)
    lo = othh_homology(g, 3)
    hi = othh_homology(g, 4)
    assert lo == hi[:3]


def test_tour_decomposition():
    blocks = tour_decomposition(loops(3))
    assert len(blocks) == 2
    for tour, B in blocks.items():
        assert [h.betti for h in othh_homology(loops(3), 3, B)] == [1, 1, 0]
        for n in range(4):
            assert all(underlying_tour(loops(3), x) == tour for x in B.level(n))
    assert len(tour_decomposition(cycle_graph(("A", "B"), "A", "B"))) == 1
    with pytest.raises(OthhError):
        tour_decomposition(empty_graph(("A",)))


def test_itinerary_counts():
    g = cycle_graph(("A", "B"), "A", "B")
    (t,) = enumerate_tours(g)
    for n in range(4):
        a, b = itinerary_count_invariance(g, t, n)
        assert a == b
        # itineraries of an m-edge tour with n + 1 stops are the cyclic arrows T_n -> T_{m-1}
        assert a == hom_count(n, 1)
    (one,) = enumerate_tours(loops(1))
    for n in range(4):
        assert itinerary_count_invariance(loops(1), one, n) == (n + 1, n + 1)
    g = loops(3)
    for t in enumerate_tours(g):
        assert itinerary_count_invariance(g, t, 0) == (3, 3)


def test_pi0():
    assert len(pi0_orbits(loops(1))) == 1
    res = pi0_orbits(loops(3))
    assert len(res) == 2 and res.bijective
    assert set(res.as_dict()) == set(enumerate_tours(loops(3)))


def test_suite_slice():
    for g in all_graphs(("A", "B"), 3):
        rep = othh_report(g)
        assert rep.passed, (g, rep.betti)
        if g.edges:
            res = pi0_orbits(g)
            assert res.bijective and len(res) == len(enumerate_tours(g))
