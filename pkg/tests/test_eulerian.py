import itertools

import pytest
from hypothesis import given, strategies as st

from bypass.cyclic import LambdaArrow, lambda_compose, lambda_hom, lambda_id
from bypass.eulerian import (Tour, TourError, TourGraph, count_tours_oracle, enumerate_tours,
                             eul_hom, eul_morphism_valid, left_fibration_check, pullback_tour,
                             right_fibration_check, straightening_fiber, to_lambda_arrow,
                             to_lambda_object)
from bypass.graphcat import (BypassMap, Edge, Graph, all_graphs, compose, cycle_graph, empty_graph,
                             generator_compose, hom_enumerate, identity, pair_graph, tensor)
from bypass.suite import corrupt_instance

from conftest import loops


def brute_force_tours(g):
    """Rotation classes of edge permutations that close up."""
    classes = set()
    if not g.edges:
        return classes
    for perm in itertools.permutations(g.edge_ids):
        if all(g.tgt(a) == g.src(b) for a, b in zip(perm, perm[1:] + perm[:1])):
            classes.add(min(perm[k:] + perm[:k] for k in range(len(perm))))
    return classes


def test_tour_counts_on_small_examples():
    assert len(enumerate_tours(loops(1))) == 1
    assert len(enumerate_tours(loops(3))) == 2
    assert enumerate_tours(pair_graph(("A", "B"), "A", "B")) == []
    assert enumerate_tours(empty_graph(("A",))) == []


def test_oracle_on_small_examples():
    S = ("A", "B", "C")
    two_two = Graph(S, (Edge("a", "A", "B"), Edge("b", "A", "B"),
                        Edge("c", "B", "A"), Edge("d", "B", "A")))
    assert count_tours_oracle(two_two) == len(enumerate_tours(two_two)) == 2
    assert count_tours_oracle(cycle_graph(S, "A", "B", "C")) == 1
    split = Graph(S, (Edge("x", "A", "A"), Edge("y", "B", "B")))
    assert count_tours_oracle(split) == 0 == len(enumerate_tours(split))


def test_enumeration_matches_permutation_brute_force():
    for g in all_graphs(("A", "B"), 4):
        got = {t.order for t in enumerate_tours(g)}
        want = {min(c[k:] + c[:k] for k in range(len(c))) for c in brute_force_tours(g)}
        # canonical rotation starts at the first edge in edge order, which for
        # generated graphs (ids e0, e1, ...) is also the smallest id
        assert got == want


def test_oracle_matches_enumeration_on_three_vertices():
    for g in all_graphs(("A", "B", "C"), 4):
        assert count_tours_oracle(g) == len(enumerate_tours(g))


def test_tour_validation_and_canonical_form():
    g = loops(3)
    assert Tour(g, ("e2", "e0", "e1")).order == ("e0", "e1", "e2")
    assert Tour(g, ("e1", "e2", "e0")) == Tour(g, ("e0", "e1", "e2"))
    with pytest.raises(TourError):
        Tour(g, ("e0", "e1"))
    with pytest.raises(TourError):
        Tour(empty_graph(("A",)), ())
    with pytest.raises(TourError):
        Tour(pair_graph(("A", "B"), "A", "B"), ("e0",))


def test_pullback_examples():
    one = loops(1)
    (sigma,) = enumerate_tours(one)
    f = BypassMap(loops(2), one, (("e0", "e1"),))
    assert pullback_tour(f, sigma).order == ("e0", "e1")
    assert pullback_tour(identity(one), sigma) == sigma
    with pytest.raises(TourError):
        pullback_tour(BypassMap(empty_graph(("A",)), one, ((),)), sigma)


def test_pullback_skips_inserted_loops():
    S = ("A", "B")
    src = cycle_graph(S, "A", "B")
    tgt = Graph(S, (Edge("x", "A", "B"), Edge("l", "B", "B"), Edge("y", "B", "A")))
    f = BypassMap(src, tgt, (("e0",), (), ("e1",)))
    (sigma,) = enumerate_tours(tgt)
    assert pullback_tour(f, sigma).order == ("e0", "e1")
    rep = right_fibration_check(f, sigma)
    assert rep.passed and rep.lifts[0].order == ("e0", "e1")


def test_pullback_respects_rotation_and_composition():
    gs = [g for g in all_graphs(("A", "B"), 3) if g.edges]
    for a in gs:
        for b in gs:
            for f in hom_enumerate(a, b):
                for s in enumerate_tours(b):
                    k = len(s.order)
                    for r in range(k):
                        rotated = Tour(b, s.order[r:] + s.order[:r])
                        assert pullback_tour(f, rotated) == pullback_tour(f, s)
                for c in gs:
                    for g in hom_enumerate(b, c):
                        for s in enumerate_tours(c):
                            assert pullback_tour(compose(g, f), s) == \
                                pullback_tour(f, pullback_tour(g, s))


def test_eul_morphisms():
    g = loops(3)
    t1, t2 = enumerate_tours(g)
    assert eul_morphism_valid(identity(g), t1, t1)
    assert not eul_morphism_valid(identity(g), t1, t2)
    S = ("A", "B")
    m = generator_compose(S, "A", "B", "A")
    (tau,) = enumerate_tours(m.source)
    (sigma,) = enumerate_tours(m.target)
    assert eul_morphism_valid(m, tau, sigma)


def test_right_fibration_on_identities_and_corruption():
    g = loops(3)
    for s in enumerate_tours(g):
        rep = right_fibration_check(identity(g), s)
        assert rep.passed and rep.lifts == (s,)
    f, s = corrupt_instance()
    rep = right_fibration_check(f, s)
    assert rep.lift_count == 0 and not rep.to_json()["pass"]


def test_lambda_image_examples():
    one = loops(1)
    y = TourGraph.of(enumerate_tours(one)[0])
    f = BypassMap(loops(2), one, (("e0", "e1"),))
    x = TourGraph.of(pullback_tour(f, y.tour))
    assert to_lambda_object(x) == 1
    assert to_lambda_arrow(f, x, y) == LambdaArrow(0, 1, 0, (2,))
    g = BypassMap(loops(2), one, (("e1", "e0"),))
    assert to_lambda_arrow(g, x, y) == LambdaArrow(0, 1, 1, (2,))
    for t in enumerate_tours(loops(3)):
        z = TourGraph.of(t)
        assert to_lambda_arrow(identity(z.graph), z, z) == lambda_id(2)
    with pytest.raises(TourError):
        to_lambda_arrow(identity(loops(3)), TourGraph.of(enumerate_tours(loops(3))[0]),
                        TourGraph.of(enumerate_tours(loops(3))[1]))


def test_lambda_image_is_a_bijection_for_one_vertex():
    for a, b in itertools.product(range(1, 5), repeat=2):
        x = TourGraph.of(enumerate_tours(loops(a))[0])
        y = TourGraph.of(enumerate_tours(loops(b))[-1])
        arrows = [to_lambda_arrow(f, x, y) for f in eul_hom(x, y)]
        assert len(set(arrows)) == len(arrows)
        assert set(arrows) == set(lambda_hom(b - 1, a - 1))


def test_left_fibration_examples():
    S = ("A", "B")
    x = TourGraph.of(enumerate_tours(cycle_graph(S, "A", "B"))[0])
    rep = left_fibration_check(x, lambda_id(1))
    assert rep.passed
    ((labels, f),) = rep.lifts
    assert labels == ("A", "B") and f.fibers == (("e0",), ("e1",))
    for k in range(4):
        for g in lambda_hom(k, 1):
            assert left_fibration_check(x, g).passed


def test_straightening_counts():
    for S in (("A",), ("A", "B"), ("A", "B", "C")):
        for m in range(1, 4):
            fiber = straightening_fiber(S, m)
            assert len(fiber) == len(S) ** m
            assert sorted(x.tour.sources() for x in fiber) == sorted(itertools.product(S, repeat=m))


edges = st.lists(st.tuples(st.sampled_from("ABC"), st.sampled_from("ABC")), max_size=6)


@given(edges)
def test_oracle_agrees_on_random_graphs(es):
    g = Graph(("A", "B", "C"), tuple(Edge(f"e{i}", *p) for i, p in enumerate(es)))
    assert count_tours_oracle(g) == len(enumerate_tours(g))


@given(edges, st.integers(0, 5))
def test_tour_sets_do_not_depend_on_edge_order(es, shift):
    g = Graph(("A", "B", "C"), tuple(Edge(f"e{i}", *p) for i, p in enumerate(es)))
    k = len(es)
    if not k:
        return
    perm = g.edges[shift % k:] + g.edges[:shift % k]
    h = Graph(g.vertices, perm)
    assert {t.order for t in enumerate_tours(g)} == \
        {Tour(g, t.order).order for t in enumerate_tours(h)}
