"""Eulerian tours, the category of graphs with a chosen tour, and its two
fibrations: over bypass maps (by pulling tours back) and over the cyclic
category (by forgetting vertex labels).

A tour is kept as its canonical rotation, the one that starts at the edge
appearing first in the graph's edge order.

Variance: a morphism ``f: (G, tau) -> (H, sigma)`` goes to the cyclic arrow
``T_{|H|-1} -> T_{|G|-1}``.  The objects of ``T_{|G|-1}`` are the edges of
``G`` in tour order (starting from the canonical start), and the arrow sends
edge ``j`` of ``H`` to the first edge of ``G`` met on the tour at or after the
fiber of ``j``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import factorial
from typing import Sequence

from .cyclic import LambdaArrow, LambdaError
from .graphcat import (BypassMap, Edge, Graph, cycle_graph, hom_enumerate,
                       validate_bypass)
from .homology import determinant

__all__ = [
    "Tour",
    "TourGraph",
    "TourError",
    "LiftReport",
    "canonical_rotation",
    "enumerate_tours",
    "count_tours_oracle",
    "pullback_tour",
    "eul_morphism_valid",
    "eul_hom",
    "right_fibration_check",
    "to_lambda_object",
    "to_lambda_arrow",
    "left_fibration_check",
    "straightening_fiber",
]


class TourError(ValueError):
    pass


def canonical_rotation(g: Graph, seq: Sequence[str]) -> tuple[str, ...]:
    seq = tuple(seq)
    if not seq:
        return seq
    k = min(range(len(seq)), key=lambda i: g.position(seq[i]))
    return seq[k:] + seq[:k]


@dataclass(frozen=True)
class Tour:
    graph: Graph
    order: tuple[str, ...]

    def __post_init__(self):
        g = self.graph
        order = tuple(self.order)
        if not g.edges:
            raise TourError("the empty graph has no tours")
        if sorted(order) != sorted(g.edge_ids):
            raise TourError(f"{order} does not list every edge exactly once")
        for a, b in zip(order, order[1:] + order[:1]):
            if g.tgt(a) != g.src(b):
                raise TourError(f"{a!r} ends at {g.tgt(a)} but {b!r} starts at {g.src(b)}")
        object.__setattr__(self, "order", canonical_rotation(g, order))

    def __str__(self):
        return "(" + " ".join(self.order) + ")"

    def index(self, eid: str) -> int:
        return self.order.index(eid)

    def sources(self) -> tuple[str, ...]:
        """Vertex labels of the stops, read along the tour."""
        return tuple(self.graph.src(e) for e in self.order)


@dataclass(frozen=True)
class TourGraph:
    graph: Graph
    tour: Tour

    def __post_init__(self):
        if self.tour.graph != self.graph:
            raise TourError("tour lives on a different graph")

    @classmethod
    def of(cls, tour: Tour) -> "TourGraph":
        return cls(tour.graph, tour)


def enumerate_tours(g: Graph) -> list[Tour]:
    """All tours of ``g``, one per rotation class, ordered by edge positions.

    Walks are grown from the first edge; since it occurs once in each class,
    every class is produced exactly once.
    """
    if not g.edges:
        return []
    n = len(g.edges)
    out_edges: dict[str, list[int]] = {v: [] for v in g.vertices}
    for i, e in enumerate(g.edges):
        out_edges[e.src].append(i)
    start = g.edges[0]
    found: list[tuple[int, ...]] = []
    used = [False] * n
    used[0] = True
    seq = [0]

    def walk(v: str):
        if len(seq) == n:
            if v == start.src:
                found.append(tuple(seq))
            return
        for i in out_edges[v]:
            if not used[i]:
                used[i] = True
                seq.append(i)
                walk(g.edges[i].tgt)
                seq.pop()
                used[i] = False

    walk(start.tgt)
    found.sort()
    ids = g.edge_ids
    return [Tour(g, tuple(ids[i] for i in s)) for s in found]


def count_tours_oracle(g: Graph) -> int:
    """Tour count by the BEST theorem.

    Arborescences rooted at a fixed vertex come from a minor of the out-degree
    Laplacian; each vertex contributes ``(outdeg - 1)!`` orderings of its
    remaining exits.  Zero when degrees are unbalanced or the edges do not
    form a single connected piece.
    """
    if not g.edges:
        return 0
    if any(g.imbalance().values()):
        return 0
    support = list(g.endpoints())
    parent = {v: v for v in support}

    def find(v):
        while parent[v] != v:
            v = parent[v]
        return v

    for e in g.edges:
        parent[find(e.src)] = find(e.tgt)
    if len({find(v) for v in support}) != 1:
        return 0
    idx = {v: i for i, v in enumerate(support)}
    k = len(support)
    L = [[0] * k for _ in range(k)]
    outdeg = [0] * k
    for e in g.edges:
        a, b = idx[e.src], idx[e.tgt]
        outdeg[a] += 1
        L[a][a] += 1
        L[a][b] -= 1
    minor = [row[1:] for row in L[1:]]
    arbs = determinant(minor)
    total = arbs
    for d in outdeg:
        total *= factorial(d - 1)
    return total


def _pullback_sequence(f: BypassMap, sigma: Tour) -> tuple[str, ...]:
    fib = f.fiber_dict()
    return tuple(e for t in sigma.order for e in fib[t])


def pullback_tour(f: BypassMap, sigma: Tour) -> Tour:
    """Replace each edge of ``sigma`` by its ordered fiber."""
    if sigma.graph != f.target:
        raise TourError("tour is not on the target of the map")
    if not f.source.edges:
        raise TourError("cannot pull a tour back to the empty graph")
    return Tour(f.source, _pullback_sequence(f, sigma))


def eul_morphism_valid(f: BypassMap, tau: Tour, sigma: Tour) -> bool:
    if tau.graph != f.source or sigma.graph != f.target:
        return False
    if not validate_bypass(f).ok:
        return False
    return pullback_tour(f, sigma) == tau


def eul_hom(x: TourGraph, y: TourGraph) -> list[BypassMap]:
    """Morphisms ``x -> y`` over tours: bypass maps pulling ``y``'s tour back to ``x``'s."""
    return [f for f in hom_enumerate(x.graph, y.graph)
            if pullback_tour(f, y.tour) == x.tour]


@dataclass(frozen=True)
class LiftReport:
    instance: str
    lift_count: int
    lifts: tuple = field(default=(), compare=False)

    @property
    def passed(self) -> bool:
        return self.lift_count == 1

    def to_json(self) -> dict:
        return {"instance": self.instance, "lift_count": self.lift_count, "pass": self.passed}


def right_fibration_check(f: BypassMap, sigma: Tour) -> LiftReport:
    """Count the tours ``tau`` on the source with ``f^* sigma == tau``.

    The fiber concatenation is computed without validation and compared with
    every enumerated tour, so a map with a broken fiber order shows up as zero
    lifts instead of an exception.
    """
    name = f"{f!r} over {sigma}"
    if not f.source.edges:
        return LiftReport(name, 0)
    seq = _pullback_sequence(f, sigma)
    lifts = tuple(t for t in enumerate_tours(f.source)
                  if len(seq) == len(t.order)
                  and canonical_rotation(f.source, seq) == t.order)
    return LiftReport(name, len(lifts), lifts)


def to_lambda_object(x: TourGraph) -> int:
    return len(x.graph.edges) - 1


def to_lambda_arrow(f: BypassMap, x: TourGraph, y: TourGraph) -> LambdaArrow:
    """Image of ``f: x -> y`` as an arrow ``T_{|y|-1} -> T_{|x|-1}``."""
    if not eul_morphism_valid(f, x.tour, y.tour):
        raise TourError("not a morphism of graphs with tours")
    m, n = len(x.graph.edges), len(y.graph.edges)
    fib = f.fiber_dict()
    walk = [e for t in y.tour.order for e in fib[t]]
    off = x.tour.index(walk[0])
    pos = {t: j for j, t in enumerate(y.tour.order)}
    fn = f.edge_fn
    image = [pos[fn[e]] for e in walk]  # non-decreasing along the walk

    def G(j: int) -> int:
        q, r = divmod(j, n)
        k = next((k for k in range(m) if image[k] >= r), m)
        return k + q * m + off

    vals = [G(j) for j in range(n + 1)]
    return LambdaArrow(n - 1, m - 1, vals[0] % m, tuple(b - a for a, b in zip(vals, vals[1:])))


def left_fibration_check(x: TourGraph, g: LambdaArrow) -> LiftReport:
    """Count morphisms out of ``x`` lying over ``g: T_k -> T_{|x|-1}``.

    Targets are taken in the skeleton of cycle graphs ``(X_0, ..., X_k, X_0)``
    with their standard tour; every graph with a tour of ``k + 1`` edges is
    uniquely isomorphic to one of these.  A lift also has to carry the labels
    predicted by transporting ``x``'s labels along ``g``.
    """
    m = len(x.graph.edges)
    if g.n != m - 1:
        raise LambdaError(f"{g} does not end at T_{m - 1}")
    S = x.graph.vertices
    k = g.m
    srcs = x.tour.sources()
    expected = tuple(srcs[g.obj(j)] for j in range(k + 1))
    lifts = []
    for labels in itertools.product(S, repeat=k + 1):
        target = cycle_graph(S, *labels)
        y = TourGraph.of(Tour(target, target.edge_ids))
        for f in eul_hom(x, y):
            if to_lambda_arrow(f, x, y) == g:
                lifts.append((labels, f))
    ok_labels = all(lab == expected for lab, _ in lifts)
    return LiftReport(f"{x.tour} along {g}", len(lifts) if ok_labels else -len(lifts),
                      tuple(lifts))


def straightening_fiber(S: Sequence[str], m: int) -> list[TourGraph]:
    """Graphs with edges ``e0..e_{m-1}`` whose tour is exactly that order.

    These are the objects sitting over ``T_{m-1}`` once the edges are
    identified with the objects of ``T_{m-1}``; every source/target assignment
    is tried and the ones closing up into that tour are kept.
    """
    if m < 1:
        raise TourError("need at least one edge")
    out = []
    for ends in itertools.product(S, repeat=2 * m):
        edges = tuple(Edge(f"e{i}", ends[2 * i], ends[2 * i + 1]) for i in range(m))
        g = Graph(tuple(S), edges)
        try:
            tour = Tour(g, g.edge_ids)
        except TourError:
            continue
        out.append(TourGraph(g, tour))
    return out
