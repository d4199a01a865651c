"""The cyclic set of itineraries of a graph and its homology.

A level-``n`` simplex over a graph ``G`` is a bypass map
``G -> (X_0, ..., X_n, X_0)`` into a cycle graph: an Eulerian tour of ``G``
with ``n + 1`` marked stops at the labels ``X_i``.  A cyclic arrow
``f: T_j -> T_k`` acts by postcomposition with the bypass map
``(X_0, ..., X_k, X_0) -> (Y_0, ..., Y_j, Y_0)``, ``Y_i = X_{o(v_i)}``, whose
fiber over edge ``i`` is the path ``f`` assigns to ``e_i``.

The linear Hochschild engine lives in :mod:`bypass.enriched` and is
re-exported here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .cyclic import LambdaArrow, TruncatedCyclicSet, check_identities, set_colimit
from .enriched import *  # noqa: F401,F403
from .enriched import __all__ as _enriched_all
from .eulerian import Tour, enumerate_tours
from .graphcat import BypassMap, Edge, Graph, cycle_graph, graph_to_json, hom_enumerate
from .homology import HomologyEntry, homology_all, normalized_chains

__all__ = [
    "OthhSimplex",
    "OthhError",
    "OthhReport",
    "build_othh",
    "othh_homology",
    "othh_report",
    "underlying_tour",
    "tour_decomposition",
    "restrict",
    "itinerary_count_invariance",
    "pi0_orbits",
    "Pi0Result",
    "one_vertex_loops",
] + list(_enriched_all)


class OthhError(ValueError):
    pass


@dataclass(frozen=True)
class OthhSimplex:
    """Labels ``(X_0..X_n)`` and, per cycle edge, its ordered fiber in ``G``."""

    labels: tuple[str, ...]
    fibers: tuple[tuple[str, ...], ...]

    @property
    def level(self) -> int:
        return len(self.labels) - 1

    def walk(self) -> tuple[str, ...]:
        return tuple(e for fib in self.fibers for e in fib)

    def to_map(self, g: Graph) -> BypassMap:
        return BypassMap(g, cycle_graph(g.vertices, *self.labels), self.fibers)

    def __str__(self):
        stops = " ".join(f"{x}[{','.join(fib)}]" for x, fib in zip(self.labels, self.fibers))
        return f"<{stops}>"


def _act(f: LambdaArrow, x: OthhSimplex) -> OthhSimplex:
    if x.level != f.n:
        raise OthhError(f"{f} cannot act on a level-{x.level} simplex")
    k = f.n + 1
    labels, fibers = [], []
    for i in range(f.m + 1):
        start = f.lift(i)
        labels.append(x.labels[start % k])
        fibers.append(tuple(e for s in range(start, start + f.legs[i]) for e in x.fibers[s % k]))
    return OthhSimplex(tuple(labels), tuple(fibers))


def build_othh(g: Graph, dim: int = 3, labels: Sequence[str] | None = None) -> TruncatedCyclicSet:
    """Levels ``0..dim`` of the itinerary cyclic set of ``g``.

    Label tuples range over ``labels`` (default: the endpoints of ``g``, or
    all vertices when ``g`` is empty).  Every stop of an itinerary of a
    nonempty graph sits at an endpoint of some edge, so the default loses
    nothing.
    """
    if dim < 1:
        raise OthhError("need dim >= 1")
    if labels is None:
        labels = g.endpoints() if g.edges else g.vertices
    levels = []
    for n in range(dim + 1):
        level = []
        for xs in itertools.product(labels, repeat=n + 1):
            for f in hom_enumerate(g, cycle_graph(g.vertices, *xs)):
                level.append(OthhSimplex(xs, f.fibers))
        levels.append(tuple(level))
    return TruncatedCyclicSet(dim, tuple(levels), _act, f"O_thh({g!r})")


def underlying_tour(g: Graph, x: OthhSimplex) -> Tour:
    return Tour(g, x.walk())


def restrict(X: TruncatedCyclicSet, keep) -> TruncatedCyclicSet:
    """Sub-cyclic set on the simplices satisfying ``keep``."""
    levels = tuple(tuple(x for x in X.level(n) if keep(x)) for n in range(X.dim + 1))
    return TruncatedCyclicSet(X.dim, levels, X.act, X.name)


@dataclass(frozen=True)
class OthhReport:
    graph: Graph
    eul_count: int
    entries: tuple[HomologyEntry, ...]
    expected_betti: tuple[int, ...]

    @property
    def betti(self) -> tuple[int, ...]:
        return tuple(e.betti for e in self.entries)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for e in self.entries for d in e.torsion)

    @property
    def passed(self) -> bool:
        return self.betti == self.expected_betti and not self.torsion

    def to_json(self) -> dict:
        return {"graph": graph_to_json(self.graph), "eul_count": self.eul_count,
                "betti": list(self.betti), "torsion": list(self.torsion), "pass": self.passed}


def othh_homology(g: Graph, dim: int = 3, X: TruncatedCyclicSet | None = None) -> list[HomologyEntry]:
    """Integer homology in degrees ``0..dim-1`` of the itinerary cyclic set."""
    if X is None:
        X = build_othh(g, dim)
    cx, _ = normalized_chains(X, dim)
    return homology_all(cx)


def othh_report(g: Graph, dim: int = 3, X: TruncatedCyclicSet | None = None) -> OthhReport:
    """Homology plus the expected answer: a circle per tour, or one point per
    label when ``g`` is empty.

    For the empty graph only degrees 0 and 1 are reported.
    """
    entries = othh_homology(g, dim, X)
    if g.edges:
        k = len(enumerate_tours(g))
        expected = (k, k) + (0,) * (len(entries) - 2)
    else:
        k = 0
        entries = entries[:2]
        expected = (len(g.vertices), 0)
    return OthhReport(g, k, tuple(entries), expected)


def tour_decomposition(g: Graph, X: TruncatedCyclicSet | None = None,
                       dim: int = 3) -> dict[Tour, TruncatedCyclicSet]:
    """Split the itinerary cyclic set by underlying tour.

    Raises if an operator moves a simplex to a different tour.
    """
    if not g.edges:
        raise OthhError("the empty graph has no tours")
    if X is None:
        X = build_othh(g, dim)
    tours = enumerate_tours(g)
    blocks = {t: restrict(X, lambda x, t=t: underlying_tour(g, x) == t) for t in tours}
    for t, B in blocks.items():
        fails = [f for f in check_identities(B) if "leaves level" in f]
        if fails:
            raise OthhError(f"block of {t} is not closed: {fails[0]}")
    return blocks


def one_vertex_loops(m: int, label: str = "*") -> Graph:
    return Graph((label,), tuple(Edge(f"e{i}", label, label) for i in range(m)))


def _count_over(g: Graph, tour: Tour, labels: Sequence[str], n: int) -> int:
    count = 0
    for xs in itertools.product(labels, repeat=n + 1):
        for f in hom_enumerate(g, cycle_graph(g.vertices, *xs)):
            if Tour(g, tuple(e for fib in f.fibers for e in fib)) == tour:
                count += 1
    return count


@lru_cache(maxsize=None)
def _unlabeled_count(m: int, n: int) -> int:
    loops = one_vertex_loops(m)
    return _count_over(loops, Tour(loops, loops.edge_ids), ("*",), n)


def itinerary_count_invariance(g: Graph, tour: Tour, n: int,
                               X: TruncatedCyclicSet | None = None) -> tuple[int, int]:
    """``(labeled, unlabeled)`` counts of ``n``-simplices over ``tour``.

    The unlabeled count uses ``m`` loops at a single vertex, taken with the
    tour ``(e0, ..., e_{m-1})``.  When ``X`` (the itinerary cyclic set of
    ``g``) is given, the labeled count is read off its level ``n``.
    """
    if X is not None and n <= X.dim:
        labeled = sum(1 for x in X.level(n) if underlying_tour(g, x) == tour)
    else:
        labeled = _count_over(g, tour, g.endpoints(), n)
    return labeled, _unlabeled_count(len(g.edges), n)


@dataclass(frozen=True)
class Pi0Result:
    """Components of the itinerary cyclic set and the tours seen in each."""

    classes: tuple[tuple[OthhSimplex, ...], ...]
    class_tours: tuple[frozenset, ...]
    tours: tuple[Tour, ...]

    def __len__(self) -> int:
        return len(self.classes)

    @property
    def bijective(self) -> bool:
        """The underlying-tour map is well defined and a bijection onto all tours."""
        if any(len(ts) != 1 for ts in self.class_tours):
            return False
        image = [next(iter(ts)) for ts in self.class_tours]
        return len(set(image)) == len(image) and set(image) == set(self.tours)

    def as_dict(self) -> dict[Tour, tuple[OthhSimplex, ...]]:
        if not self.bijective:
            raise OthhError("components do not correspond to tours")
        return {next(iter(ts)): c for ts, c in zip(self.class_tours, self.classes)}


def pi0_orbits(g: Graph, X: TruncatedCyclicSet | None = None) -> Pi0Result:
    """Connected components of the itinerary cyclic set, each with its tours."""
    if not g.edges:
        raise OthhError("the empty graph has no tours")
    if X is None:
        X = build_othh(g, 2)
    classes = tuple(tuple(c) for c in set_colimit(X))
    class_tours = tuple(frozenset(underlying_tour(g, x) for x in c) for c in classes)
    return Pi0Result(classes, class_tours, tuple(enumerate_tours(g)))
