"""Directed multigraphs on a fixed vertex set and the category of bypass operations.

A bypass operation ``f: G -> H`` is a function on edges together with a total
order on every fiber.  Each fiber, read in order, must be a path in ``G`` from
the source to the target of its image edge; an empty fiber is only allowed
over a loop.

Graphs and maps are immutable.  Edge order inside a :class:`Graph` is part of
its presentation (it fixes enumeration order and canonical tour rotations) but
not of its identity: two graphs are equal when they have the same vertices and
the same set of ``(id, src, tgt)`` triples.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "Edge",
    "Graph",
    "BypassMap",
    "BypassReport",
    "GraphError",
    "validate_bypass",
    "identity",
    "compose",
    "tensor",
    "tensor_maps",
    "symmetry",
    "pair_graph",
    "path_graph",
    "cycle_graph",
    "empty_graph",
    "hom_enumerate",
    "generator_compose",
    "generator_unit",
    "decompose",
    "graph_from_json",
    "graph_to_json",
    "map_from_json",
    "map_to_json",
    "all_graphs",
]


class GraphError(ValueError):
    """Malformed graph or map data (unknown labels, ids, or shape errors)."""


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    tgt: str

    @property
    def is_loop(self) -> bool:
        return self.src == self.tgt


@dataclass(frozen=True, eq=False)
class Graph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...] = ()
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        verts = tuple(self.vertices)
        edges = tuple(e if isinstance(e, Edge) else Edge(*e) for e in self.edges)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)
        if len(set(verts)) != len(verts):
            raise GraphError(f"duplicate vertex labels in {verts}")
        vset = set(verts)
        index = {}
        for pos, e in enumerate(edges):
            if e.id in index:
                raise GraphError(f"duplicate edge id {e.id!r}")
            if e.src not in vset or e.tgt not in vset:
                raise GraphError(f"edge {e.id!r} has an endpoint outside {verts}")
            index[e.id] = pos
        object.__setattr__(self, "_index", index)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and set(self.edges) == set(other.edges)

    def __hash__(self):
        return hash((self.vertices, frozenset(self.edges)))

    def __len__(self) -> int:
        return len(self.edges)

    def __repr__(self):
        body = ", ".join(f"{e.id}:{e.src}->{e.tgt}" for e in self.edges)
        return f"Graph({list(self.vertices)}, [{body}])"

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    def edge(self, eid: str) -> Edge:
        try:
            return self.edges[self._index[eid]]
        except KeyError:
            raise GraphError(f"unknown edge id {eid!r}") from None

    def position(self, eid: str) -> int:
        """Position of an edge in the presentation order."""
        try:
            return self._index[eid]
        except KeyError:
            raise GraphError(f"unknown edge id {eid!r}") from None

    def has_edge(self, eid: str) -> bool:
        return eid in self._index

    def src(self, eid: str) -> str:
        return self.edge(eid).src

    def tgt(self, eid: str) -> str:
        return self.edge(eid).tgt

    def imbalance(self) -> dict[str, int]:
        """Out-degree minus in-degree at every vertex."""
        bal = dict.fromkeys(self.vertices, 0)
        for e in self.edges:
            bal[e.src] += 1
            bal[e.tgt] -= 1
        return bal

    def endpoints(self) -> tuple[str, ...]:
        used = {e.src for e in self.edges} | {e.tgt for e in self.edges}
        return tuple(v for v in self.vertices if v in used)

    def relabel(self, ids: Sequence[str]) -> "Graph":
        """Same graph with edge ids replaced positionally."""
        if len(ids) != len(self.edges):
            raise GraphError("relabel needs one id per edge")
        return Graph(self.vertices, tuple(Edge(i, e.src, e.tgt) for i, e in zip(ids, self.edges)))


def _check_label(vertices: Sequence[str], labels: Iterable[str]) -> None:
    vset = set(vertices)
    for x in labels:
        if x not in vset:
            raise GraphError(f"unknown vertex label {x!r}")


def empty_graph(vertices: Sequence[str]) -> Graph:
    return Graph(tuple(vertices))


def pair_graph(vertices: Sequence[str], x: str, y: str) -> Graph:
    """The graph ``(x, y)`` with a single edge ``e0: x -> y``."""
    return path_graph(vertices, x, y)


def path_graph(vertices: Sequence[str], *labels: str) -> Graph:
    """The graph ``(X0, ..., Xn)``: edges ``e_i: X_i -> X_{i+1}``."""
    if not labels:
        raise GraphError("path_graph needs at least one label")
    _check_label(vertices, labels)
    edges = tuple(Edge(f"e{i}", a, b) for i, (a, b) in enumerate(zip(labels, labels[1:])))
    return Graph(tuple(vertices), edges)


def cycle_graph(vertices: Sequence[str], *labels: str) -> Graph:
    """The graph ``(X0, ..., Xn, X0)``; ``cycle_graph(S, A)`` is one loop at ``A``."""
    if not labels:
        raise GraphError("cycle_graph needs at least one label")
    return path_graph(vertices, *labels, labels[0])


@dataclass(frozen=True, eq=False)
class BypassMap:
    """A morphism of ``Bypass_S``.

    ``fibers`` holds one ordered tuple of source edge ids per target edge, in
    the target's edge order.  ``edge_fn`` is derived from it.
    """

    source: Graph
    target: Graph
    fibers: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "fibers", tuple(tuple(f) for f in self.fibers))

    @classmethod
    def from_dicts(cls, source: Graph, target: Graph,
                   fiber_orders: Mapping[str, Sequence[str]],
                   edge_fn: Mapping[str, str] | None = None) -> "BypassMap":
        """Build from the JSON-style dictionaries, checking they agree."""
        for t in fiber_orders:
            if not target.has_edge(t):
                raise GraphError(f"fiber given for unknown target edge {t!r}")
        fibers = tuple(tuple(fiber_orders.get(t, ())) for t in target.edge_ids)
        f = cls(source, target, fibers)
        if edge_fn is not None:
            derived = f.edge_fn
            if dict(edge_fn) != derived:
                raise GraphError("edge_fn disagrees with fiber_orders")
        return f

    def __eq__(self, other):
        if not isinstance(other, BypassMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.fiber_dict() == other.fiber_dict())

    def __hash__(self):
        return hash((self.source, self.target, frozenset(self.fiber_dict().items())))

    def __repr__(self):
        body = ", ".join(f"{t}<-{list(f)}" for t, f in zip(self.target.edge_ids, self.fibers))
        return f"BypassMap({body})"

    def fiber_dict(self) -> dict[str, tuple[str, ...]]:
        return dict(zip(self.target.edge_ids, self.fibers))

    def fiber(self, target_edge: str) -> tuple[str, ...]:
        return self.fibers[self.target.position(target_edge)]

    @property
    def edge_fn(self) -> dict[str, str]:
        return {e: t for t, fib in zip(self.target.edge_ids, self.fibers) for e in fib}

    def key(self) -> tuple:
        """Sort key: image positions per source edge, then fibers by position."""
        fn = self.edge_fn
        image = tuple(self.target.position(fn[e]) for e in self.source.edge_ids)
        orders = tuple(tuple(self.source.position(e) for e in fib) for fib in self.fibers)
        return image, orders


@dataclass
class BypassReport:
    structural: list[str] = field(default_factory=list)
    semantic: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.structural and not self.semantic

    def __bool__(self) -> bool:
        return self.ok


def validate_bypass(f: BypassMap) -> BypassReport:
    """Check the structural shape of ``f`` and then the loop and path conditions."""
    rep = BypassReport()
    if f.source.vertices != f.target.vertices:
        rep.structural.append("source and target have different vertex sets")
        return rep
    if len(f.fibers) != len(f.target.edges):
        rep.structural.append("need exactly one fiber per target edge")
        return rep
    seen = Counter(e for fib in f.fibers for e in fib)
    for e, k in seen.items():
        if not f.source.has_edge(e):
            rep.structural.append(f"fiber mentions unknown source edge {e!r}")
        elif k > 1:
            rep.structural.append(f"source edge {e!r} appears {k} times")
    for e in f.source.edge_ids:
        if e not in seen:
            rep.structural.append(f"source edge {e!r} lies in no fiber")
    if rep.structural:
        return rep

    g = f.source
    for t, fib in zip(f.target.edges, f.fibers):
        if not fib:
            if not t.is_loop:
                rep.semantic.append(f"empty fiber over non-loop {t.id!r}")
            continue
        if g.src(fib[0]) != t.src:
            rep.semantic.append(f"fiber over {t.id!r} starts at {g.src(fib[0])}, not {t.src}")
        if g.tgt(fib[-1]) != t.tgt:
            rep.semantic.append(f"fiber over {t.id!r} ends at {g.tgt(fib[-1])}, not {t.tgt}")
        for a, b in zip(fib, fib[1:]):
            if g.tgt(a) != g.src(b):
                rep.semantic.append(f"fiber over {t.id!r} breaks between {a!r} and {b!r}")
    return rep


def identity(g: Graph) -> BypassMap:
    return BypassMap(g, g, tuple((e,) for e in g.edge_ids))


def compose(g: BypassMap, f: BypassMap) -> BypassMap:
    """``g . f``: each fiber concatenates ``f``'s fibers along ``g``'s fiber order."""
    if f.target != g.source:
        raise GraphError("compose: target of f is not the source of g")
    ff = f.fiber_dict()
    fibers = tuple(tuple(e for mid in fib for e in ff[mid]) for fib in g.fibers)
    return BypassMap(f.source, g.target, fibers)


# Tensor products renumber edges e0, e1, ... left block first, so the
# monoidal structure is strictly associative and unital on renumbered graphs.

def _renumber(edges: Sequence[Edge]) -> tuple[Edge, ...]:
    return tuple(Edge(f"e{i}", e.src, e.tgt) for i, e in enumerate(edges))


def tensor(*graphs: Graph) -> Graph:
    """Disjoint union of edge sets, edges renumbered in order."""
    if not graphs:
        raise GraphError("tensor needs at least one graph")
    verts = graphs[0].vertices
    for h in graphs[1:]:
        if h.vertices != verts:
            raise GraphError("tensor of graphs on different vertex sets")
    return Graph(verts, _renumber([e for h in graphs for e in h.edges]))


def _tensor_ids(graphs: Sequence[Graph]) -> list[dict[str, str]]:
    out, k = [], 0
    for h in graphs:
        out.append({e: f"e{k + i}" for i, e in enumerate(h.edge_ids)})
        k += len(h.edges)
    return out


def tensor_maps(*maps: BypassMap) -> BypassMap:
    """Componentwise tensor of bypass maps."""
    src = tensor(*(m.source for m in maps))
    tgt = tensor(*(m.target for m in maps))
    rename = _tensor_ids([m.source for m in maps])
    fibers = tuple(tuple(r[e] for e in fib) for m, r in zip(maps, rename) for fib in m.fibers)
    return BypassMap(src, tgt, fibers)


def symmetry(g: Graph, h: Graph) -> BypassMap:
    """The swap ``g (x) h -> h (x) g``."""
    a, b = len(g.edges), len(h.edges)
    fibers = tuple((f"e{a + i}",) for i in range(b)) + tuple((f"e{i}",) for i in range(a))
    return BypassMap(tensor(g, h), tensor(h, g), fibers)


def decompose(g: Graph) -> list[tuple[str, str]]:
    """Elementary factors ``(src, tgt)`` whose tensor product is ``g`` up to renumbering."""
    return [(e.src, e.tgt) for e in g.edges]


def generator_compose(vertices: Sequence[str], x: str, y: str, z: str) -> BypassMap:
    """The generating bypass ``(x, y) (x) (y, z) -> (x, z)``."""
    return BypassMap(path_graph(vertices, x, y, z), pair_graph(vertices, x, z), (("e0", "e1"),))


def generator_unit(vertices: Sequence[str], x: str) -> BypassMap:
    """The generating bypass ``empty -> (x, x)``."""
    _check_label(vertices, [x])
    return BypassMap(empty_graph(vertices), pair_graph(vertices, x, x), ((),))


def _paths(g: Graph, start: str, end: str, unused: frozenset[int],
           out_edges: Mapping[str, list[int]], is_loop: bool,
           must_use_all: bool) -> Iterator[tuple[int, ...]]:
    """Ordered sequences of distinct unused edges forming a path start -> end."""
    if is_loop and (not must_use_all or not unused):
        yield ()

    def walk(v, used, seq):
        for i in out_edges[v]:
            if i in used:
                continue
            e = g.edges[i]
            seq.append(i)
            used.add(i)
            if e.tgt == end and (not must_use_all or len(seq) == len(unused)):
                yield tuple(seq)
            yield from walk(e.tgt, used, seq)
            used.discard(i)
            seq.pop()

    if not unused:
        return
    yield from walk(start, set(range(len(g.edges))) - unused, [])


def hom_enumerate(source: Graph, target: Graph) -> list[BypassMap]:
    """All bypass maps ``source -> target``, sorted by :meth:`BypassMap.key`.

    A map can only exist when both graphs have the same out-minus-in degree at
    every vertex (each fiber is a path between the endpoints of its image, and
    inserted loops are balanced), so that is checked first.
    """
    if source.vertices != target.vertices:
        raise GraphError("hom_enumerate: different vertex sets")
    if source.imbalance() != target.imbalance():
        return []
    out_edges: dict[str, list[int]] = {v: [] for v in source.vertices}
    for i, e in enumerate(source.edges):
        out_edges[e.src].append(i)
    n_t = len(target.edges)
    results: list[tuple[tuple[int, ...], ...]] = []

    def assign(k: int, unused: frozenset[int], acc: list[tuple[int, ...]]):
        if k == n_t:
            if not unused:
                results.append(tuple(acc))
            return
        t = target.edges[k]
        last = k == n_t - 1
        for p in _paths(source, t.src, t.tgt, unused, out_edges, t.is_loop, last):
            acc.append(p)
            assign(k + 1, unused - set(p), acc)
            acc.pop()

    assign(0, frozenset(range(len(source.edges))), [])
    ids = source.edge_ids
    maps = [BypassMap(source, target, tuple(tuple(ids[i] for i in fib) for fib in r))
            for r in results]
    maps.sort(key=BypassMap.key)
    return maps


# -- JSON -------------------------------------------------------------------

_GRAPH_KEYS = {"vertices", "edges"}
_EDGE_KEYS = {"id", "src", "tgt"}
_MAP_KEYS = {"edge_fn", "fiber_orders"}


def _reject_unknown(obj: Mapping, allowed: set[str], where: str) -> None:
    extra = set(obj) - allowed
    if extra:
        raise GraphError(f"{where}: unknown field(s) {sorted(extra)}")
    missing = allowed - set(obj)
    if missing:
        raise GraphError(f"{where}: missing field(s) {sorted(missing)}")


def graph_from_json(data: Mapping | str) -> Graph:
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, Mapping):
        raise GraphError("graph: expected an object")
    _reject_unknown(data, _GRAPH_KEYS, "graph")
    verts = data["vertices"]
    if not isinstance(verts, list) or not all(isinstance(v, str) for v in verts):
        raise GraphError("graph.vertices: expected a list of strings")
    edges = []
    for k, e in enumerate(data["edges"]):
        if not isinstance(e, Mapping):
            raise GraphError(f"graph.edges[{k}]: expected an object")
        _reject_unknown(e, _EDGE_KEYS, f"graph.edges[{k}]")
        edges.append(Edge(str(e["id"]), e["src"], e["tgt"]))
    return Graph(tuple(verts), tuple(edges))


def graph_to_json(g: Graph) -> dict:
    return {"vertices": list(g.vertices),
            "edges": [{"id": e.id, "src": e.src, "tgt": e.tgt} for e in g.edges]}


def map_from_json(data: Mapping | str, source: Graph, target: Graph) -> BypassMap:
    if isinstance(data, str):
        data = json.loads(data)
    _reject_unknown(data, _MAP_KEYS, "bypass map")
    return BypassMap.from_dicts(source, target, data["fiber_orders"], data["edge_fn"])


def map_to_json(f: BypassMap) -> dict:
    return {"edge_fn": f.edge_fn,
            "fiber_orders": {t: list(fib) for t, fib in f.fiber_dict().items()}}


def all_graphs(vertices: Sequence[str], max_edges: int) -> Iterator[Graph]:
    """Every graph on ``vertices`` with at most ``max_edges`` edges.

    Edges are unlabeled beyond their endpoints, so graphs are multisets of
    ``(src, tgt)`` pairs; each is presented with ids ``e0, e1, ...``.
    """
    pairs = list(itertools.product(vertices, repeat=2))
    for k in range(max_edges + 1):
        for combo in itertools.combinations_with_replacement(pairs, k):
            yield Graph(tuple(vertices), _renumber([Edge("", a, b) for a, b in combo]))
