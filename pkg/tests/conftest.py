import itertools

import pytest
from hypothesis import settings

from bypass.graphcat import BypassMap, Edge, Graph, validate_bypass

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

AB = ("A", "B")


def loops(k, label="A", vertices=("A",)):
    return Graph(vertices, tuple(Edge(f"e{i}", label, label) for i in range(k)))


def brute_force_hom(src, tgt):
    """Every edge function plus every ordering of every fiber, filtered by validity."""
    out = set()
    s_ids, t_ids = src.edge_ids, tgt.edge_ids
    for image in itertools.product(range(len(t_ids)), repeat=len(s_ids)):
        groups = [[e for e, t in zip(s_ids, image) if t == k] for k in range(len(t_ids))]
        for orders in itertools.product(*(itertools.permutations(g) for g in groups)):
            f = BypassMap(src, tgt, orders)
            if validate_bypass(f).ok:
                out.add(f)
    return out


@pytest.fixture
def ab():
    return AB
