"""Exhaustive verification suites shared by the command line and the tests.

Every check returns a :class:`CheckResult` with an instance count and a list
of machine-readable failure records; nothing here uses randomness except the
seeded Smith-normal-form spot check.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from math import comb
from typing import Callable, Iterable, Sequence

from . import cyclic as cy
from . import eulerian as eu
from . import graphcat as gc
from . import thh
from .homology import ExactMatrix, HomologyError, invariant_factors, smith_normal_form, verify_snf

LABELS = "ABCDEFGH"


@dataclass
class CheckResult:
    name: str
    instances: int = 0
    failures: list[dict] = field(default_factory=list)
    detail: str = ""

    @property
    def passed(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"{status} {self.name}: {self.instances} instances, {len(self.failures)} failures{extra}"

    def to_json(self) -> dict:
        return {"check": self.name, "instances": self.instances, "pass": self.passed,
                "failures": self.failures[:20], "detail": self.detail}


def vertex_set(k: int) -> tuple[str, ...]:
    if not 1 <= k <= len(LABELS):
        raise ValueError(f"vertex count {k} outside 1..{len(LABELS)}")
    return tuple(LABELS[:k])


def graph_suite(max_vertices: int = 3, max_edges: int = 5) -> list[gc.Graph]:
    """All graphs with at most ``max_edges`` edges on ``max_vertices`` labels."""
    return list(gc.all_graphs(vertex_set(max_vertices), max_edges))


def _pmap(fn: Callable, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (8 * jobs))))


# -- Eulerian tours -----------------------------------------------------------------


def _tour_counts(g: gc.Graph) -> tuple[int, int]:
    return len(eu.enumerate_tours(g)), eu.count_tours_oracle(g)


def check_eulerian(max_vertices: int = 3, max_edges: int = 5, jobs: int = 1) -> CheckResult:
    gs = graph_suite(max_vertices, max_edges)
    res = CheckResult("tours match BEST oracle", len(gs))
    for g, (a, b) in zip(gs, _pmap(_tour_counts, gs, jobs)):
        if a != b:
            res.failures.append({"instance": repr(g), "enumerated": a, "oracle": b})
    return res


# -- the itinerary cyclic set, graph by graph ----------------------------------------


def othh_record(args: tuple[gc.Graph, int]) -> dict:
    """Everything checked on one graph, from a single build of its cyclic set."""
    g, dim = args
    X = thh.build_othh(g, dim)
    rec = {"graph": repr(g)}
    rec["identity_failures"] = cy.check_identities(X)[:3]
    rep = thh.othh_report(g, dim, X)
    rec["betti"] = list(rep.betti)
    rec["expected"] = list(rep.expected_betti)
    rec["torsion"] = list(rep.torsion)
    rec["homology_ok"] = rep.passed
    rec["eul"] = rep.eul_count
    if not g.edges:
        return rec
    pi0 = thh.pi0_orbits(g, X)
    rec["pi0"] = len(pi0)
    rec["pi0_ok"] = pi0.bijective and len(pi0) == rep.eul_count
    blocks_ok = True
    itin = []
    for tour, block in thh.tour_decomposition(g, X).items():
        hs = thh.othh_homology(g, dim, block)
        if [h.betti for h in hs[:2]] != [1, 1] or any(h.betti for h in hs[2:]) or any(h.torsion for h in hs):
            blocks_ok = False
        for n in range(dim + 1):
            itin.append(thh.itinerary_count_invariance(g, tour, n, X))
    rec["blocks_ok"] = blocks_ok
    rec["itineraries"] = itin
    return rec


def othh_records(max_vertices: int = 3, max_edges: int = 5, dim: int = 3,
                 jobs: int = 1) -> list[dict]:
    gs = graph_suite(max_vertices, max_edges)
    return _pmap(othh_record, [(g, dim) for g in gs], jobs)


def check_othh_homology(records: Iterable[dict]) -> CheckResult:
    res = CheckResult("itinerary homology is one circle per tour")
    for r in records:
        res.instances += 1
        if not r["homology_ok"]:
            res.failures.append({k: r[k] for k in ("graph", "betti", "expected", "torsion")})
    return res


def check_othh_empty(max_labels: int = 3, dim: int = 3) -> CheckResult:
    res = CheckResult("empty graph gives one point per label")
    for k in range(1, max_labels + 1):
        g = gc.empty_graph(vertex_set(k))
        rep = thh.othh_report(g, dim)
        res.instances += 1
        if not rep.passed:
            res.failures.append({"labels": k, "betti": list(rep.betti)})
    return res


def check_pi0(records: Iterable[dict]) -> CheckResult:
    res = CheckResult("components biject with tours")
    for r in records:
        if "pi0" not in r:
            continue
        res.instances += 1
        if not r["pi0_ok"]:
            res.failures.append({"graph": r["graph"], "components": r["pi0"], "tours": r["eul"]})
    return res


def check_tour_blocks(records: Iterable[dict]) -> CheckResult:
    res = CheckResult("tour blocks are closed circles")
    for r in records:
        if "blocks_ok" not in r:
            continue
        res.instances += 1
        if not r["blocks_ok"]:
            res.failures.append({"graph": r["graph"]})
    return res


def check_itineraries(records: Iterable[dict]) -> CheckResult:
    res = CheckResult("itinerary counts ignore labels")
    for r in records:
        for a, b in r.get("itineraries", []):
            res.instances += 1
            if a != b:
                res.failures.append({"graph": r["graph"], "labeled": a, "unlabeled": b})
    return res


def check_cyclic_identities(records: Iterable[dict]) -> CheckResult:
    res = CheckResult("simplicial and cyclic identities on itinerary sets")
    for r in records:
        res.instances += 1
        if r["identity_failures"]:
            res.failures.append({"graph": r["graph"], "first": r["identity_failures"]})
    return res


# -- fibrations ---------------------------------------------------------------------


def corrupt_instance() -> tuple[gc.BypassMap, eu.Tour]:
    """A map to a loop whose fiber is not a walk: ``a: A->B, c: A->A, b: B->A``
    in the order ``(a, c, b)``."""
    S = ("A", "B")
    src = gc.Graph(S, (gc.Edge("a", "A", "B"), gc.Edge("b", "B", "A"), gc.Edge("c", "A", "A")))
    tgt = gc.cycle_graph(S, "A")
    f = gc.BypassMap(src, tgt, (("a", "c", "b"),))
    return f, eu.enumerate_tours(tgt)[0]


def _right_instances(g: gc.Graph, gs: Sequence[gc.Graph]) -> list[dict]:
    out = []
    for h in gs:
        if not h.edges:
            continue
        for f in gc.hom_enumerate(g, h):
            for s in eu.enumerate_tours(h):
                r = eu.right_fibration_check(f, s)
                out.append(r.to_json())
    return out


def check_right_fibration(max_vertices: int = 2, max_edges: int = 4,
                          inject_corrupt: bool = False, jobs: int = 1) -> CheckResult:
    gs = [g for g in graph_suite(max_vertices, max_edges) if g.edges]
    res = CheckResult("pullback of tours has unique lifts")
    for batch in _pmap(partial(_right_instances, gs=gs), gs, jobs):
        for rep in batch:
            res.instances += 1
            if not rep["pass"]:
                res.failures.append(rep)
    if inject_corrupt:
        f, s = corrupt_instance()
        rep = eu.right_fibration_check(f, s).to_json()
        res.instances += 1
        if not rep["pass"]:
            res.failures.append(rep)
    return res


def check_left_fibration(max_vertices: int = 2, max_edges: int = 3, max_index: int = 3) -> CheckResult:
    res = CheckResult("cyclic arrows out of a tour lift uniquely")
    for g in graph_suite(max_vertices, max_edges):
        for tour in eu.enumerate_tours(g):
            x = eu.TourGraph.of(tour)
            m = len(g.edges)
            for k in range(max_index + 1):
                for arrow in cy.lambda_hom(k, m - 1):
                    rep = eu.left_fibration_check(x, arrow)
                    res.instances += 1
                    if not rep.passed:
                        res.failures.append(rep.to_json())
    return res


def check_straightening(max_labels: int = 2, max_edges: int = 3) -> CheckResult:
    res = CheckResult("graphs with a tour over T_(m-1) match S^m")
    for k in range(1, max_labels + 1):
        S = vertex_set(k)
        for m in range(1, max_edges + 1):
            fiber = eu.straightening_fiber(S, m)
            words = sorted(x.tour.sources() for x in fiber)
            nerve = sorted(cy.cyclic_nerve_triv(S, m - 1).level(m - 1))
            res.instances += 1
            if len(fiber) != k ** m or words != nerve:
                res.failures.append({"labels": k, "edges": m, "count": len(fiber),
                                     "expected": k ** m})
    return res


def _loops(m: int) -> gc.Graph:
    return thh.one_vertex_loops(m, "A")


def check_lambda_bijection(max_edges: int = 4) -> CheckResult:
    """With one vertex, morphisms between looped graphs with tours are exactly
    the cyclic arrows."""
    res = CheckResult("one-vertex tours give hom bijections onto Lambda")
    for a in range(1, max_edges + 1):
        ga = _loops(a)
        for ta in eu.enumerate_tours(ga):
            x = eu.TourGraph.of(ta)
            for b in range(1, max_edges + 1):
                gb = _loops(b)
                for tb in eu.enumerate_tours(gb):
                    y = eu.TourGraph.of(tb)
                    arrows = [eu.to_lambda_arrow(f, x, y) for f in eu.eul_hom(x, y)]
                    res.instances += 1
                    want = set(cy.lambda_hom(b - 1, a - 1))
                    if len(set(arrows)) != len(arrows) or set(arrows) != want:
                        res.failures.append({"source": str(ta), "target": str(tb),
                                             "hits": len(set(arrows)), "arrows": len(want)})
    return res


def check_eul_functoriality(max_vertices: int = 2, max_edges: int = 3) -> CheckResult:
    """Pullback of tours and the passage to Lambda both respect composition."""
    res = CheckResult("tour pullback and Lambda image are functorial")
    gs = [g for g in graph_suite(max_vertices, max_edges) if g.edges]
    objs = [eu.TourGraph.of(t) for g in gs for t in eu.enumerate_tours(g)]
    homs = {}
    for x in objs:
        for y in objs:
            fs = eu.eul_hom(x, y)
            if fs:
                homs[(x, y)] = fs
    for x in objs:
        ident = gc.identity(x.graph)
        res.instances += 1
        if eu.to_lambda_arrow(ident, x, x) != cy.lambda_id(len(x.graph.edges) - 1):
            res.failures.append({"identity": str(x.tour)})
    for (x, y), fs in homs.items():
        for z in objs:
            for g in homs.get((y, z), []):
                for f in fs:
                    gf = gc.compose(g, f)
                    res.instances += 1
                    if eu.pullback_tour(gf, z.tour) != eu.pullback_tour(f, eu.pullback_tour(g, z.tour)):
                        res.failures.append({"pullback": f"{g!r} . {f!r}"})
                    lhs = eu.to_lambda_arrow(gf, x, z)
                    rhs = cy.lambda_compose(eu.to_lambda_arrow(f, x, y), eu.to_lambda_arrow(g, y, z))
                    if lhs != rhs:
                        res.failures.append({"lambda": f"{g!r} . {f!r}", "got": str(lhs), "want": str(rhs)})
    return res


# -- the cyclic category --------------------------------------------------------------


def check_duality(max_index: int = 3) -> CheckResult:
    res = CheckResult("duality is a strict contravariant involution")
    for m in range(max_index + 1):
        for n in range(max_index + 1):
            for f in cy.lambda_hom(m, n):
                res.instances += 1
                if cy.duality(cy.duality(f)) != f:
                    res.failures.append({"arrow": str(f), "twice": str(cy.duality(cy.duality(f)))})
        if cy.duality(cy.lambda_id(m)) != cy.lambda_id(m):
            res.failures.append({"identity": m})
    for a, b, c in itertools.product(range(max_index + 1), repeat=3):
        for f in cy.lambda_hom(a, b):
            for g in cy.lambda_hom(b, c):
                res.instances += 1
                if cy.duality(cy.lambda_compose(g, f)) != cy.lambda_compose(cy.duality(f), cy.duality(g)):
                    res.failures.append({"pair": f"{g} . {f}"})
    return res


def spec_hom_count(m: int, n: int) -> int:
    """``(n + 1) * C(m + n, m)``, a candidate closed form; it undercounts whenever ``m > 0``."""
    return (n + 1) * comb(m + n, m)


def check_hom_count(max_index: int = 4, formula: Callable[[int, int], int] = cy.hom_count,
                    name: str = "Lambda hom-set sizes match the closed form") -> CheckResult:
    res = CheckResult(name)
    for m in range(max_index + 1):
        for n in range(max_index + 1):
            arrows = cy.lambda_hom(m, n)
            res.instances += 1
            if len(set(arrows)) != len(arrows) or len(arrows) != formula(m, n):
                res.failures.append({"m": m, "n": n, "enumerated": len(arrows),
                                     "formula": formula(m, n)})
    return res


def check_lambda_axioms(max_index: int = 3, assoc_index: int = 2) -> CheckResult:
    res = CheckResult("Lambda is a category and Delta embeds")
    for m in range(max_index + 1):
        for n in range(max_index + 1):
            for f in cy.lambda_hom(m, n):
                res.instances += 1
                if (cy.lambda_compose(cy.lambda_id(n), f) != f
                        or cy.lambda_compose(f, cy.lambda_id(m)) != f):
                    res.failures.append({"unit": str(f)})
    for a, b, c, d in itertools.product(range(assoc_index + 1), repeat=4):
        for f in cy.lambda_hom(a, b):
            for g in cy.lambda_hom(b, c):
                gf = cy.lambda_compose(g, f)
                for h in cy.lambda_hom(c, d):
                    res.instances += 1
                    if cy.lambda_compose(h, gf) != cy.lambda_compose(cy.lambda_compose(h, g), f):
                        res.failures.append({"assoc": f"{h} . {g} . {f}"})
    monos = {}
    for m in range(3):
        for n in range(3):
            monos[(m, n)] = [a for a in itertools.product(range(n + 1), repeat=m + 1)
                             if all(x <= y for x, y in zip(a, a[1:]))]
    for (m, n), alphas in monos.items():
        images = [cy.simplex_to_lambda(a, n) for a in alphas]
        res.instances += 1
        if len(set(images)) != len(images):
            res.failures.append({"injective": (m, n)})
        for p in range(3):
            for beta in monos[(n, p)]:
                for alpha in alphas:
                    res.instances += 1
                    ba = [beta[x] for x in alpha]
                    if cy.simplex_to_lambda(ba, p) != cy.lambda_compose(
                            cy.simplex_to_lambda(beta, p), cy.simplex_to_lambda(alpha, n)):
                        res.failures.append({"functor": (alpha, beta)})
    return res


def check_nerves(max_labels: int = 3, dim: int = 3) -> CheckResult:
    res = CheckResult("cyclic nerves satisfy all identities")
    for k in range(1, max_labels + 1):
        X = cy.cyclic_nerve_triv(vertex_set(k), dim)
        res.instances += 1
        fails = cy.check_identities(X) + cy.check_functoriality(X, 2)
        if fails:
            res.failures.append({"labels": k, "first": fails[:3]})
        if len(cy.set_colimit(X)) != 1:
            res.failures.append({"labels": k, "colimit": len(cy.set_colimit(X))})
    return res


# -- bypass category ------------------------------------------------------------------


def check_bypass_axioms(max_vertices: int = 2, max_edges: int = 3) -> CheckResult:
    res = CheckResult("bypass maps form a category")
    gs = graph_suite(max_vertices, max_edges)
    homs = {}
    for a in gs:
        for b in gs:
            fs = gc.hom_enumerate(a, b)
            if fs:
                homs[(a, b)] = fs
    for (a, b), fs in homs.items():
        for f in fs:
            res.instances += 1
            if not gc.validate_bypass(f).ok:
                res.failures.append({"invalid": repr(f)})
            if gc.compose(gc.identity(b), f) != f or gc.compose(f, gc.identity(a)) != f:
                res.failures.append({"unit": repr(f)})
    for (a, b), fs in homs.items():
        for c in gs:
            for g in homs.get((b, c), []):
                gfs = [gc.compose(g, f) for f in fs]
                for gf in gfs:
                    if not gc.validate_bypass(gf).ok:
                        res.failures.append({"composite": repr(gf)})
                for d in gs:
                    for h in homs.get((c, d), []):
                        hg = gc.compose(h, g)
                        for f, gf in zip(fs, gfs):
                            res.instances += 1
                            if gc.compose(h, gf) != gc.compose(hg, f):
                                res.failures.append({"assoc": f"{h!r} . {g!r} . {f!r}"})
    return res


# -- linear categories ---------------------------------------------------------------


def check_hochschild(N: int = 4) -> CheckResult:
    res = CheckResult("Hochschild engine matches oracles")
    cats = thh.zoo()
    tables = {}
    for name, C in cats.items():
        big = max(C.hom_dims.values()) >= 4
        tables[name] = thh.hochschild_table(C, 2, 3 if big else N)
        res.instances += 1
        if tables[name][0] != thh.commutator_quotient_dim(C):
            res.failures.append({"category": name, "HH0": tables[name][0],
                                 "commutator": thh.commutator_quotient_dim(C)})
    checks = {
        "dual numbers": (tables["Q[x]/(x^2)"], thh.dual_numbers_oracle()),
        "Q[C2]": (tables["Q[C2]"], (2, 0, 0)),
        "Q[C2] vs QxQ": (tables["Q[C2]"], tuple(2 * v for v in tables["Q"])),
        "QxQ": (tables["QxQ"], tuple(2 * v for v in tables["Q"])),
    }
    for k in (1, 2, 3):
        checks[f"Morita S_triv({k})"] = (tables[f"S_triv({k})"], tables["Q"])
    for label, (got, want) in checks.items():
        res.instances += 1
        if tuple(got) != tuple(want):
            res.failures.append({"check": label, "got": list(got), "want": list(want)})
    res.detail = "; ".join(f"{k}={list(v)}" for k, v in tables.items())
    return res


def check_enriched_functor(max_vertices: int = 2, max_edges: int = 3) -> CheckResult:
    res = CheckResult("linear categories are functors on bypass maps")
    cats = [thh.chaotic_category(2), thh.zoo()["A->B"]]
    gs = graph_suite(max_vertices, max_edges)
    for C in cats:
        homs = {}
        for a in gs:
            for b in gs:
                fs = gc.hom_enumerate(a, b)
                if fs:
                    homs[(a, b)] = fs
        mats = {f: thh.enriched_eval_map(C, f) for fs in homs.values() for f in fs}
        for (a, b), fs in homs.items():
            for c in gs:
                for g in homs.get((b, c), []):
                    for f in fs:
                        res.instances += 1
                        if (mats[g] @ mats[f]).entries != mats[gc.compose(g, f)].entries:
                            res.failures.append({"category": C.name, "pair": f"{g!r} . {f!r}"})
    return res


def check_snf(count: int = 200, seed: int = 0) -> CheckResult:
    res = CheckResult("Smith normal form postconditions")
    rng = random.Random(seed)
    for _ in range(count):
        rows, cols = rng.randint(1, 6), rng.randint(1, 6)
        M = [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)]
        res.instances += 1
        try:
            D, U, V = smith_normal_form(M)
            verify_snf(M, D, U, V)
            diag = [D[i][i] for i in range(min(rows, cols)) if D[i][i]]
            if invariant_factors(ExactMatrix.from_dense(M)) != diag:
                raise HomologyError("sparse and dense invariant factors differ")
        except HomologyError as exc:
            res.failures.append({"matrix": M, "error": str(exc)})
    return res


# -- everything --------------------------------------------------------------------------


@dataclass
class Bounds:
    max_edges: int = 5
    max_vertices: int = 3
    dim: int = 3
    N: int = 4
    jobs: int = 1
    seed: int = 0
    inject_corrupt_fiber: bool = False

    def __post_init__(self):
        if self.max_edges < 0 or self.max_vertices < 1:
            raise ValueError("bounds must be positive")
        if self.dim < 2 or self.N < 2:
            raise ValueError("need dim >= 2 and N >= 2")


def run_all(b: Bounds) -> list[CheckResult]:
    small_e, small_v = min(b.max_edges, 3), min(b.max_vertices, 2)
    records = othh_records(b.max_vertices, b.max_edges, b.dim, b.jobs)
    return [
        check_bypass_axioms(small_v, small_e),
        check_lambda_axioms(),
        check_hom_count(),
        check_duality(),
        check_nerves(min(b.max_vertices, 3), b.dim),
        check_eulerian(b.max_vertices, b.max_edges, b.jobs),
        check_eul_functoriality(small_v, small_e),
        check_right_fibration(small_v, min(b.max_edges, 4), b.inject_corrupt_fiber, b.jobs),
        check_left_fibration(small_v, small_e, b.dim),
        check_straightening(small_v, small_e),
        check_lambda_bijection(min(b.max_edges, 4)),
        check_cyclic_identities(records),
        check_othh_homology(records),
        check_othh_empty(min(b.max_vertices, 3), b.dim),
        check_pi0(records),
        check_tour_blocks(records),
        check_itineraries(records),
        check_hochschild(b.N),
        check_enriched_functor(small_v, small_e),
        check_snf(seed=b.seed),
    ]
