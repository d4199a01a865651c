"""Command-line driver.

Exit codes: 0 when every check passes, 1 on a verification failure, 2 on bad
input.  Output is deterministic for a given input and set of flags.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import cyclic as cy
from . import eulerian as eu
from . import suite
from . import thh
from .enriched import EnrichedError, LinearEnrichedCategory
from .graphcat import GraphError, graph_from_json

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: tuple[str, ...] = ()
    dim: int = 3
    N: int = 4
    max_edges: int = 5
    max_vertices: int = 3
    json: bool = False
    jobs: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.dim < 2 or self.N < 2:
            raise InputError("--dim and --bar-dim must be at least 2")
        if self.max_edges < 0 or self.max_vertices < 1 or self.jobs < 1:
            raise InputError("bounds must be positive")


def _load_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _load_graph(path: str):
    try:
        return graph_from_json(_load_json(path))
    except (GraphError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


def cmd_tours(args) -> int:
    g = _load_graph(args.graph)
    tours = eu.enumerate_tours(g)
    oracle = eu.count_tours_oracle(g)
    agree = len(tours) == oracle
    payload = {"count": len(tours), "oracle": oracle, "agree": agree,
               "tours": [list(t.order) for t in tours]}
    lines = [f"tours: {len(tours)}", *(f"  {t}" for t in tours),
             f"oracle: {oracle}", f"agree: {str(agree).lower()}"]
    _emit(args, payload, lines)
    return EXIT_OK if agree else EXIT_FAIL


def cmd_othh(args) -> int:
    g = _load_graph(args.graph)
    rep = thh.othh_report(g, args.dim)
    payload = rep.to_json()
    lines = [f"graph: {g!r}", f"eul_count: {rep.eul_count}",
             f"betti: {list(rep.betti)}", f"torsion: {list(rep.torsion)}",
             f"pass: {str(rep.passed).lower()}"]
    _emit(args, payload, lines)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_hh(args) -> int:
    if args.builtin:
        cats = thh.zoo()
        if args.builtin not in cats:
            raise InputError(f"unknown built-in {args.builtin!r}; choose from {sorted(cats)}")
        C = cats[args.builtin]
    elif args.category:
        try:
            C = LinearEnrichedCategory.from_json(_load_json(args.category), Path(args.category).stem)
        except (EnrichedError, KeyError, TypeError, AttributeError) as exc:
            raise InputError(f"{args.category}: {exc}") from None
    else:
        raise InputError("give a category file or --builtin NAME")
    if args.degree >= args.bar_dim:
        raise InputError("--degree must be below --bar-dim")
    dims = thh.hochschild_table(C, args.degree, args.bar_dim)
    payload = {"category": C.name, "hh": list(dims)}
    lines = [f"category: {C.name}"] + [f"HH_{n}: {d}" for n, d in enumerate(dims)]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_lambda(args) -> int:
    m, n = args.m, args.n
    if m < 0 or n < 0:
        raise InputError("indices must be nonnegative")
    rows = []
    ok = True
    for f in cy.lambda_hom(m, n):
        d = cy.duality(f)
        back = cy.duality(d)
        ok &= back == f
        rows.append({"arrow": str(f), "duality": str(d), "edge_duality": str(cy.edge_duality(f)),
                     "involutive": back == f})
    comp = []
    if args.compose is not None:
        p = args.compose
        for f in cy.lambda_hom(m, n):
            for g in cy.lambda_hom(n, p):
                comp.append({"g": str(g), "f": str(f), "g.f": str(cy.lambda_compose(g, f))})
    payload = {"m": m, "n": n, "count": len(rows), "closed_form": cy.hom_count(m, n),
               "arrows": rows, "compositions": comp}
    lines = [f"|Lambda(T_{m}, T_{n})| = {len(rows)} (closed form {cy.hom_count(m, n)})"]
    lines += [f"  {r['arrow']}  dual {r['duality']}  edge-dual {r['edge_duality']}" for r in rows]
    lines += [f"  ({c['g']}) . ({c['f']}) = {c['g.f']}" for c in comp]
    _emit(args, payload, lines)
    return EXIT_OK if ok and len(rows) == cy.hom_count(m, n) else EXIT_FAIL


def cmd_verify(args) -> int:
    bounds = suite.Bounds(max_edges=args.max_edges, max_vertices=args.max_vertices,
                          dim=args.dim, N=args.bar_dim, jobs=args.jobs, seed=args.seed,
                          inject_corrupt_fiber=args.inject_corrupt_fiber)
    results = suite.run_all(bounds)
    ok = all(r.passed for r in results)
    payload = {"pass": ok, "checks": [r.to_json() for r in results]}
    lines = [r.line() for r in results]
    lines.append(f"{'PASS' if ok else 'FAIL'}: {sum(r.passed for r in results)}/{len(results)} checks")
    _emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--dim", type=int, default=3, help="truncation for cyclic sets (>= 2)")
    common.add_argument("--bar-dim", type=int, default=4, help="truncation N of the bar complex")
    common.add_argument("--max-edges", type=int, default=5)
    common.add_argument("--max-vertices", type=int, default=3)
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--seed", type=int, default=0, help="seed for the random SNF spot check")

    p = argparse.ArgumentParser(prog="bypass", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    t = sub.add_parser("tours", parents=[common], help="list Eulerian tours of a graph")
    t.add_argument("graph", help="graph JSON file, or - for stdin")
    t.set_defaults(func=cmd_tours)
    o = sub.add_parser("othh", parents=[common], help="homology of the itinerary cyclic set")
    o.add_argument("graph")
    o.set_defaults(func=cmd_othh)
    h = sub.add_parser("hh", parents=[common], help="Hochschild homology dimensions")
    h.add_argument("category", nargs="?", help="category JSON file")
    h.add_argument("--builtin", help="use a built-in category instead")
    h.add_argument("--degree", type=int, default=2, help="highest degree to report")
    h.set_defaults(func=cmd_hh)
    lam = sub.add_parser("lambda", parents=[common], help="hom-set of the cyclic category")
    lam.add_argument("m", type=int)
    lam.add_argument("n", type=int)
    lam.add_argument("--compose", type=int, metavar="P", help="also tabulate composites into T_P")
    lam.set_defaults(func=cmd_lambda)
    v = sub.add_parser("verify", parents=[common], help="run every verification suite")
    v.add_argument("--inject-corrupt-fiber", action="store_true",
                   help="add a map with a broken fiber order (must make the run fail)")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        RunConfig(args.command, dim=args.dim, N=args.bar_dim, max_edges=args.max_edges,
                  max_vertices=args.max_vertices, json=args.json, jobs=args.jobs, seed=args.seed)
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
