"""Categories enriched in finite-dimensional rational vector spaces, their
values on graphs and bypass maps, and Hochschild homology via the cyclic bar
construction.

Composition is written in path order: ``comp[(X, Y, Z)][i][j][k]`` is the
coefficient of basis vector ``k`` of ``hom(X, Z)`` in the composite of basis
vector ``i`` of ``hom(X, Y)`` followed by basis vector ``j`` of ``hom(Y, Z)``.
A graph ``G`` goes to the tensor product over its edges of ``hom(src, tgt)``,
basis indexed by one hom-basis index per edge in edge order.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .cyclic import degeneracy_arrow, face_arrow
from .graphcat import BypassMap, Graph, GraphError, cycle_graph, validate_bypass
from .homology import ExactMatrix, rank

__all__ = [
    "LinearEnrichedCategory",
    "EnrichedError",
    "CyclicBarComplex",
    "bypass_of_arrow",
    "enriched_eval",
    "enriched_eval_map",
    "cyclic_bar",
    "hochschild_homology",
    "hochschild_table",
    "commutator_quotient_dim",
    "dual_numbers_oracle",
    "algebra",
    "chaotic_category",
    "zoo",
]

Vec = dict  # sparse vector: basis index -> Fraction


class EnrichedError(ValueError):
    pass


def _frac(q) -> Fraction:
    if isinstance(q, bool) or isinstance(q, float):
        raise EnrichedError(f"structure constants must be exact, got {q!r}")
    if isinstance(q, (int, Fraction)):
        return Fraction(q)
    if isinstance(q, str):
        try:
            return Fraction(q)
        except ValueError:
            raise EnrichedError(f"cannot read {q!r} as a rational") from None
    raise EnrichedError(f"cannot read {q!r} as a rational")


@dataclass(frozen=True, eq=False)
class LinearEnrichedCategory:
    objects: tuple[str, ...]
    hom_dims: Mapping[tuple[str, str], int]
    composition: Mapping[tuple[str, str, str], Sequence]
    units: Mapping[str, Sequence]
    name: str = ""
    _mult: dict = field(init=False, repr=False)

    def __post_init__(self):
        objs = tuple(self.objects)
        object.__setattr__(self, "objects", objs)
        dims = {(x, y): int(self.hom_dims.get((x, y), 0)) for x in objs for y in objs}
        if any(d < 0 for d in dims.values()):
            raise EnrichedError("negative hom dimension")
        extra = set(self.hom_dims) - set(dims)
        if extra:
            raise EnrichedError(f"hom_dims mentions unknown objects {sorted(extra)}")
        object.__setattr__(self, "hom_dims", dims)
        mult = {}
        for x, y, z in itertools.product(objs, repeat=3):
            a, b, c = dims[(x, y)], dims[(y, z)], dims[(x, z)]
            raw = self.composition.get((x, y, z))
            if raw is None:
                if a * b * c:
                    raise EnrichedError(f"missing composition for {(x, y, z)}")
                raw = [[[0] * c for _ in range(b)] for _ in range(a)]
            if len(raw) != a or any(len(r) != b for r in raw) or any(
                    len(v) != c for r in raw for v in r):
                raise EnrichedError(f"composition {(x, y, z)} should have shape {(a, b, c)}")
            mult[(x, y, z)] = {(i, j): {k: _frac(q) for k, q in enumerate(v) if q}
                               for i, r in enumerate(raw) for j, v in enumerate(r)}
        object.__setattr__(self, "_mult", mult)
        units = {}
        for x in objs:
            u = self.units.get(x)
            if u is None or len(u) != dims[(x, x)]:
                raise EnrichedError(f"unit at {x!r} should have length {dims[(x, x)]}")
            units[x] = {k: _frac(q) for k, q in enumerate(u) if q}
        object.__setattr__(self, "units", units)
        problems = self.law_failures()
        if problems:
            raise EnrichedError("; ".join(problems[:3]))

    def dim(self, x: str, y: str) -> int:
        return self.hom_dims[(x, y)]

    def mul(self, x: str, y: str, z: str, a: Vec, b: Vec) -> Vec:
        """Compose ``a in hom(x, y)`` with ``b in hom(y, z)``."""
        table = self._mult[(x, y, z)]
        out: Vec = {}
        for i, p in a.items():
            for j, q in b.items():
                for k, c in table.get((i, j), {}).items():
                    out[k] = out.get(k, 0) + p * q * c
        return {k: v for k, v in out.items() if v}

    def law_failures(self) -> list[str]:
        fails = []
        objs = self.objects

        def basis(x, y):
            return [{i: Fraction(1)} for i in range(self.dim(x, y))]

        for x, y in itertools.product(objs, repeat=2):
            for a in basis(x, y):
                if self.mul(x, x, y, self.units[x], a) != a:
                    fails.append(f"left unit fails at {(x, y)}")
                if self.mul(x, y, y, a, self.units[y]) != a:
                    fails.append(f"right unit fails at {(x, y)}")
        for x, y, z, w in itertools.product(objs, repeat=4):
            for a in basis(x, y):
                for b in basis(y, z):
                    ab = self.mul(x, y, z, a, b)
                    for c in basis(z, w):
                        if self.mul(x, z, w, ab, c) != self.mul(x, y, w, a, self.mul(y, z, w, b, c)):
                            fails.append(f"associativity fails at {(x, y, z, w)}")
        return fails

    # -- JSON ------------------------------------------------------------------

    def to_json(self) -> dict:
        def q(v):
            return int(v) if v.denominator == 1 else str(v)

        comp = {}
        for (x, y, z), table in self._mult.items():
            a, b, c = self.dim(x, y), self.dim(y, z), self.dim(x, z)
            if a * b * c == 0:
                continue
            comp[f"{x},{y},{z}"] = [[[q(table.get((i, j), {}).get(k, Fraction(0)))
                                      for k in range(c)] for j in range(b)] for i in range(a)]
        return {
            "objects": list(self.objects),
            "hom_dims": {f"{x},{y}": d for (x, y), d in self.hom_dims.items()},
            "composition": comp,
            "units": {x: [q(u.get(k, Fraction(0))) for k in range(self.dim(x, x))]
                      for x, u in self.units.items()},
        }

    @classmethod
    def from_json(cls, data: Mapping | str, name: str = "") -> "LinearEnrichedCategory":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, Mapping):
            raise EnrichedError("category: expected an object")
        allowed = {"objects", "hom_dims", "composition", "units"}
        extra = set(data) - allowed
        if extra:
            raise EnrichedError(f"category: unknown field(s) {sorted(extra)}")
        missing = allowed - set(data)
        if missing:
            raise EnrichedError(f"category: missing field(s) {sorted(missing)}")

        def split(key, n):
            parts = tuple(key.split(","))
            if len(parts) != n:
                raise EnrichedError(f"bad key {key!r}: expected {n} comma-separated objects")
            return parts

        return cls(tuple(data["objects"]),
                   {split(k, 2): v for k, v in data["hom_dims"].items()},
                   {split(k, 3): v for k, v in data["composition"].items()},
                   dict(data["units"]), name)


# -- values on graphs -------------------------------------------------------------


def _check_objects(C: LinearEnrichedCategory, g: Graph) -> None:
    if tuple(g.vertices) != C.objects:
        raise GraphError(f"graph vertices {g.vertices} differ from objects {C.objects}")


def enriched_eval(C: LinearEnrichedCategory, g: Graph) -> int:
    """Dimension of ``C(G)``: product of hom dimensions over the edges."""
    _check_objects(C, g)
    d = 1
    for e in g.edges:
        d *= C.dim(e.src, e.tgt)
    return d


def _basis(C: LinearEnrichedCategory, g: Graph):
    return itertools.product(*(range(C.dim(e.src, e.tgt)) for e in g.edges))


def _index(C: LinearEnrichedCategory, g: Graph, idx: Sequence[int]) -> int:
    pos = 0
    for e, i in zip(g.edges, idx):
        pos = pos * C.dim(e.src, e.tgt) + i
    return pos


def enriched_eval_map(C: LinearEnrichedCategory, f: BypassMap) -> ExactMatrix:
    """Matrix of ``C(f): C(source) -> C(target)``.

    Each target edge receives the composite, along its fiber, of the source
    factors; an empty fiber contributes the unit.
    """
    src, tgt = f.source, f.target
    _check_objects(C, src)
    if not validate_bypass(f).ok:
        raise GraphError("not a valid bypass map")
    pos = [[src.position(e) for e in fib] for fib in f.fibers]
    entries: dict[tuple[int, int], Fraction] = {}
    for col, idx in enumerate(_basis(C, src)):
        factors = []
        for t, fib in zip(tgt.edges, pos):
            if not fib:
                v = dict(C.units[t.src])
            else:
                first = src.edges[fib[0]]
                v, here = {idx[fib[0]]: Fraction(1)}, first.tgt
                for p in fib[1:]:
                    e = src.edges[p]
                    v = C.mul(t.src, here, e.tgt, v, {idx[p]: Fraction(1)})
                    here = e.tgt
            factors.append(list(v.items()))
        for combo in itertools.product(*factors):
            coeff = Fraction(1)
            for _, c in combo:
                coeff *= c
            row = _index(C, tgt, [k for k, _ in combo])
            entries[(row, col)] = entries.get((row, col), 0) + coeff
    return ExactMatrix(enriched_eval(C, tgt), enriched_eval(C, src), entries, "QQ")


# -- cyclic bar construction ------------------------------------------------------


def bypass_of_arrow(vertices: Sequence[str], f, labels: Sequence[str]) -> BypassMap:
    """The bypass map ``(X_0..X_k, X_0) -> (Y_0..Y_j, Y_0)`` induced by
    ``f: T_j -> T_k``, where ``Y_i = X_{o(v_i)}``."""
    k = f.n + 1
    if len(labels) != k:
        raise EnrichedError(f"{f} needs {k} labels")
    src = cycle_graph(vertices, *labels)
    new = [labels[f.obj(i)] for i in range(f.m + 1)]
    tgt = cycle_graph(vertices, *new)
    ids = src.edge_ids
    fibers = tuple(tuple(ids[s % k] for s in range(f.lift(i), f.lift(i) + f.legs[i]))
                   for i in range(f.m + 1))
    return BypassMap(src, tgt, fibers)


@dataclass(frozen=True)
class CyclicBarComplex:
    """Cyclic bar complex through level ``N``, with its degenerate subspaces.

    ``raw_dims[n]`` is the dimension of the unnormalized group, ``boundaries[n-1]``
    the unnormalized ``d_n = sum (-1)^i d_i`` and ``degenerate[n]`` a matrix whose
    columns span the degenerate subspace of level ``n``.
    """

    category: LinearEnrichedCategory
    N: int
    tuples: tuple[tuple[tuple[str, ...], ...], ...]
    raw_dims: tuple[int, ...]
    boundaries: tuple[ExactMatrix, ...]
    degenerate: tuple[ExactMatrix, ...]

    def normalized_dims(self) -> tuple[int, ...]:
        return tuple(d - rank(B) for d, B in zip(self.raw_dims, self.degenerate))

    def normalized_rank(self, n: int) -> int:
        """Rank of the boundary ``C_n / D_n -> C_{n-1} / D_{n-1}``."""
        if n < 1 or n > self.N:
            return 0
        d, B = self.boundaries[n - 1], self.degenerate[n - 1]
        stacked = ExactMatrix(d.rows, d.cols + B.cols,
                              {**d.entries, **{(i, j + d.cols): v for (i, j), v in B.entries.items()}},
                              "QQ")
        return rank(stacked) - rank(B)


def _level_offsets(C: LinearEnrichedCategory, n: int):
    tuples, offsets, total = [], {}, 0
    for xs in itertools.product(C.objects, repeat=n + 1):
        d = enriched_eval(C, cycle_graph(C.objects, *xs))
        if d:
            tuples.append(xs)
            offsets[xs] = total
            total += d
    return tuple(tuples), offsets, total


def _assemble(C, arrows_signs, src_tuples, src_off, tgt_off, rows, cols) -> ExactMatrix:
    entries: dict[tuple[int, int], Fraction] = {}
    for xs in src_tuples:
        for f, sign in arrows_signs:
            phi = bypass_of_arrow(C.objects, f, xs)
            ys = tuple(e.src for e in phi.target.edges)
            if ys not in tgt_off:
                continue
            M = enriched_eval_map(C, phi)
            r0, c0 = tgt_off[ys], src_off[xs]
            for (i, j), v in M.entries.items():
                key = (r0 + i, c0 + j)
                entries[key] = entries.get(key, 0) + sign * v
    return ExactMatrix(rows, cols, entries, "QQ")


def cyclic_bar(C: LinearEnrichedCategory, N: int = 4) -> CyclicBarComplex:
    """Hochschild complex of ``C`` through level ``N``.

    Faces and degeneracies are the values of ``C`` on the bypass maps that
    the cyclic structure of the itinerary cyclic set attaches to cofaces and
    codegeneracies; so faces compose neighbouring factors (the last one
    wrapping around) and degeneracies insert units.
    """
    if N < 2:
        raise EnrichedError("need N >= 2")
    levels = [_level_offsets(C, n) for n in range(N + 1)]
    bds, degs = [], []
    for n in range(1, N + 1):
        tup, off, dim = levels[n]
        _, off_lo, dim_lo = levels[n - 1]
        faces = [(face_arrow(n, i), (-1) ** i) for i in range(n + 1)]
        bds.append(_assemble(C, faces, tup, off, off_lo, dim_lo, dim))
    for n in range(N + 1):
        tup, off, dim = levels[n]
        if n == 0:
            degs.append(ExactMatrix(dim, 0, {}, "QQ"))
            continue
        tup_lo, off_lo, dim_lo = levels[n - 1]
        blocks = [_assemble(C, [(degeneracy_arrow(n - 1, i), 1)], tup_lo, off_lo, off, dim, dim_lo)
                  for i in range(n)]
        entries = {(r, c + k * dim_lo): v for k, b in enumerate(blocks) for (r, c), v in b.entries.items()}
        degs.append(ExactMatrix(dim, dim_lo * n, entries, "QQ"))
    for n in range(1, N):
        if not (bds[n - 1] @ bds[n]).is_zero():
            raise EnrichedError(f"d_{n} d_{n + 1} != 0 in the bar complex")
    return CyclicBarComplex(C, N, tuple(l[0] for l in levels), tuple(l[2] for l in levels),
                            tuple(bds), tuple(degs))


def hochschild_homology(C: LinearEnrichedCategory | CyclicBarComplex, n: int, N: int = 4) -> int:
    bar = C if isinstance(C, CyclicBarComplex) else cyclic_bar(C, N)
    if not 0 <= n <= bar.N - 1:
        raise EnrichedError(f"degree {n} outside 0..{bar.N - 1}")
    dims = bar.normalized_dims()
    return dims[n] - bar.normalized_rank(n) - bar.normalized_rank(n + 1)


def hochschild_table(C: LinearEnrichedCategory, top: int = 2, N: int | None = None) -> tuple[int, ...]:
    bar = cyclic_bar(C, top + 1 if N is None else N)
    return tuple(hochschild_homology(bar, n) for n in range(top + 1))


# -- independent oracles ------------------------------------------------------------


def commutator_quotient_dim(C: LinearEnrichedCategory) -> int:
    """``dim`` of ``(sum_X hom(X, X)) / span{fg - gf}``, straight from the
    structure constants."""
    offs, total = {}, 0
    for x in C.objects:
        offs[x] = total
        total += C.dim(x, x)
    cols = []
    for x, y in itertools.product(C.objects, repeat=2):
        for i in range(C.dim(x, y)):
            for j in range(C.dim(y, x)):
                fg = C.mul(x, y, x, {i: Fraction(1)}, {j: Fraction(1)})
                gf = C.mul(y, x, y, {j: Fraction(1)}, {i: Fraction(1)})
                col = {}
                for k, v in fg.items():
                    col[offs[x] + k] = col.get(offs[x] + k, 0) + v
                for k, v in gf.items():
                    col[offs[y] + k] = col.get(offs[y] + k, 0) - v
                cols.append(col)
    M = ExactMatrix(total, len(cols), {(r, c): v for c, col in enumerate(cols)
                                       for r, v in col.items()}, "QQ")
    return total - rank(M)


def dual_numbers_oracle() -> tuple[int, int, int]:
    """Hochschild dimensions of ``Q[x]/(x^2)`` in degrees 0..2 from the
    periodic complex ``A <-0- A <-2x- A <-0- A`` (basis ``1, x``)."""
    zero = ExactMatrix(2, 2, {}, "QQ")
    two_x = ExactMatrix.from_dense([[0, 0], [2, 0]], "QQ")
    d = [zero, two_x, zero]
    r = [rank(m) for m in d]
    return (2 - r[0], 2 - r[0] - r[1], 2 - r[1] - r[2])


# -- the zoo ----------------------------------------------------------------------


def algebra(table: Sequence[Sequence[Sequence]], unit: Sequence, name: str = "") -> LinearEnrichedCategory:
    """One-object category from ``table[i][j]`` = coordinates of ``b_i b_j``."""
    d = len(unit)
    return LinearEnrichedCategory(("*",), {("*", "*"): d}, {("*", "*", "*"): table},
                                  {"*": unit}, name)


def _from_basis_products(d: int, prod) -> list:
    table = [[[0] * d for _ in range(d)] for _ in range(d)]
    for i in range(d):
        for j in range(d):
            for k, c in prod(i, j).items():
                table[i][j][k] = c
    return table


def _group_algebra(n: int):
    return algebra(_from_basis_products(n, lambda i, j: {(i + j) % n: 1}),
                   [1] + [0] * (n - 1), f"Q[C{n}]")


def _truncated_poly(n: int):
    return algebra(_from_basis_products(n, lambda i, j: {i + j: 1} if i + j < n else {}),
                   [1] + [0] * (n - 1), f"Q[x]/(x^{n})")


def _matrix_units(n: int):
    def prod(a, b):
        i, j = divmod(a, n)
        k, l = divmod(b, n)
        return {i * n + l: 1} if j == k else {}

    unit = [1 if i == j else 0 for i in range(n) for j in range(n)]
    return algebra(_from_basis_products(n * n, prod), unit, f"M{n}(Q)")


def _upper_triangular():
    # basis e11, e12, e22
    pairs = [(0, 0), (0, 1), (1, 1)]
    idx = {p: k for k, p in enumerate(pairs)}

    def prod(a, b):
        i, j = pairs[a]
        k, l = pairs[b]
        return {idx[(i, l)]: 1} if j == k else {}

    return algebra(_from_basis_products(3, prod), [1, 0, 1], "T2(Q)")


def _quaternions():
    # basis 1, i, j, k
    sign_table = {
        (1, 1): (0, -1), (2, 2): (0, -1), (3, 3): (0, -1),
        (1, 2): (3, 1), (2, 3): (1, 1), (3, 1): (2, 1),
        (2, 1): (3, -1), (3, 2): (1, -1), (1, 3): (2, -1),
    }

    def prod(a, b):
        if a == 0:
            return {b: 1}
        if b == 0:
            return {a: 1}
        k, s = sign_table[(a, b)]
        return {k: s}

    return algebra(_from_basis_products(4, prod), [1, 0, 0, 0], "H(Q)")


def _product_qq():
    return algebra(_from_basis_products(2, lambda i, j: {i: 1} if i == j else {}), [1, 1], "QxQ")


def chaotic_category(k: int) -> LinearEnrichedCategory:
    """``k`` objects with every hom one-dimensional and all composites the basis vector."""
    objs = tuple("ABCDEFGH"[:k])
    return LinearEnrichedCategory(
        objs,
        {(x, y): 1 for x in objs for y in objs},
        {(x, y, z): [[[1]]] for x in objs for y in objs for z in objs},
        {x: [1] for x in objs},
        f"S_triv({k})")


def _two_object_triangle():
    objs = ("A", "B")
    dims = {("A", "A"): 1, ("B", "B"): 1, ("A", "B"): 1, ("B", "A"): 0}
    comp = {}
    for x, y, z in itertools.product(objs, repeat=3):
        if dims[(x, y)] and dims[(y, z)] and dims[(x, z)]:
            comp[(x, y, z)] = [[[1]]]
    return LinearEnrichedCategory(objs, dims, comp, {"A": [1], "B": [1]}, "A->B")


def zoo() -> dict[str, LinearEnrichedCategory]:
    """Built-in test categories, keyed by name."""
    items = [
        algebra([[[1]]], [1], "Q"),
        _truncated_poly(2),
        _truncated_poly(3),
        _group_algebra(2),
        _group_algebra(3),
        _product_qq(),
        _upper_triangular(),
        _matrix_units(2),
        _quaternions(),
        chaotic_category(1),
        chaotic_category(2),
        chaotic_category(3),
        _two_object_triangle(),
    ]
    return {c.name: c for c in items}
