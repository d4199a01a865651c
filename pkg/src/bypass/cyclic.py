"""Connes' cyclic category and truncated cyclic sets.

An arrow ``T_m -> T_n`` is stored as ``(base, legs)``: ``base`` is the image
of ``v_0`` and ``legs[i]`` is the length of the path in ``T_n`` that the
elementary morphism ``e_i: v_i -> v_{i+1}`` is sent to.  The degree-1
condition is ``sum(legs) == n + 1``.

Equivalently an arrow is a non-decreasing ``F: Z -> Z`` with
``F(x + m + 1) = F(x) + n + 1`` (its lift to the universal covers), taken up
to adding multiples of ``n + 1``.  Composition, the inclusion of the simplex
category and both dualities are computed on lifts.

Cyclic-set conventions: an arrow ``f`` acts contravariantly, ``X_n -> X_m``.
The operator ``t_n`` is the action of the rotation ``v_i -> v_{i-1}``
(base ``n``, all legs 1), so on cyclic nerves it sends ``(x0, ..., xn)`` to
``(xn, x0, ..., x_{n-1})`` and ``d_0 t_n = d_n`` holds.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Any, Callable, Hashable, Iterator, Sequence

from .homology import simplicial_identity_failures

__all__ = [
    "LambdaArrow",
    "LambdaError",
    "lambda_id",
    "lambda_compose",
    "lambda_hom",
    "hom_count",
    "simplex_to_lambda",
    "face_arrow",
    "degeneracy_arrow",
    "rotation_arrow",
    "edge_duality",
    "reflect",
    "duality",
    "TruncatedCyclicSet",
    "cyclic_operators",
    "check_identities",
    "check_functoriality",
    "constant_cyclic_set",
    "cyclic_nerve_triv",
    "set_colimit",
]


class LambdaError(ValueError):
    pass


@dataclass(frozen=True)
class LambdaArrow:
    m: int
    n: int
    base: int
    legs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "legs", tuple(self.legs))
        if self.m < 0 or self.n < 0:
            raise LambdaError("indices must be nonnegative")
        if len(self.legs) != self.m + 1:
            raise LambdaError(f"need {self.m + 1} legs, got {len(self.legs)}")
        if any(x < 0 for x in self.legs):
            raise LambdaError("legs must be nonnegative")
        if sum(self.legs) != self.n + 1:
            raise LambdaError(f"legs sum to {sum(self.legs)}, not {self.n + 1} (degree 1)")
        if not 0 <= self.base <= self.n:
            raise LambdaError(f"base {self.base} outside 0..{self.n}")

    def __str__(self):
        return f"{self.m}->{self.n}: base={self.base}; legs=[{','.join(map(str, self.legs))}]"

    def lift(self, x: int) -> int:
        q, r = divmod(x, self.m + 1)
        return self.base + sum(self.legs[:r]) + q * (self.n + 1)

    def obj(self, i: int) -> int:
        """Index of the image of ``v_i``."""
        return self.lift(i) % (self.n + 1)

    def path(self, i: int) -> tuple[int, ...]:
        """Elementary morphisms of ``T_n`` making up the image of ``e_i``."""
        start = self.lift(i)
        return tuple((start + k) % (self.n + 1) for k in range(self.legs[i % (self.m + 1)]))

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "base": self.base, "legs": list(self.legs)}

    @classmethod
    def from_json(cls, data: dict | str) -> "LambdaArrow":
        if isinstance(data, str):
            data = json.loads(data)
        extra = set(data) - {"m", "n", "base", "legs"}
        if extra:
            raise LambdaError(f"unknown field(s) {sorted(extra)}")
        return cls(int(data["m"]), int(data["n"]), int(data["base"]), tuple(data["legs"]))


def _from_lift(F: Callable[[int], int], m: int, n: int) -> LambdaArrow:
    vals = [F(i) for i in range(m + 2)]
    return LambdaArrow(m, n, vals[0] % (n + 1), tuple(b - a for a, b in zip(vals, vals[1:])))


def lambda_id(n: int) -> LambdaArrow:
    return LambdaArrow(n, n, 0, (1,) * (n + 1))


def lambda_compose(g: LambdaArrow, f: LambdaArrow) -> LambdaArrow:
    """``g . f`` for ``f: T_m -> T_n`` and ``g: T_n -> T_p``."""
    if f.n != g.m:
        raise LambdaError(f"cannot compose {g} after {f}")
    return _from_lift(lambda x: g.lift(f.lift(x)), f.m, g.n)


def _weak_compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    # stars and bars, lexicographic in the part sizes
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        prev, out = -1, []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(total + parts - 2 - prev)
        yield tuple(out)


@lru_cache(maxsize=None)
def lambda_hom(m: int, n: int) -> tuple[LambdaArrow, ...]:
    """Every arrow ``T_m -> T_n``, ordered by base and then legs."""
    if m < 0 or n < 0:
        raise LambdaError("indices must be nonnegative")
    legs = sorted(_weak_compositions(n + 1, m + 1))
    return tuple(LambdaArrow(m, n, b, l) for b in range(n + 1) for l in legs)


def hom_count(m: int, n: int) -> int:
    """Closed form for ``|Lambda(T_m, T_n)|``: base choices times weak compositions."""
    return (n + 1) * comb(m + n + 1, m)


def simplex_to_lambda(alpha: Sequence[int], n: int) -> LambdaArrow:
    """The image of a monotone ``[m] -> [n]`` given by its values."""
    alpha = list(alpha)
    if not alpha:
        raise LambdaError("empty map")
    if any(b < a for a, b in zip(alpha, alpha[1:])):
        raise LambdaError(f"{alpha} is not monotone")
    if alpha[0] < 0 or alpha[-1] > n:
        raise LambdaError(f"{alpha} does not land in [0, {n}]")
    legs = [b - a for a, b in zip(alpha, alpha[1:])]
    legs.append(n + 1 - alpha[-1] + alpha[0])
    return LambdaArrow(len(alpha) - 1, n, alpha[0], tuple(legs))


@lru_cache(maxsize=None)
def face_arrow(n: int, i: int) -> LambdaArrow:
    """Coface ``[n-1] -> [n]`` skipping ``i``; acts as ``d_i: X_n -> X_{n-1}``."""
    if not (n >= 1 and 0 <= i <= n):
        raise LambdaError(f"no face d_{i} on level {n}")
    return simplex_to_lambda([j if j < i else j + 1 for j in range(n)], n)


@lru_cache(maxsize=None)
def degeneracy_arrow(n: int, i: int) -> LambdaArrow:
    """Codegeneracy ``[n+1] -> [n]`` hitting ``i`` twice; acts as ``s_i: X_n -> X_{n+1}``."""
    if not 0 <= i <= n:
        raise LambdaError(f"no degeneracy s_{i} on level {n}")
    return simplex_to_lambda([j if j <= i else j - 1 for j in range(n + 2)], n)


@lru_cache(maxsize=None)
def rotation_arrow(n: int) -> LambdaArrow:
    """``v_i -> v_{i-1}``; its action is ``t_n``."""
    return LambdaArrow(n, n, n, (1,) * (n + 1))


def _least_at_least(f: LambdaArrow, y: int) -> int:
    """``min{x : F(x) >= y}`` for the lift ``F`` of ``f``."""
    k = (y - f.base - 1) // (f.n + 1)
    x = k * (f.m + 1)
    while f.lift(x) < y:
        x += 1
    return x


def edge_duality(f: LambdaArrow) -> LambdaArrow:
    """Dual arrow ``T_n -> T_m`` read off on elementary morphisms.

    The elementary morphism ``e_j`` of ``T_n`` lies on the image path of exactly
    one ``e_i`` of ``T_m``; the dual sends object ``j`` to that ``i``.  This is
    a strict contravariant functor, and applying it twice gives
    ``t_n . f . t_m^{-1}`` (conjugation by the rotations), not ``f``.
    """
    return _from_lift(lambda y: _least_at_least(f, y + 1) - 1, f.n, f.m)


def reflect(f: LambdaArrow) -> LambdaArrow:
    """Orientation reversal ``F(x) -> -F(-x)``, a covariant automorphism."""
    return LambdaArrow(f.m, f.n, (-f.base) % (f.n + 1), tuple(reversed(f.legs)))


def duality(f: LambdaArrow) -> LambdaArrow:
    """A strictly involutive contravariant self-equivalence of Lambda.

    Orientation-preserving dualities square to a rotation conjugation (see
    :func:`edge_duality`); composing with :func:`reflect` cancels that shift
    exactly, giving ``duality(duality(f)) == f``.
    """
    return reflect(edge_duality(f))


# -- truncated cyclic sets -----------------------------------------------------


@dataclass(frozen=True)
class TruncatedCyclicSet:
    """Levels ``X_0 .. X_D`` with the contravariant action of every arrow.

    ``act(f, x)`` for ``f: T_j -> T_k`` and ``x`` in level ``k`` returns an
    element of level ``j``.
    """

    dim: int
    levels: tuple[tuple[Hashable, ...], ...]
    act: Callable[[LambdaArrow, Any], Any]
    name: str = ""

    def level(self, k: int) -> tuple[Hashable, ...]:
        if not 0 <= k <= self.dim:
            raise LambdaError(f"level {k} outside 0..{self.dim}")
        return self.levels[k]

    def face(self, n: int, i: int, x):
        return self.act(face_arrow(n, i), x)

    def degeneracy(self, n: int, i: int, x):
        if n + 1 > self.dim:
            raise LambdaError(f"s_{i} on level {n} leaves the truncation")
        return self.act(degeneracy_arrow(n, i), x)

    def rotation(self, n: int, x):
        return self.act(rotation_arrow(n), x)


def cyclic_operators(X: TruncatedCyclicSet, n: int):
    """``(faces, degeneracies, t)`` on level ``n`` as lists of callables.

    Degeneracies are only present when level ``n + 1`` is stored.
    """
    X.level(n)
    faces = [(lambda x, i=i: X.face(n, i, x)) for i in range(n + 1)] if n >= 1 else []
    degens = [(lambda x, i=i: X.degeneracy(n, i, x)) for i in range(n + 1)] if n < X.dim else []
    return faces, degens, (lambda x: X.rotation(n, x))


def check_identities(X: TruncatedCyclicSet) -> list[str]:
    """Simplicial and cyclic identities on every element of every level.

    Returns human-readable failures; an empty list means everything holds.
    Also checks each operator lands in the expected level.
    """
    fails: list[str] = simplicial_identity_failures(X, limit=10**9)
    members = [set(X.level(k)) for k in range(X.dim + 1)]
    D = X.dim

    def d(n, i, x):
        return X.face(n, i, x)

    def s(n, i, x):
        return X.degeneracy(n, i, x)

    def t(n, x):
        return X.rotation(n, x)

    def expect(cond, msg):
        if not cond:
            fails.append(msg)

    for n in range(D + 1):
        for x in X.level(n):
            if n >= 1:
                for i in range(n + 1):
                    expect(d(n, i, x) in members[n - 1], f"d_{i} leaves level {n - 1} at {x!r}")
            if n < D:
                for i in range(n + 1):
                    expect(s(n, i, x) in members[n + 1], f"s_{i} leaves level {n + 1} at {x!r}")
            tx = t(n, x)
            expect(tx in members[n], f"t_{n} leaves level {n} at {x!r}")
            y = x
            for _ in range(n + 1):
                y = t(n, y)
            expect(y == x, f"t_{n}^{n + 1} != id at {x!r}")
            # cyclic identities
            if n >= 1:
                expect(d(n, 0, tx) == d(n, n, x), f"d_0 t != d_n on {x!r}")
                for i in range(1, n + 1):
                    expect(d(n, i, tx) == t(n - 1, d(n, i - 1, x)),
                           f"d_{i} t != t d_{i - 1} on {x!r}")
            if n < D:
                expect(s(n, 0, tx) == t(n + 1, t(n + 1, s(n, n, x))), f"s_0 t != t^2 s_n on {x!r}")
                for i in range(1, n + 1):
                    expect(s(n, i, tx) == t(n + 1, s(n, i - 1, x)),
                           f"s_{i} t != t s_{i - 1} on {x!r}")
    return fails


def check_functoriality(X: TruncatedCyclicSet, max_level: int | None = None) -> list[str]:
    """``act(g . f) == act(f) . act(g)`` and ``act(id) == id``, exhaustively.

    Runs over every composable pair of arrows between levels ``<= max_level``
    and every element; cost grows fast, so keep levels small.
    """
    top = X.dim if max_level is None else min(max_level, X.dim)
    fails: list[str] = []
    for k in range(top + 1):
        for x in X.level(k):
            if X.act(lambda_id(k), x) != x:
                fails.append(f"id_{k} acts nontrivially on {x!r}")
    for k in range(top + 1):
        for l in range(top + 1):
            for g in lambda_hom(k, l):
                for x in X.level(l):
                    gx = X.act(g, x)
                    for j in range(top + 1):
                        for f in lambda_hom(j, k):
                            if X.act(lambda_compose(g, f), x) != X.act(f, gx):
                                fails.append(f"functoriality fails for {g} . {f} on {x!r}")
    return fails


def constant_cyclic_set(values: Sequence[Hashable], dim: int) -> TruncatedCyclicSet:
    vals = tuple(values)
    return TruncatedCyclicSet(dim, tuple(vals for _ in range(dim + 1)), lambda f, x: x, "constant")


def cyclic_nerve_triv(S: Sequence[Hashable], dim: int) -> TruncatedCyclicSet:
    """Cyclic nerve of the chaotic category on ``S``: level ``n`` is ``S^(n+1)``."""
    labels = tuple(S)
    levels = tuple(tuple(itertools.product(labels, repeat=n + 1)) for n in range(dim + 1))

    def act(f: LambdaArrow, x):
        if len(x) != f.n + 1:
            raise LambdaError(f"{f} cannot act on level {len(x) - 1}")
        return tuple(x[f.obj(i)] for i in range(f.m + 1))

    return TruncatedCyclicSet(dim, levels, act, "cyclic nerve")


def set_colimit(X: TruncatedCyclicSet) -> list[list[Hashable]]:
    """Colimit of ``X`` over ``Lambda^op`` in sets, as classes of 0-simplices.

    Level-0 elements are glued along the images of every arrow ``T_0 -> T_1``
    (these are the two cofaces, so ``d_0 s ~ d_1 s``) and along ``t_0``.  Higher
    levels add no identifications since every vertex of an ``n``-simplex is an
    iterated face of it.  Classes come out in order of first appearance.
    """
    if X.dim < 1:
        raise LambdaError("set_colimit needs levels 0 and 1")
    pts = list(X.level(0))
    index = {p: i for i, p in enumerate(pts)}
    parent = list(range(len(pts)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(a, b):
        ra, rb = find(index[a]), find(index[b])
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for p in pts:
        union(p, X.rotation(0, p))
    cofaces = lambda_hom(0, 1)
    for s in X.level(1):
        first = X.act(cofaces[0], s)
        for f in cofaces[1:]:
            union(first, X.act(f, s))
    classes: dict[int, list] = {}
    for p in pts:
        classes.setdefault(find(index[p]), []).append(p)
    return list(classes.values())
