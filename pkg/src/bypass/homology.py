"""Exact chain-complex homology over the integers and the rationals.

Everything is exact: Python ints (unbounded) and :class:`fractions.Fraction`.
Boundary matrices are stored sparsely; homology reduces them by sparse
elimination on unit pivots first and hands whatever is left to a dense Smith
normal form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Hashable, Iterable, Mapping, Protocol, Sequence

__all__ = [
    "ExactMatrix",
    "ChainComplex",
    "HomologyEntry",
    "HomologyError",
    "smith_normal_form",
    "verify_snf",
    "determinant",
    "invariant_factors",
    "rank",
    "homology",
    "homology_all",
    "normalized_chains",
    "simplicial_identity_failures",
]

Number = int | Fraction


class HomologyError(ValueError):
    pass


@dataclass(frozen=True)
class ExactMatrix:
    """Sparse exact matrix; ``entries`` maps ``(row, col)`` to a nonzero value."""

    rows: int
    cols: int
    entries: Mapping[tuple[int, int], Number] = field(default_factory=dict)
    ring: str = "ZZ"

    def __post_init__(self):
        if self.ring not in ("ZZ", "QQ"):
            raise HomologyError(f"unknown ring {self.ring!r}")
        clean = {}
        for (i, j), v in dict(self.entries).items():
            if isinstance(v, float):
                raise HomologyError("floating point entries are not allowed")
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise HomologyError(f"entry {(i, j)} outside {self.rows}x{self.cols}")
            if self.ring == "ZZ" and not isinstance(v, int):
                if isinstance(v, Fraction) and v.denominator == 1:
                    v = int(v)
                else:
                    raise HomologyError(f"non-integer entry {v!r} in an integer matrix")
            if v:
                clean[(i, j)] = v
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[Number]], ring: str = "ZZ",
                   ncols: int | None = None) -> "ExactMatrix":
        r = len(rows)
        c = len(rows[0]) if rows else (ncols or 0)
        ents = {(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row) if v}
        return cls(r, c, ents, ring)

    @classmethod
    def zeros(cls, rows: int, cols: int, ring: str = "ZZ") -> "ExactMatrix":
        return cls(rows, cols, {}, ring)

    def to_dense(self) -> list[list[Number]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_zero(self) -> bool:
        return not self.entries

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise HomologyError(f"shape mismatch {self.shape} @ {other.shape}")
        by_row: dict[int, dict[int, Number]] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, {})[j] = v
        out: dict[tuple[int, int], Number] = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, {}).items():
                out[(i, j)] = out.get((i, j), 0) + a * b
        ring = "QQ" if "QQ" in (self.ring, other.ring) else "ZZ"
        return ExactMatrix(self.rows, other.cols, out, ring)

    def over_rationals(self) -> "ExactMatrix":
        return ExactMatrix(self.rows, self.cols,
                           {k: Fraction(v) for k, v in self.entries.items()}, "QQ")


# -- dense integer algorithms -------------------------------------------------


def determinant(M: Sequence[Sequence[Number]]) -> Number:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(M)
    if n == 0:
        return 1
    if any(len(row) != n for row in M):
        raise HomologyError("determinant of a non-square matrix")
    A = [list(row) for row in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = A[i][j] * A[k][k] - A[i][k] * A[k][j]
                A[i][j] = num // prev if isinstance(num, int) and isinstance(prev, int) else num / prev
            A[i][k] = 0
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _dense_mul(A, B):
    if not A or not B:
        return [[0] * (len(B[0]) if B else 0) for _ in A]
    cols = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]


def smith_normal_form(M: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return ``(D, U, V)`` with ``U @ M @ V == D`` and ``U``, ``V`` unimodular.

    ``D`` is diagonal with nonnegative entries ``d1 | d2 | ...`` followed by
    zeros.  The pivot at every stage is an entry of least absolute value.
    """
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U, V = _identity(m), _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row dst += q * row src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, q):  # col dst += q * col src
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    v = A[i][j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
                        if best[0] == 1:
                            break
                if best and best[0] == 1:
                    break
            if best is None:
                return A, U, V
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(t, i, -(A[i][t] // p))
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(t, j, -(A[t][j] // p))
                    dirty = dirty or A[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    return A, U, V


def verify_snf(M: Sequence[Sequence[int]], D, U, V) -> None:
    """Raise unless ``U M V == D``, ``D`` is a divisibility-chain diagonal and
    ``|det U| == |det V| == 1``."""
    if _dense_mul(_dense_mul(U, [list(r) for r in M]), V) != D:
        raise HomologyError("SNF check failed: U M V != D")
    diag = []
    for i, row in enumerate(D):
        for j, v in enumerate(row):
            if i != j and v:
                raise HomologyError("SNF check failed: D is not diagonal")
        if i < len(row):
            diag.append(row[i])
    nz = [d for d in diag if d]
    if any(d < 0 for d in diag) or diag[: len(nz)] != nz:
        raise HomologyError("SNF check failed: diagonal not in normal shape")
    if any(b % a for a, b in zip(nz, nz[1:])):
        raise HomologyError("SNF check failed: no divisibility chain")
    if abs(determinant(U)) != 1 or abs(determinant(V)) != 1:
        raise HomologyError("SNF check failed: transform is not unimodular")


# -- sparse elimination --------------------------------------------------------


def _sparse_rows(M: ExactMatrix, field_: bool) -> dict[int, dict[int, Number]]:
    rows: dict[int, dict[int, Number]] = {}
    for (i, j), v in M.entries.items():
        rows.setdefault(i, {})[j] = Fraction(v) if field_ else v
    return rows


def _eliminate(rows: dict[int, dict[int, Number]], accept) -> int:
    """Pivot on entries passing ``accept`` until none remain; returns the count.

    Pivots are chosen column by column, shortest column first, taking the
    shortest acceptable row in it.  After clearing the pivot column by row
    operations the pivot row and column are dropped, which is exact for both
    rank and invariant factors when the pivot is a unit.
    """
    cols: dict[int, set[int]] = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)
    count = 0
    while True:
        pivot = None
        for j in sorted(cols, key=lambda c: len(cols[c])):
            cand = [i for i in cols[j] if accept(rows[i][j])]
            if cand:
                pivot = (min(cand, key=lambda i: (len(rows[i]), i)), j)
                break
        if pivot is None:
            return count
        pi, pj = pivot
        prow = rows.pop(pi)
        p = prow[pj]
        for j in prow:
            cols[j].discard(pi)
        for i in list(cols[pj]):
            r = rows[i]
            q = r[pj] / p if isinstance(p, Fraction) else r[pj] * p  # p is +-1 here
            for j, v in prow.items():
                nv = r.get(j, 0) - q * v
                if nv:
                    if j not in r:
                        cols[j].add(i)
                    r[j] = nv
                elif j in r:
                    del r[j]
                    cols[j].discard(i)
            if not r:
                del rows[i]
        del cols[pj]
        for j in [j for j, s in cols.items() if not s]:
            del cols[j]
        count += 1


def rank(M: ExactMatrix) -> int:
    """Rank over the rationals."""
    rows = _sparse_rows(M, field_=True)
    return _eliminate(rows, lambda v: v != 0)


def invariant_factors(M: ExactMatrix, check: bool = True) -> list[int]:
    """Nonzero invariant factors of an integer matrix, ascending."""
    if M.ring != "ZZ":
        raise HomologyError("invariant factors need an integer matrix")
    rows = _sparse_rows(M, field_=False)
    units = _eliminate(rows, lambda v: v in (1, -1))
    if not rows:
        return [1] * units
    ri = sorted(rows)
    ci = sorted({j for r in rows.values() for j in r})
    dense = [[rows[i].get(j, 0) for j in ci] for i in ri]
    D, U, V = smith_normal_form(dense)
    if check:
        verify_snf(dense, D, U, V)
    rest = [D[k][k] for k in range(min(len(ri), len(ci))) if D[k][k]]
    return [1] * units + rest


# -- chain complexes ----------------------------------------------------------


@dataclass(frozen=True)
class HomologyEntry:
    degree: int
    betti: int
    torsion: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {"degree": self.degree, "betti": self.betti, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data: Mapping | str) -> "HomologyEntry":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["degree"]), int(data["betti"]), tuple(data["torsion"]))


@dataclass(frozen=True)
class ChainComplex:
    """``boundaries[k - 1]`` is ``d_k: C_k -> C_{k-1}`` for ``1 <= k <= top``.

    When ``truncated`` is set the complex comes from levels ``0..top`` of a
    larger object, so degree ``top`` is not reported.
    """

    ranks: tuple[int, ...]
    boundaries: tuple[ExactMatrix, ...]
    ring: str = "ZZ"
    truncated: bool = False

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(self.ranks))
        object.__setattr__(self, "boundaries", tuple(self.boundaries))
        if len(self.boundaries) != len(self.ranks) - 1:
            raise HomologyError("need one boundary per positive degree")
        for k, d in enumerate(self.boundaries, start=1):
            if d.shape != (self.ranks[k - 1], self.ranks[k]):
                raise HomologyError(f"d_{k} has shape {d.shape}, "
                                    f"expected {(self.ranks[k - 1], self.ranks[k])}")
            if self.ring == "ZZ" and d.ring != "ZZ":
                raise HomologyError("rational boundary in an integer complex")
        for k in range(1, len(self.boundaries)):
            if not (self.boundaries[k - 1] @ self.boundaries[k]).is_zero():
                raise HomologyError(f"d_{k} d_{k + 1} != 0")

    @property
    def top(self) -> int:
        return len(self.ranks) - 1

    def over_rationals(self) -> "ChainComplex":
        return ChainComplex(self.ranks, tuple(d.over_rationals() for d in self.boundaries),
                            "QQ", self.truncated)


def homology(C: ChainComplex, k: int) -> HomologyEntry:
    """``H_k``: Betti number, plus torsion factors over the integers."""
    limit = C.top - 1 if C.truncated else C.top
    if not 0 <= k <= limit:
        raise HomologyError(f"degree {k} outside the reliable range 0..{limit}")
    if C.ring == "QQ":
        rk_out = rank(C.boundaries[k - 1]) if k >= 1 else 0
        rk_in = rank(C.boundaries[k]) if k < C.top else 0
        return HomologyEntry(k, C.ranks[k] - rk_out - rk_in)
    out_f = invariant_factors(C.boundaries[k - 1]) if k >= 1 else []
    in_f = invariant_factors(C.boundaries[k]) if k < C.top else []
    betti = C.ranks[k] - len(out_f) - len(in_f)
    return HomologyEntry(k, betti, tuple(d for d in in_f if d > 1))


def homology_all(C: ChainComplex) -> list[HomologyEntry]:
    limit = C.top - 1 if C.truncated else C.top
    return [homology(C, k) for k in range(limit + 1)]


# -- simplicial sets ------------------------------------------------------------


class SimplicialSet(Protocol):
    dim: int

    def level(self, k: int) -> Sequence[Hashable]: ...

    def face(self, n: int, i: int, x: Any) -> Any: ...

    def degeneracy(self, n: int, i: int, x: Any) -> Any: ...


def simplicial_identity_failures(X: SimplicialSet, limit: int = 20) -> list[str]:
    """Check face/degeneracy identities on every simplex through ``X.dim``."""
    fails: list[str] = []
    D = X.dim
    d, s = X.face, X.degeneracy
    for n in range(D + 1):
        for x in X.level(n):
            if len(fails) >= limit:
                return fails
            if n >= 2:
                for j in range(n + 1):
                    for i in range(j):
                        if d(n - 1, i, d(n, j, x)) != d(n - 1, j - 1, d(n, i, x)):
                            fails.append(f"d_{i} d_{j} != d_{j - 1} d_{i} on {x!r}")
            if n < D:
                for j in range(n + 1):
                    sx = s(n, j, x)
                    if d(n + 1, j, sx) != x or d(n + 1, j + 1, sx) != x:
                        fails.append(f"d_{j} s_{j} or d_{j + 1} s_{j} != id on {x!r}")
                    for i in range(n + 2):
                        if n >= 1 and i < j and d(n + 1, i, sx) != s(n - 1, j - 1, d(n, i, x)):
                            fails.append(f"d_{i} s_{j} != s_{j - 1} d_{i} on {x!r}")
                        if n >= 1 and i > j + 1 and d(n + 1, i, sx) != s(n - 1, j, d(n, i - 1, x)):
                            fails.append(f"d_{i} s_{j} != s_{j} d_{i - 1} on {x!r}")
            if n + 2 <= D:
                for j in range(n + 1):
                    for i in range(j + 1):
                        if s(n + 1, i, s(n, j, x)) != s(n + 1, j + 1, s(n, i, x)):
                            fails.append(f"s_{i} s_{j} != s_{j + 1} s_{i} on {x!r}")
    return fails


def nondegenerate(X: SimplicialSet, k: int) -> list[Hashable]:
    """Simplices of level ``k`` outside the image of every degeneracy."""
    if k == 0:
        return list(X.level(0))
    images = {X.degeneracy(k - 1, i, y) for y in X.level(k - 1) for i in range(k)}
    return [x for x in X.level(k) if x not in images]


def normalized_chains(X: SimplicialSet, dim: int | None = None,
                      check: bool = True) -> tuple[ChainComplex, list[list[Hashable]]]:
    """Normalized integer chains on levels ``0..dim`` and the basis used.

    Degenerate faces are dropped from the boundary.  With ``check`` the
    simplicial identities are verified first and a failure raises.
    """
    D = X.dim if dim is None else dim
    if D > X.dim:
        raise HomologyError(f"dim {D} exceeds the stored levels 0..{X.dim}")
    if check:
        fails = simplicial_identity_failures(X)
        if fails:
            raise HomologyError("simplicial identities fail: " + "; ".join(fails[:5]))
    basis = [nondegenerate(X, k) for k in range(D + 1)]
    index = [{x: i for i, x in enumerate(b)} for b in basis]
    bds = []
    for k in range(1, D + 1):
        ents: dict[tuple[int, int], int] = {}
        for j, x in enumerate(basis[k]):
            for i in range(k + 1):
                r = index[k - 1].get(X.face(k, i, x))
                if r is not None:
                    ents[(r, j)] = ents.get((r, j), 0) + (-1) ** i
        bds.append(ExactMatrix(len(basis[k - 1]), len(basis[k]), ents, "ZZ"))
    cx = ChainComplex(tuple(len(b) for b in basis), tuple(bds), "ZZ", truncated=True)
    return cx, basis
