import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from bypass.cyclic import constant_cyclic_set, cyclic_nerve_triv
from bypass.homology import (ChainComplex, ExactMatrix, HomologyEntry, HomologyError,
                             determinant, homology, homology_all, invariant_factors,
                             normalized_chains, rank, smith_normal_form, verify_snf)


def test_snf_examples():
    D, U, V = smith_normal_form([[0, 0], [0, 0]])
    assert D == [[0, 0], [0, 0]]
    D, U, V = smith_normal_form([[2, 0], [0, 3]])
    assert [D[0][0], D[1][1]] == [1, 6]
    verify_snf([[2, 0], [0, 3]], D, U, V)
    assert invariant_factors(ExactMatrix.from_dense([[2, 0], [0, 3]])) == [1, 6]


matrices = st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)))


@given(matrices)
def test_snf_postconditions(M):
    D, U, V = smith_normal_form(M)
    verify_snf(M, D, U, V)
    diag = [D[i][i] for i in range(min(len(M), len(M[0]))) if D[i][i]]
    assert invariant_factors(ExactMatrix.from_dense(M)) == diag


@given(matrices)
def test_invariant_factors_against_sympy(M):
    from sympy.matrices.normalforms import invariant_factors as sym_if
    want = [abs(int(d)) for d in sym_if(sympy.Matrix(M), domain=sympy.ZZ) if d != 0]
    assert invariant_factors(ExactMatrix.from_dense(M)) == want


@given(matrices)
def test_rank_and_determinant_against_sympy(M):
    assert rank(ExactMatrix.from_dense(M)) == sympy.Matrix(M).rank()
    k = min(len(M), len(M[0]))
    sq = [row[:k] for row in M[:k]]
    assert determinant(sq) == sympy.Matrix(sq).det()


def test_verify_snf_rejects_wrong_answers():
    M = [[2, 4], [6, 8]]
    D, U, V = smith_normal_form(M)
    with pytest.raises(HomologyError):
        verify_snf(M, [[1, 0], [0, 1]], U, V)
    with pytest.raises(HomologyError):
        verify_snf([[2, 0], [0, 3]], [[2, 0], [0, 3]], [[1, 0], [0, 1]], [[1, 0], [0, 1]])


def test_exactness_is_enforced():
    with pytest.raises(HomologyError):
        ExactMatrix(1, 1, {(0, 0): 0.5})
    with pytest.raises(HomologyError):
        ExactMatrix(1, 1, {(0, 0): Fraction(1, 2)}, "ZZ")
    assert ExactMatrix(1, 1, {(0, 0): Fraction(4, 2)}).entries == {(0, 0): 2}


def test_point_circle_and_two_circles():
    point = ChainComplex((1,), ())
    assert homology(point, 0) == HomologyEntry(0, 1)
    circle = ChainComplex((1, 1), (ExactMatrix.zeros(1, 1),))
    assert [h.betti for h in homology_all(circle)] == [1, 1]
    two = ChainComplex((2, 2), (ExactMatrix.zeros(2, 2),))
    assert [h.betti for h in homology_all(two)] == [2, 2]


def test_torsion_and_degree_checks():
    rp2ish = ChainComplex((1, 1, 1), (ExactMatrix.zeros(1, 1), ExactMatrix.from_dense([[2]])))
    assert homology(rp2ish, 1) == HomologyEntry(1, 0, (2,))
    assert homology(rp2ish.over_rationals(), 1) == HomologyEntry(1, 0)
    with pytest.raises(HomologyError):
        ChainComplex((1, 1, 1), (ExactMatrix.from_dense([[1]]), ExactMatrix.from_dense([[1]])))
    trunc = ChainComplex((1, 1), (ExactMatrix.zeros(1, 1),), truncated=True)
    with pytest.raises(HomologyError):
        homology(trunc, 1)


def test_json_shape():
    h = HomologyEntry(1, 2, (2, 4))
    assert h.to_json() == {"degree": 1, "betti": 2, "torsion": [2, 4]}
    assert HomologyEntry.from_json(h.to_json()) == h


def test_constant_point_normalized_chains():
    cx, basis = normalized_chains(constant_cyclic_set(("*",), 3))
    assert cx.ranks == (1, 0, 0, 0)
    assert [h.betti for h in homology_all(cx)] == [1, 0, 0]


class Polygon:
    """Simplicial circle with ``k`` vertices and ``k`` nondegenerate edges,
    stored through level ``dim`` as monotone maps into the polygon."""

    def __init__(self, k, dim):
        self.k, self.dim = k, dim
        verts = [(v,) for v in range(k)]
        self.levels = [[(v,) * (n + 1) for v in range(k)] for n in range(dim + 1)]
        for n in range(1, dim + 1):
            for e in range(k):
                a, b = e, (e + 1) % k
                for split in range(n):
                    self.levels[n].append((a,) * (split + 1) + (b,) * (n - split))

    def level(self, n):
        return self.levels[n]

    def face(self, n, i, x):
        return x[:i] + x[i + 1:]

    def degeneracy(self, n, i, x):
        return x[:i + 1] + x[i:]


def test_polygon_circle():
    for k in (2, 3, 4):
        cx, basis = normalized_chains(Polygon(k, 3))
        assert [len(b) for b in basis] == [k, k, 0, 0]
        assert [h.betti for h in homology_all(cx)] == [1, 1, 0]
        for n in range(4):
            assert len(basis[n]) <= len(Polygon(k, 3).level(n))


def test_truncation_soundness():
    for S in (("A",), ("A", "B")):
        lo = homology_all(normalized_chains(cyclic_nerve_triv(S, 3))[0])
        hi = homology_all(normalized_chains(cyclic_nerve_triv(S, 4))[0])
        assert lo == hi[:len(lo)]


def test_broken_operators_are_diagnosed():
    class Bad(Polygon):
        def face(self, n, i, x):
            return x[:i] + x[i + 1:] if i else x[1:][::-1]

    with pytest.raises(HomologyError, match="identities"):
        normalized_chains(Bad(3, 2))
