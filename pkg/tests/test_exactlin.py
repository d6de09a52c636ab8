from fractions import Fraction

import pytest
import sympy
from sympy import GF as SGF
from sympy.polys.matrices import DomainMatrix
from hypothesis import given, settings, strategies as st

from superhochschild.exactlin import (
    GF,
    QQ,
    Field,
    ShapeError,
    SparseMatrix,
    compose,
    kernel_basis,
    kernel_dim,
    parse_exact,
    parse_field,
    quotient_basis,
    quotient_dim,
    rank,
    rref,
)

small = st.integers(-3, 3)


@st.composite
def dense(draw, max_rows=6, max_cols=6):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    return r, c, [[draw(small) for _ in range(c)] for _ in range(r)]


def mat(rows, n_cols=None, field=QQ):
    if not rows:
        return SparseMatrix.zero(0, n_cols or 0, field)
    return SparseMatrix.from_dense(rows, field)


# fields -----------------------------------------------------------------

def test_rationals_normalize():
    assert QQ(Fraction(4, 2)) == 2 and type(QQ(Fraction(4, 2))) is int
    assert QQ(Fraction(1, 3)) == Fraction(1, 3)
    with pytest.raises(TypeError):
        QQ(0.5)


def test_prime_field():
    F = GF(7)
    assert F(10) == 3
    assert F(Fraction(1, 2)) == 4
    assert F.inv(3) * 3 % 7 == 1
    assert F.tag == "Fp:7"
    with pytest.raises(ValueError):
        Field(9)
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_parse_helpers():
    assert parse_field("Q") == QQ
    assert parse_field("Fp:5") == GF(5)
    for bad in ("Fp:4", "R", "Fp:x"):
        with pytest.raises(ValueError):
            parse_field(bad)
    assert parse_exact("-1/2") == Fraction(-1, 2)
    assert parse_exact("6/3") == 2
    for bad in ("0.5", "1e3", "", "1/0"):
        with pytest.raises((ValueError, ZeroDivisionError)):
            parse_exact(bad)


def test_format_lowest_terms():
    assert QQ.format(Fraction(2, 4)) == "1/2"
    assert QQ.format(-3) == "-3"


@given(st.fractions(max_denominator=50))
def test_additive_and_multiplicative_inverse(a):
    a = QQ(a)
    assert QQ(a + (-a)) == 0
    if a != 0:
        assert QQ(a * QQ.inv(a)) == 1


@given(st.integers(-100, 100), st.sampled_from([2, 3, 5, 7, 101]))
def test_inverse_mod_p(a, p):
    F = GF(p)
    if F(a) != 0:
        assert F(F(a) * F.inv(a)) == 1


# matrices ----------------------------------------------------------------

def test_no_explicit_zeros_and_bounds():
    m = SparseMatrix.from_entries(2, 2, [(0, 0, 0), (1, 1, 3)])
    assert list(m.entries()) == [(1, 1, 3)]
    with pytest.raises((ShapeError, IndexError, ValueError)):
        SparseMatrix.from_entries(2, 2, [(2, 0, 1)])


@pytest.mark.parametrize("rows,expected", [
    ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3),
    ([[0, 0], [0, 0]], 0),
    ([[1, 2], [2, 4]], 1),
])
def test_rank_examples(rows, expected):
    assert rank(mat(rows)) == expected
    assert kernel_dim(mat(rows)) == len(rows[0]) - expected


def test_compose_examples():
    M = mat([[1, 2], [3, 4]])
    assert compose(SparseMatrix.identity(2), M) == M
    assert compose(M, SparseMatrix.zero(2, 2)).is_zero()
    N = mat([[0, 1], [0, 0]])
    assert compose(N, N).is_zero()
    with pytest.raises(ShapeError):
        compose(M, SparseMatrix.zero(3, 3))


def test_quotient_examples():
    assert quotient_dim(4, []) == 4
    assert quotient_dim(2, [{0: 1}, {1: 1}]) == 0
    assert quotient_dim(3, [{0: 1}, {0: 1, 1: 1}]) == 1
    proj, sec = quotient_basis(2, [{0: 1}])
    assert proj.shape == (1, 2) and proj.apply({0: 1}) == {}
    proj, _ = quotient_basis(3, [])
    assert proj == SparseMatrix.identity(3)
    proj, sec = quotient_basis(2, [{0: 1}, {1: 1}])
    assert proj.shape == (0, 2) and sec.shape == (2, 0)


def test_field_mismatch_rejected():
    with pytest.raises(ValueError):
        SparseMatrix.identity(2, QQ) + SparseMatrix.identity(2, GF(3))


@settings(max_examples=60, deadline=None)
@given(dense())
def test_rank_matches_sympy(data):
    r, c, rows = data
    m = mat(rows, c)
    expected = sympy.Matrix(r, c, [x for row in rows for x in row]).rank() if r and c else 0
    assert rank(m) == expected
    assert rank(m) <= min(r, c)
    assert rank(m.T) == rank(m)


@settings(max_examples=60, deadline=None)
@given(dense())
def test_rank_nullity(data):
    r, c, rows = data
    m = mat(rows, c)
    assert kernel_dim(m) + rank(m) == c
    K = kernel_basis(m)
    assert K.n_cols == kernel_dim(m)
    assert compose(m, K).is_zero()
    assert rank(K) == K.n_cols


@settings(max_examples=40, deadline=None)
@given(dense(5, 5), st.integers(0, 5))
def test_rank_of_product(data, k):
    r, c, rows = data
    A = mat(rows, c)
    B = SparseMatrix.from_entries(c, k, [(i, j, (i + 2 * j) % 3 - 1) for i in range(c) for j in range(k)])
    assert rank(compose(A, B)) <= min(rank(A), rank(B))


@settings(max_examples=60, deadline=None)
@given(dense(6, 5))
def test_quotient_properties(data):
    n_vecs, n, rows = data
    vecs = [{i: x for i, x in enumerate(row) if x} for row in rows]
    S = SparseMatrix(n, len(vecs), vecs) if n else SparseMatrix.zero(0, len(vecs))
    qd = quotient_dim(n, vecs)
    assert qd + rank(S) == n
    proj, sec = quotient_basis(n, vecs)
    assert proj.shape == (qd, n) and sec.shape == (n, qd)
    assert compose(proj, sec) == SparseMatrix.identity(qd)
    assert compose(proj, S).is_zero()


@settings(max_examples=30, deadline=None)
@given(dense(5, 5), st.sampled_from([2, 3, 5]))
def test_rank_mod_p_matches_sympy(data, p):
    r, c, rows = data
    if not (r and c):
        return
    dm = DomainMatrix([[SGF(p)(x) for x in row] for row in rows], (r, c), SGF(p))
    assert rank(mat(rows, c, GF(p))) == dm.rank()


def test_rref_pivots():
    piv = rref([{0: 2, 1: 4}, {0: 1, 1: 2}, {1: 1}])
    assert sorted(piv) == [0, 1]
    assert piv[0][0] == 1 and piv[1][1] == 1


def test_block_and_hstack():
    I = SparseMatrix.identity(2)
    Z = SparseMatrix.zero(2, 1)
    H = SparseMatrix.hstack([I, Z])
    assert H.shape == (2, 3)
    B = SparseMatrix.block({(0, 0): I, (1, 1): I}, [2, 2], [2, 2], QQ)
    assert B == SparseMatrix.identity(4)
