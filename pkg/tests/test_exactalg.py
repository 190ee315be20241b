import random
from fractions import Fraction as F

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from psdrank.errors import DivisionByZero, FactorizationLimitExceeded, NotSymmetric
from psdrank.exactalg import (
    ONE,
    ZERO,
    Matrix,
    RadScalar,
    matmul,
    psd_check,
    psd_check_rational,
    quadratic_form,
    rad,
    rad_add,
    rad_inv,
    rad_is_rational,
    rad_mul,
    rad_rank,
    rat_rank,
    rref,
    squarefree_part,
)
from psdrank.psdfact import phi

R2, R3, R6 = RadScalar.sqrt(2), RadScalar.sqrt(3), RadScalar.sqrt(6)
RADICANDS = [1, 2, 3, 5, 6, 10, 15, 30]

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
rad_scalars = st.dictionaries(st.sampled_from(RADICANDS), rationals, max_size=4).map(RadScalar)


@pytest.mark.parametrize("r, cofactor, radicand", [
    (18, F(3), 2),
    (F(1, 2), F(1, 2), 2),
    (F(49, 9), F(7, 3), 1),
    (1, F(1), 1),
    (F(12, 50), F(1, 5), 6),
])
def test_squarefree_part(r, cofactor, radicand):
    assert squarefree_part(r) == (cofactor, radicand)


def test_squarefree_part_rejects_nonpositive():
    with pytest.raises(ValueError):
        squarefree_part(0)
    with pytest.raises(ValueError):
        squarefree_part(F(-2))


def test_squarefree_limit():
    # 1009 * 1013 has no factor up to 100 and is not a square
    with pytest.raises(FactorizationLimitExceeded):
        squarefree_part(1009 * 1013, limit=100)
    # a prime residual below limit**2 is fine, and so is a square residual
    assert squarefree_part(1009 * 4, limit=100) == (F(2), 1009)
    assert squarefree_part(1009 ** 2 * 3, limit=100) == (F(1009), 3)


@settings(max_examples=300, derandomize=True)
@given(st.fractions(min_value=F(1, 10**4), max_value=10**6, max_denominator=10**4))
def test_squarefree_roundtrip(r):
    c, s = squarefree_part(r)
    assert c > 0 and c * c * s == r
    assert sympy.factorint(s) == {p: 1 for p in sympy.factorint(s)}


def test_rad_examples():
    assert rad_mul(R2, R2) == 2
    assert rad_mul(R2, R3) == R6
    inv = rad_inv(1 + R2)
    assert inv == RadScalar({1: -1, 2: 1})
    # (1 + r2)(-1 + r2) = -1 + r2 - r2 + 2
    assert (1 + R2) * (-1 + R2) == 1
    assert rad_add(R2, -R2) == 0 and not rad_add(R2, -R2)


def test_rad_inv_zero():
    with pytest.raises(DivisionByZero):
        rad_inv(ZERO)
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_rad_is_rational():
    assert rad_is_rational(F(3, 2))
    assert not rad_is_rational(R2)
    assert rad_is_rational(ZERO)
    assert RadScalar({8: 1, 2: -2}) == 0


def test_rad_normalizes_radicands():
    assert RadScalar({8: 1}) == 2 * R2
    assert RadScalar({4: F(1, 2)}) == 1


def test_hash_agrees_with_fraction():
    assert hash(RadScalar({1: F(3, 2)})) == hash(F(3, 2))
    assert len({R2 * R3, R6, RadScalar({6: 1})}) == 1


@settings(max_examples=200, derandomize=True)
@given(rad_scalars, rad_scalars, rad_scalars)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if a:
        assert a * rad_inv(a) == 1


@settings(max_examples=200, derandomize=True)
@given(rationals, st.sampled_from(RADICANDS))
def test_pure_radical_squares(c, s):
    x = RadScalar({s: c})
    sq = rad_mul(x, x)
    assert rad_is_rational(sq) and sq == c * c * s


@settings(max_examples=200, derandomize=True)
@given(rad_scalars)
def test_sign_matches_float(a):
    v = float(a)
    if abs(v) > 1e-9:
        assert a.sign() == (1 if v > 0 else -1)
    assert (a - a).sign() == 0


def test_sign_close_values():
    # 140^2 = 19600 < 2 * 99^2 and 99^2 = 9801 > 2 * 70^2
    assert (R2 - F(140, 99)).sign() == 1
    assert (R2 - F(99, 70)).sign() == -1
    # 577^2 = 332929 = 2 * 408^2 + 1
    assert (R2 - F(577, 408)).sign() == -1
    assert R2 + R3 > R6
    assert not (R2 < R2)


def test_rat_rank_examples(mat):
    assert rat_rank(Matrix.identity(5)) == 5
    assert rat_rank(Matrix.zeros(3, 4)) == 0
    assert rat_rank(Matrix(0, 0, [])) == 0
    assert rat_rank(mat([[F(1, 2), F(1, 3)], [3, 2]])) == 1


def test_rank_of_paper_matrix(M):
    assert rat_rank(M) == sympy.Matrix(M.to_rows()).rank() == 4
    assert rad_rank(M) == 4


def test_rad_rank_examples(mat):
    assert rad_rank(mat([[1, R2], [R2, 2]], rad)) == 1
    assert rad_rank(mat([[1, R2], [R2, 1]], rad)) == 2
    assert rad_rank(mat([[1, R2], [R3, R6]], rad)) == 1


def _random_rational(rng, span=6, den=4):
    return F(rng.randint(-span, span), rng.randint(1, den))


def test_rat_rank_low_rank_products():
    rng = random.Random(1)
    for _ in range(60):
        p, q, r = rng.randint(1, 6), rng.randint(1, 6), rng.randint(1, 6)
        u = Matrix(p, r, [_random_rational(rng) for _ in range(p * r)])
        v = Matrix(r, q, [_random_rational(rng) for _ in range(r * q)])
        prod = matmul(u, v)
        want = sympy.Matrix(prod.to_rows()).rank()
        assert rat_rank(prod) == want <= min(p, q, r)


def test_rat_rank_agrees_with_rad_rank():
    rng = random.Random(2)
    for _ in range(60):
        p, q = rng.randint(1, 5), rng.randint(1, 5)
        m = Matrix(p, q, [F(rng.choice([0, 0, 1, -1, 2, 3]), rng.randint(1, 3)) for _ in range(p * q)])
        assert rat_rank(m) == rad_rank(m) == sympy.Matrix(m.to_rows()).rank()


def test_rad_rank_against_numeric_svd():
    rng = random.Random(3)
    pool = [R2, R3, R6, 1 + R2, F(1, 2), RadScalar({5: 1, 10: -1})]
    for _ in range(40):
        p, q, r = rng.randint(1, 4), rng.randint(1, 4), rng.randint(1, 3)
        u = Matrix(p, r, [rng.choice(pool) for _ in range(p * r)])
        v = Matrix(r, q, [rng.choice(pool) for _ in range(r * q)])
        prod = matmul(u, v)
        arr = np.array([[float(x) for x in prod.row(i)] for i in range(p)])
        assert rad_rank(prod) == np.linalg.matrix_rank(arr, tol=1e-9)


def test_rref_pivots_lowest_index(mat):
    red, piv = rref(mat([[1, 2, 3], [2, 4, 7]]))
    assert piv == [0, 2]
    assert red == mat([[1, 2, 0], [0, 0, 1]])


def test_psd_check_examples(mat):
    res = psd_check_rational(mat([[2, 1], [1, 1]]))
    assert res.is_psd and res.pivots == [2, F(1, 2)]
    res = psd_check_rational(mat([[1, 2], [2, 1]]))
    assert not res.is_psd and res.witness == [1, -1]
    assert quadratic_form(mat([[1, 2], [2, 1]]), res.witness) == -2
    res = psd_check_rational(mat([[0, 0], [0, 1]]))
    assert res.is_psd and res.pivots == [0, 1]


def test_psd_check_not_symmetric(mat):
    with pytest.raises(NotSymmetric):
        psd_check_rational(mat([[1, 2], [0, 1]]))


def test_psd_check_against_eigenvalues():
    rng = random.Random(4)
    for _ in range(300):
        n = rng.randint(1, 5)
        k = rng.randint(1, n)
        g = [[rng.randint(-3, 3) for _ in range(k)] for _ in range(n)]
        a = [[sum(g[i][t] * g[j][t] for t in range(k)) for j in range(n)] for i in range(n)]
        if rng.random() < 0.5:
            i = rng.randrange(n)
            a[i][i] -= rng.randint(1, 4)
        m = Matrix.from_rows(a)
        res = psd_check_rational(m)
        eig = np.linalg.eigvalsh(np.array(a, dtype=float)).min()
        if eig > 1e-9:
            assert res.is_psd
        elif eig < -1e-9:
            assert not res.is_psd
        if not res.is_psd:
            assert all(isinstance(x, F) for x in res.witness)
            assert quadratic_form(m, res.witness) < 0
        else:
            assert all(p >= 0 for p in res.pivots)


def test_psd_check_of_phi_is_yes():
    rng = random.Random(5)
    for _ in range(200):
        v = [_random_rational(rng) for _ in range(rng.randint(1, 5))]
        assert psd_check_rational(phi(v)).is_psd


def test_psd_check_radical(mat):
    v = [R2, 1 + R3, F(-1, 2)]
    assert psd_check(phi(v)).is_psd
    bad = mat([[1, R2], [R2, 1]], rad)
    res = psd_check(bad)
    assert not res.is_psd and quadratic_form(bad, res.witness) < 0
    # indefiniteness only visible after elimination
    tricky = mat([[1, 1, 0], [1, 1, 1], [0, 1, 1]])
    res = psd_check_rational(tricky)
    assert not res.is_psd and quadratic_form(tricky, res.witness) < 0


def test_matrix_basics(mat):
    m = mat([[1, 2, 3], [4, 5, 6]])
    assert m.shape == (2, 3) and m[1, 2] == 6
    assert m.transpose().transpose() == m
    assert m.submatrix([1], [0, 2]) == mat([[4, 6]])
    assert m.support() == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]
    with pytest.raises(ValueError):
        Matrix(2, 2, [1, 2, 3])
    with pytest.raises(AttributeError):
        m.rows = 4
