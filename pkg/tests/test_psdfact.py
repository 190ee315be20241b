import random
from fractions import Fraction as F

import numpy as np
import pytest

from psdrank.bounds import SignPattern, sqrt_matrix
from psdrank.errors import DimensionMismatch, NotPsd, NotRankOne
from psdrank.exactalg import Matrix, RadScalar, psd_check, rad, rad_is_rational, rad_rank
from psdrank.psdfact import (
    PsdFactorization,
    factor_ranks,
    factorization_from_sqrt,
    inner,
    is_sqrt_candidate,
    phi,
    rational_direction,
    square_entries,
    verify_factorization,
)

R2 = RadScalar.sqrt(2)


def test_phi_examples(mat):
    assert phi([1, 2]) == mat([[1, 2], [2, 4]])
    assert phi([0, 0, 0]) == Matrix.zeros(3, 3)
    assert phi([R2, 0]) == mat([[2, 0], [0, 0]])


def test_rational_direction_examples(mat):
    d = rational_direction(mat([[4, 2], [2, 1]]))
    assert d.scale == 4 and d.direction == (1, F(1, 2))
    assert d.reconstruct() == mat([[4, 2], [2, 1]])
    d = rational_direction(mat([[0, 0], [0, 9]]))
    assert d.scale == 9 and d.direction == (0, 1)
    d = rational_direction(Matrix.zeros(2, 2))
    assert d.scale == 1 and d.direction == (0, 0)


def test_rational_direction_errors(mat):
    with pytest.raises(NotRankOne):
        rational_direction(Matrix.identity(2))
    with pytest.raises(NotPsd):
        rational_direction(mat([[-1, 0], [0, 0]]))
    # rank one but negative definite
    with pytest.raises(NotPsd):
        rational_direction(mat([[-4, -2], [-2, -1]]))


def test_rational_direction_roundtrip():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(1, 5)
        q = [F(rng.randint(-5, 5), rng.randint(1, 5)) for _ in range(n)]
        lam = F(rng.randint(1, 9), rng.randint(1, 9))
        a = phi(q).map(lambda x: lam * x)
        d = rational_direction(a)
        assert d.reconstruct() == a
        assert all(rad_is_rational(x) for x in d.direction)
        nz = [x for x in d.direction if x != 0]
        assert not nz or nz[0] == 1


def test_inner_is_trace_product(mat):
    a, b = mat([[1, 2], [2, 3]]), mat([[5, 7], [7, 11]])
    assert inner(a, b) == 1 * 5 + 2 * 7 * 2 + 3 * 11


def test_verify_examples(mat):
    one = lambda x: mat([[x]])  # noqa: E731
    assert verify_factorization(mat([[2]]), PsdFactorization(1, [one(1)], [one(2)])).valid
    bad = verify_factorization(mat([[1]]), PsdFactorization(1, [one(1)], [one(2)]))
    assert not bad.valid and bad.bad_cells == [(0, 0, 1, 2)]
    neg = verify_factorization(mat([[-1]]), PsdFactorization(1, [one(1)], [one(-1)]))
    assert not neg.valid and neg.non_psd == [("col", 0)] and not neg.bad_cells


def test_verify_float(mat):
    m = mat([[1, 2]])
    good = PsdFactorization(1, [np.array([[1.0]])], [np.array([[1.0 + 1e-12]]), np.array([[2.0]])], "float64")
    assert verify_factorization(m, good).valid
    assert not verify_factorization(m, good, tol=0).valid
    off = PsdFactorization(1, [np.array([[1.0]])], [np.array([[1.1]]), np.array([[2.0]])], "float64")
    assert verify_factorization(m, off).bad_cells[0][:2] == (0, 0)


def test_verify_dimension_mismatch(mat):
    with pytest.raises(DimensionMismatch):
        verify_factorization(mat([[1, 1]]), PsdFactorization(1, [mat([[1]])], [mat([[1]])]))
    with pytest.raises(DimensionMismatch):
        verify_factorization(mat([[1]]), PsdFactorization(1, [Matrix.identity(2)], [mat([[1]])]))


def test_factor_ranks_examples(mat):
    f = PsdFactorization(3, [phi([1, 2, 0]), Matrix.zeros(3, 3)], [Matrix.identity(3)])
    assert factor_ranks(f) == [1, 0, 3]
    with pytest.raises(ValueError):
        factor_ranks(PsdFactorization(1, [], [], "float64"))


def test_factorization_from_sqrt_examples(mat):
    f = factorization_from_sqrt(mat([[1]]))
    assert f.size == 1 and f.row_factors == (mat([[1]]),) and f.col_factors == (mat([[1]]),)
    ones = Matrix.from_rows([[1, 1], [1, 1]])
    f = factorization_from_sqrt(ones)
    assert f.size == 1 and f.arithmetic == "rational"
    assert verify_factorization(ones, f, 0).valid
    f = factorization_from_sqrt(mat([[2]]))
    assert f.row_factors == (mat([[1]]),) and f.col_factors == (mat([[4]]),)


def test_factorization_of_paper_matrix(M):
    s = sqrt_matrix(M, SignPattern(tuple((c, 1) for c in M.support())))
    assert rad_rank(s) == 4
    f = factorization_from_sqrt(s)
    assert f.size == 4 and f.arithmetic == "radical"
    assert factor_ranks(f) == [1] * 14
    assert verify_factorization(M, f, 0).valid
    assert all(psd_check(a.map(rad)).is_psd for a in f.factors)


def _random_candidate(rng):
    p, q = rng.randint(1, 4), rng.randint(1, 4)
    radicands = [1, 2, 3, 5, 6]
    entries = []
    for _ in range(p * q):
        if rng.random() < 0.25:
            entries.append(RadScalar({}))
        else:
            c = F(rng.choice([-1, 1]) * rng.randint(1, 4), rng.randint(1, 3))
            entries.append(RadScalar({rng.choice(radicands): c}))
    return Matrix(p, q, entries)


def test_sqrt_candidate_property():
    rng = random.Random(11)
    for _ in range(150):
        s = _random_candidate(rng)
        m = square_entries(s)
        assert is_sqrt_candidate(s, m)
        f = factorization_from_sqrt(s)
        assert f.size == rad_rank(s)
        assert verify_factorization(m, f, 0).valid
        assert all(r <= 1 for r in factor_ranks(f))


def test_phi_is_psd():
    rng = random.Random(12)
    for _ in range(100):
        v = [RadScalar({rng.choice([1, 2, 3]): F(rng.randint(-3, 3), rng.randint(1, 3))})
             for _ in range(rng.randint(1, 4))]
        assert psd_check(phi(v)).is_psd


def test_is_sqrt_candidate_rejects(mat):
    assert not is_sqrt_candidate(mat([[1 + R2]], rad), mat([[3]]))
    assert not is_sqrt_candidate(mat([[R2]], rad), mat([[3]]))
