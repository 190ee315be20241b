import random
from itertools import product

import pytest

from psdrank.bounds import (
    SignPattern,
    TriangularCertificate,
    _branch_and_bound,
    _levels,
    enumerate_triangular,
    forced_from_certificates,
    is_triangular,
    max_triangular_submatrix,
    psd_rank_bounds,
    rank_one_forced,
    spanning_forest,
    sqrt_matrix,
    sqrt_rank_min,
)
from psdrank.checker import check_forced, check_triangular
from psdrank.errors import BoundMismatch, NotSquare
from psdrank.exactalg import Matrix, rad_rank
from psdrank.fixtures import PAPER_TRIANGULAR_COLS, PAPER_TRIANGULAR_ROWS

from oracles import brute_triangular, brute_triangular_sets, random01 as _random01


def test_is_triangular_examples(mat, M):
    assert is_triangular(Matrix.identity(3)) == ((0, 1, 2), (0, 1, 2))
    assert is_triangular(mat([[1, 1], [1, 1]])) is None
    sub = M.submatrix(PAPER_TRIANGULAR_ROWS, PAPER_TRIANGULAR_COLS)
    order = is_triangular(sub)
    assert order is not None
    rows = [PAPER_TRIANGULAR_ROWS[i] for i in order[0]]
    cols = [PAPER_TRIANGULAR_COLS[j] for j in order[1]]
    assert check_triangular(M, rows, cols)
    with pytest.raises(NotSquare):
        is_triangular(mat([[1, 0]]))


def test_is_triangular_vs_permutations():
    rng = random.Random(0)
    seen = set()
    for trial in range(200):
        density = [0.25, 0.4, 0.55][trial % 3]
        a = _random01(rng, 5, 5, density)
        want = brute_triangular(a)
        got = is_triangular(Matrix.from_rows(a))
        assert (got is not None) == want
        if got is not None:
            assert check_triangular(Matrix.from_rows(a), *got)
        seen.add(want)
    assert seen == {True, False}


def test_max_triangular_examples(mat, M):
    c = max_triangular_submatrix(M)
    assert c.size == 4 and check_triangular(M, c.rows, c.cols)
    assert max_triangular_submatrix(Matrix.identity(5)).size == 5
    ones = mat([[1] * 4] * 3)
    assert max_triangular_submatrix(ones).size == 1
    assert max_triangular_submatrix(Matrix.zeros(2, 2)).size == 0


def test_max_triangular_lexicographic_tie_break(mat):
    c = max_triangular_submatrix(mat([[1, 1], [1, 1]]))
    assert c.key() == ((0,), (0,))


def test_enumerate_examples(mat, M):
    assert len(list(enumerate_triangular(Matrix.identity(2), 2))) == 1
    assert list(enumerate_triangular(mat([[1, 1], [1, 1]]), 2)) == []
    certs = list(enumerate_triangular(M, 4))
    keys = {c.key() for c in certs}
    assert (PAPER_TRIANGULAR_ROWS, PAPER_TRIANGULAR_COLS) in keys
    assert len(keys) == len(certs)
    assert all(check_triangular(M, c.rows, c.cols) for c in certs)


def test_enumerate_vs_subsets():
    rng = random.Random(1)
    for _ in range(25):
        p, q = rng.randint(2, 4), rng.randint(2, 5)
        a = _random01(rng, p, q, 0.5)
        m = Matrix.from_rows(a)
        best = 0
        for k in range(1, min(p, q) + 1):
            got = {c.key() for c in enumerate_triangular(m, k)}
            want = brute_triangular_sets(a, k)
            assert got == want
            if want:
                best = k
        assert max_triangular_submatrix(m).size == best


def test_paper_matrix_has_no_5x5_triangular(M):
    assert list(enumerate_triangular(M, 5)) == []


def test_branch_and_bound_agrees_with_levels():
    rng = random.Random(2)
    for _ in range(30):
        p, q = rng.randint(2, 6), rng.randint(2, 6)
        m = Matrix.from_rows(_random01(rng, p, q, rng.choice([0.3, 0.5, 0.7])))
        if not m.support():
            continue
        levels = list(_levels(m, min(p, q)))
        best, found = _branch_and_bound(m)
        assert best == len(levels)
        assert set(found) == set(levels[-1])


def test_rank_one_forced_examples(mat, M):
    f = rank_one_forced(M, 4)
    assert f.covers(8, 6)
    for i, w in f.row_witnesses.items():
        assert check_forced(M, i, "row", w.rows, w.cols, 4)
    for j, w in f.col_witnesses.items():
        assert check_forced(M, j, "col", w.rows, w.cols, 4)

    f = rank_one_forced(Matrix.identity(2), 2)
    assert f.rows == {0, 1} and f.cols == {0, 1}

    f = rank_one_forced(mat([[1, 1], [0, 1]]), 2)
    assert f.rows == {1} and f.cols == {0}

    with pytest.raises(BoundMismatch):
        rank_one_forced(mat([[1, 1], [1, 1]]), 2)


def test_forcing_independent_of_order(M):
    certs = list(enumerate_triangular(M, 4))
    base = forced_from_certificates(M, certs)
    rng = random.Random(3)
    for _ in range(5):
        rng.shuffle(certs)
        again = forced_from_certificates(M, certs)
        assert again == base


def test_spanning_forest_counts(M):
    tree, comps = spanning_forest(M.rows, M.cols, M.support())
    assert comps == 1 and len(tree) == M.rows + M.cols - 1
    assert len(M.support()) - len(tree) == 11


def test_sqrt_rank_min_examples(mat):
    r = sqrt_rank_min(mat([[4]]))
    assert r.rank == 1 and r.pattern.signs == (((0, 0), 1),)
    r = sqrt_rank_min(mat([[1, 1], [1, 1]]))
    assert r.rank == 1 and r.pattern.is_all_plus()


def test_sqrt_rank_min_paper(M):
    r = sqrt_rank_min(M)
    assert r.rank == 4 and r.exhaustive and r.free_bits == 11
    assert r.pattern.is_all_plus()
    assert r.examined == 2048 == sum(r.rank_counts.values())
    assert min(r.rank_counts) == 4


def _brute_sqrt_rank(m):
    cells = m.support()
    best = None
    for signs in product((1, -1), repeat=len(cells)):
        s = sqrt_matrix(m, SignPattern(tuple(zip(cells, signs))))
        r = rad_rank(s)
        best = r if best is None else min(best, r)
    return best


def test_sqrt_rank_quotient_vs_all_signs():
    rng = random.Random(4)
    for _ in range(12):
        p, q = rng.randint(1, 3), rng.randint(1, 3)
        m = Matrix.from_rows([[rng.choice([0, 1, 2, 4, 9]) for _ in range(q)] for _ in range(p)])
        if len(m.support()) > 8:
            continue
        assert sqrt_rank_min(m).rank == _brute_sqrt_rank(m)


def test_sqrt_pattern_witness_has_reported_rank():
    rng = random.Random(5)
    for _ in range(10):
        m = Matrix.from_rows([[rng.choice([0, 1, 2, 3]) for _ in range(4)] for _ in range(3)])
        r = sqrt_rank_min(m)
        assert rad_rank(sqrt_matrix(m, r.pattern)) == r.rank


def test_sqrt_rank_invariances(M):
    rng = random.Random(6)
    rp = list(range(M.rows))
    cp = list(range(M.cols))
    rng.shuffle(rp)
    rng.shuffle(cp)
    assert sqrt_rank_min(M.submatrix(rp, cp)).rank == 4
    rows = M.to_rows()
    rows[2] = [4 * x for x in rows[2]]
    assert sqrt_rank_min(Matrix.from_rows(rows)).rank == 4


def test_sqrt_rank_heuristic_path(M):
    a = sqrt_rank_min(M, exhaustive_bits=4, restarts=3, seed=9)
    b = sqrt_rank_min(M, exhaustive_bits=4, restarts=3, seed=9)
    assert not a.exhaustive and a.rank == 4
    assert a == b
    assert min(a.rank_counts) >= 4


def test_sqrt_rank_workers_identical(M):
    assert sqrt_rank_min(M, workers=3) == sqrt_rank_min(M)


def test_psd_rank_bounds_examples(mat, M):
    b = psd_rank_bounds(M)
    assert (b.lower, b.upper, b.tight) == (4, 4, True)
    b = psd_rank_bounds(Matrix.identity(3))
    assert (b.lower, b.upper) == (3, 3)
    b = psd_rank_bounds(mat([[1, 1, 1], [1, 1, 1]]))
    assert (b.lower, b.upper) == (1, 1)
    assert isinstance(b.lower_certificate, TriangularCertificate)


def test_lower_never_exceeds_upper():
    rng = random.Random(7)
    for _ in range(15):
        m = Matrix.from_rows([[rng.choice([0, 1, 2]) for _ in range(4)] for _ in range(4)])
        if not m.support():
            continue
        b = psd_rank_bounds(m)
        assert b.lower <= b.upper
