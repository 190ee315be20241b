"""Independent certificate checking.

Nothing here calls into the search or producer code: triangularity, square
classes and cycle products are recomputed from the matrix entries with the
standard library only.
"""
from __future__ import annotations

import math
from fractions import Fraction


def _entry(m, i, j) -> Fraction:
    return Fraction(m[i, j])


def check_triangular(m, rows, cols) -> bool:
    """The submatrix in the given orderings is lower triangular, nonzero diagonal."""
    rows, cols = list(rows), list(cols)
    k = len(rows)
    if k != len(cols) or len(set(rows)) != k or len(set(cols)) != k:
        return False
    if any(not 0 <= r < m.rows for r in rows) or any(not 0 <= c < m.cols for c in cols):
        return False
    for a in range(k):
        if _entry(m, rows[a], cols[a]) == 0:
            return False
        for b in range(a + 1, k):
            if _entry(m, rows[a], cols[b]) != 0:
                return False
    return True


def is_rational_square(x: Fraction) -> bool:
    if x < 0:
        return False
    n, d = x.numerator, x.denominator
    return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def cycle_product(m, rows, cols) -> Fraction | None:
    """Alternating product ``prod M[i_t, j_t] / prod M[i_{t+1}, j_t]``.

    None when the cycle is malformed or leaves the support.
    """
    rows, cols = list(rows), list(cols)
    n = len(rows)
    if n < 2 or n != len(cols):
        return None
    num, den = Fraction(1), Fraction(1)
    for t in range(n):
        i, j, i_next = rows[t], cols[t], rows[(t + 1) % n]
        if not (0 <= i < m.rows and 0 <= i_next < m.rows and 0 <= j < m.cols):
            return None
        a, b = _entry(m, i, j), _entry(m, i_next, j)
        if a <= 0 or b <= 0:
            return None
        num *= a
        den *= b
    return num / den


def check_cycle(m, rows, cols, claimed_class: int) -> bool:
    """The cycle's alternating product has square-free part ``claimed_class != 1``."""
    prod = cycle_product(m, rows, cols)
    if prod is None or claimed_class == 1 or not is_squarefree(claimed_class):
        return False
    return is_rational_square(prod / claimed_class)


def check_forced(m, index: int, axis: str, rows, cols, k: int) -> bool:
    """``index`` is a line of the k x k triangular witness with a single nonzero in it."""
    if len(rows) != k or not check_triangular(m, rows, cols):
        return False
    if axis == "row":
        return index in rows and sum(1 for c in cols if _entry(m, index, c) != 0) == 1
    return index in cols and sum(1 for r in rows if _entry(m, r, index) != 0) == 1
