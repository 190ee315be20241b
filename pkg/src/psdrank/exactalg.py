"""Exact scalar and matrix arithmetic.

Rationals are :class:`fractions.Fraction`.  :class:`RadScalar` is an element of
a multiquadratic extension of the rationals, stored as a finite sum of
``c * sqrt(s)`` with ``s`` square-free.  :class:`Matrix` is a small immutable
dense matrix whose entries are either of those.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

from .errors import DivisionByZero, FactorizationLimitExceeded, NotSymmetric

DEFAULT_FACTOR_LIMIT = 10**6

Rational = Fraction


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, RadScalar):
        return x.rational_value()
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


# ---------------------------------------------------------------------------
# square-free parts


class SquareFreeDecomposition(NamedTuple):
    cofactor: Fraction
    radicand: int


@lru_cache(maxsize=65536)
def _squarefree_int(n: int, limit: int) -> tuple[int, int]:
    """Return ``(root, radicand)`` with ``n == root**2 * radicand``."""
    root, rad, m = 1, 1, n
    p = 2
    while p <= limit and p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            root *= p ** (e // 2)
            if e % 2:
                rad *= p
        p += 1 if p == 2 else 2
    if m > 1:
        if p * p > m:
            # no factor up to sqrt(m): m is prime
            rad *= m
        else:
            t = math.isqrt(m)
            if t * t != m:
                raise FactorizationLimitExceeded(
                    f"residual factor {m} of {n} not split by trial division up to {limit}"
                )
            root *= t
    return root, rad


def squarefree_part(r, limit: int = DEFAULT_FACTOR_LIMIT) -> SquareFreeDecomposition:
    """Write a positive rational ``r`` as ``cofactor**2 * radicand``.

    >>> squarefree_part(18)
    SquareFreeDecomposition(cofactor=Fraction(3, 1), radicand=2)
    """
    r = as_rational(r)
    if r <= 0:
        raise ValueError(f"squarefree_part needs a positive rational, got {r}")
    n, d = r.numerator, r.denominator
    # n/d = n*d / d**2
    root, rad = _squarefree_int(n * d, limit)
    return SquareFreeDecomposition(Fraction(root, d), rad)


def square_class_product(s: int, t: int) -> int:
    """Square-free part of ``s * t`` for square-free ``s`` and ``t``."""
    g = math.gcd(s, t)
    return (s // g) * (t // g)


@lru_cache(maxsize=4096)
def _smallest_prime(n: int) -> int:
    if n % 2 == 0:
        return 2
    p = 3
    while p * p <= n:
        if n % p == 0:
            return p
        p += 2
    return n


# ---------------------------------------------------------------------------
# multiquadratic scalars


class RadScalar:
    """Exact element ``sum(c_s * sqrt(s))`` of a multiquadratic field.

    Keys are square-free positive integers, coefficients nonzero Fractions.
    Instances are immutable and interoperate with ``int`` and ``Fraction``.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        acc: dict[int, Fraction] = {}
        if terms:
            items = terms.items() if hasattr(terms, "items") else terms
            for s, c in items:
                c = as_rational(c)
                if c == 0:
                    continue
                s = int(s)
                if s <= 0:
                    raise ValueError(f"radicand must be positive, got {s}")
                root, rad = _squarefree_int(s, DEFAULT_FACTOR_LIMIT)
                acc[rad] = acc.get(rad, Fraction(0)) + c * root
        self._terms = {s: c for s, c in acc.items() if c != 0}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "RadScalar":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def sqrt(cls, r, limit: int = DEFAULT_FACTOR_LIMIT) -> "RadScalar":
        """The nonnegative square root of a nonnegative rational."""
        r = as_rational(r)
        if r < 0:
            raise ValueError(f"no real square root of {r}")
        if r == 0:
            return ZERO
        c, s = squarefree_part(r, limit)
        return cls._raw({s: c})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def radicands(self) -> list[int]:
        return sorted(self._terms)

    def is_rational(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 1 in self._terms)

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self._terms.get(1, Fraction(0))

    # arithmetic ------------------------------------------------------------

    def __bool__(self):
        return bool(self._terms)

    def __neg__(self):
        return RadScalar._raw({s: -c for s, c in self._terms.items()})

    def __pos__(self):
        return self

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for s, c in other._terms.items():
            v = out.get(s)
            if v is None:
                out[s] = c
            else:
                v += c
                if v:
                    out[s] = v
                else:
                    del out[s]
        return RadScalar._raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        out: dict[int, Fraction] = {}
        for s, c in self._terms.items():
            for t, d in other._terms.items():
                if s == t:
                    key, coef = 1, c * d * s
                elif s == 1:
                    key, coef = t, c * d
                elif t == 1:
                    key, coef = s, c * d
                else:
                    g = math.gcd(s, t)
                    key, coef = (s // g) * (t // g), c * d * g
                v = out.get(key)
                out[key] = coef if v is None else v + coef
        return RadScalar._raw({s: c for s, c in out.items() if c})

    __rmul__ = __mul__

    def conjugate(self, p: int) -> "RadScalar":
        """Apply the automorphism ``sqrt(p) -> -sqrt(p)`` for a prime ``p``."""
        return RadScalar._raw(
            {s: (-c if s % p == 0 else c) for s, c in self._terms.items()}
        )

    def inverse(self) -> "RadScalar":
        if not self._terms:
            raise DivisionByZero("inverse of zero")
        num, den = ONE, self
        while not den.is_rational():
            p = _smallest_prime(max(den._terms))
            conj = den.conjugate(p)
            num = num * conj
            den = den * conj
        return num * (1 / den.rational_value())

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # comparison ------------------------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self._terms.get(1, Fraction(0)))
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def sign(self) -> int:
        """Exact sign, by interval bounds on each square root."""
        if not self._terms:
            return 0
        if self.is_rational():
            return 1 if self._terms[1] > 0 else -1
        bits = 32
        while True:
            scale = 1 << bits
            lo = hi = Fraction(0)
            for s, c in self._terms.items():
                r = math.isqrt(s * scale * scale)
                exact = r * r == s * scale * scale
                a = Fraction(r, scale)
                b = a if exact else Fraction(r + 1, scale)
                if c > 0:
                    lo += c * a
                    hi += c * b
                else:
                    lo += c * b
                    hi += c * a
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        return float(sum(float(c) * math.sqrt(s) for s, c in self._terms.items()))

    def __repr__(self):
        return f"RadScalar({str(self)!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for s in sorted(self._terms):
            c = self._terms[s]
            if s == 1:
                parts.append(str(c))
            elif c == 1:
                parts.append(f"sqrt({s})")
            elif c == -1:
                parts.append(f"-sqrt({s})")
            else:
                parts.append(f"{c}*sqrt({s})")
        return " + ".join(parts).replace("+ -", "- ")


def _coerce(x) -> RadScalar | None:
    if isinstance(x, RadScalar):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return RadScalar._raw({1: Fraction(x)} if x else {})
    return None


ZERO = RadScalar._raw({})
ONE = RadScalar._raw({1: Fraction(1)})


def rad(x) -> RadScalar:
    """Coerce an int, Fraction or RadScalar to a RadScalar."""
    out = _coerce(x)
    if out is None:
        raise TypeError(f"cannot interpret {x!r} as a RadScalar")
    return out


def rad_add(a, b) -> RadScalar:
    return rad(a) + rad(b)


def rad_mul(a, b) -> RadScalar:
    return rad(a) * rad(b)


def rad_inv(a) -> RadScalar:
    return rad(a).inverse()


def rad_is_rational(a) -> bool:
    return rad(a).is_rational()


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """Immutable dense row-major matrix of exact (or float) scalars."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise ValueError(
                f"expected {rows * cols} entries for a {rows}x{cols} matrix, got {len(entries)}"
            )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    def __reduce__(self):
        return Matrix, (self.rows, self.cols, self.entries)

    @classmethod
    def from_rows(cls, data: Sequence[Sequence], convert=as_rational) -> "Matrix":
        data = [list(r) for r in data]
        rows = len(data)
        cols = len(data[0]) if rows else 0
        if any(len(r) != cols for r in data):
            raise ValueError("ragged rows")
        return cls(rows, cols, (convert(x) for r in data for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, [Fraction(0)] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, (Fraction(int(i == j)) for i in range(n) for j in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, (self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(len(rows), len(cols), (self[i, j] for i in rows for j in cols))

    def map(self, f) -> "Matrix":
        return Matrix(self.rows, self.cols, (f(x) for x in self.entries))

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i)
        )

    def support(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.rows) for j in range(self.cols) if self[i, j] != 0]

    def is_rational(self) -> bool:
        return all(isinstance(x, (int, Fraction)) or (isinstance(x, RadScalar) and x.is_rational())
                   for x in self.entries)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(a == b for a, b in zip(self.entries, other.entries))

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))
        return f"Matrix({self.rows}x{self.cols}: [{body}])"


RatMatrix = Matrix
RadMatrix = Matrix


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a.cols != b.rows:
        raise ValueError("inner dimensions differ")
    out = []
    for i in range(a.rows):
        ra = a.row(i)
        for j in range(b.cols):
            acc = 0
            for t in range(a.cols):
                acc = acc + ra[t] * b[t, j]
            out.append(acc)
    return Matrix(a.rows, b.cols, out)


# ---------------------------------------------------------------------------
# rank and row reduction


def _find_pivot(a, start: int):
    """First nonzero of the trailing submatrix ``a[start:, start:]`` in row-major order."""
    for r in range(start, len(a)):
        row = a[r]
        for c in range(start, len(row)):
            if row[c] != 0:
                return r, c
    return None


def _integer_rows(m: Matrix) -> list[list[int]]:
    rows = []
    for i in range(m.rows):
        row = [as_rational(x) for x in m.row(i)]
        den = math.lcm(*(x.denominator for x in row)) if row else 1
        rows.append([int(x * den) for x in row])
    return rows


def rat_rank(m: Matrix) -> int:
    """Exact rank of a rational matrix by Bareiss fraction-free elimination."""
    a = _integer_rows(m)
    n = len(a)
    rank, prev = 0, 1
    while rank < n:
        hit = _find_pivot(a, rank)
        if hit is None:
            break
        r, c = hit
        a[rank], a[r] = a[r], a[rank]
        if c != rank:
            for row in a:
                row[rank], row[c] = row[c], row[rank]
        piv = a[rank][rank]
        prow = a[rank]
        for i in range(rank + 1, n):
            row = a[i]
            f = row[rank]
            for j in range(rank + 1, len(row)):
                row[j] = (piv * row[j] - f * prow[j]) // prev
            row[rank] = 0
        prev = piv
        rank += 1
    return rank


def field_rank(m: Matrix) -> int:
    """Exact rank over any exact field (Fraction or RadScalar entries)."""
    a = [list(m.row(i)) for i in range(m.rows)]
    n = len(a)
    rank = 0
    while rank < n:
        hit = _find_pivot(a, rank)
        if hit is None:
            break
        r, c = hit
        a[rank], a[r] = a[r], a[rank]
        if c != rank:
            for row in a:
                row[rank], row[c] = row[c], row[rank]
        prow = a[rank]
        inv = 1 / prow[rank]
        for i in range(rank + 1, n):
            row = a[i]
            f = row[rank]
            if f == 0:
                continue
            f = f * inv
            for j in range(rank + 1, len(row)):
                pj = prow[j]
                if pj != 0:
                    row[j] = row[j] - f * pj
            row[rank] = 0
        rank += 1
    return rank


def rad_rank(m: Matrix) -> int:
    """Exact rank over the field generated by the entries' radicands."""
    return field_rank(m.map(rad))


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns (lowest-index independent columns)."""
    a = [list(m.row(i)) for i in range(m.rows)]
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        piv = next((i for i in range(r, m.rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    return Matrix(m.rows, m.cols, (x for row in a for x in row)), pivots


def nullspace(m: Matrix) -> list[list]:
    """Basis of the right nullspace, one vector per free column."""
    red, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r, f]
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# exact psd test


class PsdCheck(NamedTuple):
    is_psd: bool
    pivots: list | None
    witness: list | None

    def __bool__(self):
        return self.is_psd


def quadratic_form(a: Matrix, x: Sequence):
    acc = 0
    for i in range(a.rows):
        if x[i] == 0:
            continue
        row = a.row(i)
        for j in range(a.cols):
            if x[j] != 0 and row[j] != 0:
                acc = acc + x[i] * row[j] * x[j]
    return acc


def _simple_witness(a: Matrix):
    n = a.rows
    for i in range(n):
        if a[i, i] < 0:
            return [Fraction(int(t == i)) for t in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            b = a[i, j]
            if b == 0:
                continue
            s = -1 if b > 0 else 1
            if a[i, i] + a[j, j] + 2 * s * b < 0:
                x = [Fraction(0)] * n
                x[i], x[j] = Fraction(1), Fraction(s)
                return x
    return None


def psd_check(a: Matrix) -> PsdCheck:
    """Exact psd test by symmetric Gaussian elimination (LDL^T, no pivoting).

    Works for Fraction and RadScalar entries.  A negative answer carries a
    witness ``x`` with ``x^T A x < 0`` in the same field as the entries.
    """
    if not a.is_symmetric():
        raise NotSymmetric("psd test needs a symmetric matrix")
    n = a.rows
    s = a.to_rows()
    steps = []
    pivots = []
    y = None
    for k in range(n):
        d = s[k][k]
        if d < 0:
            y = {k: Fraction(1)}
            break
        if d == 0:
            j = next((j for j in range(k + 1, n) if s[k][j] != 0), None)
            if j is None:
                pivots.append(d)
                steps.append((k, None, None))
                continue
            b, c = s[k][j], s[j][j]
            # (t e_k + e_j)^T S (t e_k + e_j) = c + 2 t b = -1
            y = {k: -(c + 1) / (2 * b), j: Fraction(1)}
            break
        pivots.append(d)
        prow = {j: s[k][j] for j in range(k + 1, n) if s[k][j] != 0}
        steps.append((k, d, prow))
        inv = 1 / d
        for i in prow:
            f = prow[i] * inv
            row = s[i]
            for j, v in prow.items():
                row[j] = row[j] - f * v
    if y is None:
        return PsdCheck(True, pivots, None)
    witness = _simple_witness(a)
    if witness is None:
        x = [Fraction(0)] * n
        for idx, v in y.items():
            x[idx] = v
        for k, d, prow in reversed(steps):
            if d is None:
                continue
            acc = 0
            for j, v in prow.items():
                if x[j] != 0:
                    acc = acc + v * x[j]
            x[k] = -acc / d
        witness = x
    assert quadratic_form(a, witness) < 0
    return PsdCheck(False, None, witness)


def psd_check_rational(a: Matrix) -> PsdCheck:
    """Exact psd test for a rational symmetric matrix.

    >>> psd_check_rational(Matrix.from_rows([[2, 1], [1, 1]])).pivots
    [Fraction(2, 1), Fraction(1, 2)]
    """
    return psd_check(a.map(as_rational))
