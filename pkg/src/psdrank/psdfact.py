"""Psd factorizations: data model, exact verification and construction.

A psd factorization of a nonnegative ``p x q`` matrix ``M`` of size ``k`` is a
list of symmetric psd ``k x k`` matrices ``A_1..A_p`` and ``B_1..B_q`` with
``M[i, j] == <A_i, B_j>`` (trace inner product).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, NotPsd, NotRankOne
from .exactalg import (
    Matrix,
    RadScalar,
    as_rational,
    field_rank,
    psd_check,
    rad,
    rat_rank,
    rref,
)

ARITHMETICS = ("rational", "radical", "float64")
DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class PsdFactorization:
    size: int
    row_factors: tuple
    col_factors: tuple
    arithmetic: str = "rational"

    def __post_init__(self):
        if self.arithmetic not in ARITHMETICS:
            raise ValueError(f"unknown arithmetic {self.arithmetic!r}")
        object.__setattr__(self, "row_factors", tuple(self.row_factors))
        object.__setattr__(self, "col_factors", tuple(self.col_factors))

    @property
    def factors(self) -> tuple:
        return self.row_factors + self.col_factors


@dataclass(frozen=True)
class RankOneDecomposition:
    scale: Fraction
    direction: tuple

    def reconstruct(self) -> Matrix:
        return phi(self.direction).map(lambda x: self.scale * x)


@dataclass
class VerificationReport:
    valid: bool
    bad_cells: list = field(default_factory=list)
    non_psd: list = field(default_factory=list)

    def __bool__(self):
        return self.valid


def phi(v: Sequence) -> Matrix:
    """The rank-one psd matrix ``v v^T``."""
    v = list(v)
    n = len(v)
    return Matrix(n, n, (v[i] * v[j] for i in range(n) for j in range(n)))


def inner(a: Matrix, b: Matrix):
    """Trace inner product of two symmetric matrices."""
    acc = 0
    for x, y in zip(a.entries, b.entries):
        if x != 0 and y != 0:
            acc = acc + x * y
    return acc


def rational_direction(a: Matrix) -> RankOneDecomposition:
    """Write a rational psd matrix of rank at most one as ``scale * q q^T``.

    ``q`` is rational with first nonzero coordinate 1; the zero matrix maps to
    ``(1, 0)``.
    """
    a = a.map(as_rational)
    n = a.rows
    if not a.is_square():
        raise NotPsd("not square")
    if any(a[i, i] < 0 for i in range(n)):
        raise NotPsd("negative diagonal entry")
    if rat_rank(a) > 1:
        raise NotRankOne(f"rank {rat_rank(a)} > 1")
    t = next((i for i in range(n) if a[i, i] != 0), None)
    if t is None:
        if any(x != 0 for x in a.entries):
            raise NotPsd("zero diagonal with nonzero off-diagonal entries")
        return RankOneDecomposition(Fraction(1), tuple(Fraction(0) for _ in range(n)))
    lam = a[t, t]
    q = tuple(x / lam for x in a.row(t))
    out = RankOneDecomposition(lam, q)
    if out.reconstruct() != a:
        raise NotPsd("matrix is not lambda * q q^T")
    return out


def _is_psd_float(a, tol: float) -> bool:
    arr = np.asarray(a, dtype=float)
    if not np.allclose(arr, arr.T, atol=tol, rtol=0):
        return False
    return bool(np.linalg.eigvalsh(arr).min() >= -tol) if arr.size else True


def _to_float(m) -> np.ndarray:
    if isinstance(m, Matrix):
        return np.array([float(x) for x in m.entries], dtype=float).reshape(m.rows, m.cols)
    return np.asarray(m, dtype=float)


def verify_factorization(m: Matrix, f: PsdFactorization, tol: float = DEFAULT_TOL) -> VerificationReport:
    """Check every factor is psd and every ``<A_i, B_j>`` reproduces ``M``.

    Exact equality for rational and radical arithmetic; ``|diff| <= tol`` for
    float64.  Raises DimensionMismatch when shapes disagree.
    """
    if len(f.row_factors) != m.rows or len(f.col_factors) != m.cols:
        raise DimensionMismatch(
            f"factorization has {len(f.row_factors)}x{len(f.col_factors)} factors, matrix is {m.rows}x{m.cols}"
        )
    k = f.size
    for a in f.factors:
        shape = a.shape if isinstance(a, Matrix) else np.shape(a)
        if tuple(shape) != (k, k):
            raise DimensionMismatch(f"factor of shape {tuple(shape)}, expected {(k, k)}")

    report = VerificationReport(True)
    if f.arithmetic == "float64":
        rows = [_to_float(a) for a in f.row_factors]
        cols = [_to_float(b) for b in f.col_factors]
        for label, fs in (("row", rows), ("col", cols)):
            for idx, a in enumerate(fs):
                if not _is_psd_float(a, tol):
                    report.non_psd.append((label, idx))
        for i, a in enumerate(rows):
            for j, b in enumerate(cols):
                got = float(np.sum(a * b))
                want = float(m[i, j])
                if abs(got - want) > tol:
                    report.bad_cells.append((i, j, want, got))
    else:
        conv = as_rational if f.arithmetic == "rational" else rad
        rows = [a.map(conv) for a in f.row_factors]
        cols = [b.map(conv) for b in f.col_factors]
        for label, fs in (("row", rows), ("col", cols)):
            for idx, a in enumerate(fs):
                if not a.is_symmetric() or not psd_check(a).is_psd:
                    report.non_psd.append((label, idx))
        for i, a in enumerate(rows):
            for j, b in enumerate(cols):
                got = inner(a, b)
                want = m[i, j]
                if got != want:
                    report.bad_cells.append((i, j, want, got))
    report.valid = not report.bad_cells and not report.non_psd
    return report


def factor_ranks(f: PsdFactorization) -> list[int]:
    """Exact rank of every factor, row factors first."""
    if f.arithmetic == "float64":
        raise ValueError("factor ranks need exact arithmetic")
    if f.arithmetic == "rational":
        return [rat_rank(a) for a in f.factors]
    return [field_rank(a.map(rad)) for a in f.factors]


def factorization_from_sqrt(s: Matrix) -> PsdFactorization:
    """Size-``rank(S)`` factorization of ``S∘S`` with rank-one factors.

    ``S = U V^T`` where ``V^T`` holds the lowest-index independent rows of
    ``S`` and ``U`` their coefficients; then ``A_i = phi(U_i)`` and
    ``B_j = phi(V_j)`` satisfy ``<A_i, B_j> = (U_i . V_j)**2 = S_ij**2``.
    """
    s = s.map(rad)
    red, pivots = rref(s.transpose())
    r = len(pivots)
    # S^T = S^T[:, pivots] * red[:r]  =>  S = red[:r]^T * S[pivots, :]
    u = [[red[t, i] for t in range(r)] for i in range(s.rows)]
    v = [[s[p, j] for p in pivots] for j in range(s.cols)]
    exact = all(x.is_rational() for x in s.entries)
    if exact:
        to = lambda x: rad(x).rational_value()  # noqa: E731
        row_factors = [phi([to(x) for x in ui]) for ui in u]
        col_factors = [phi([to(x) for x in vj]) for vj in v]
        arithmetic = "rational"
    else:
        row_factors = [phi(ui) for ui in u]
        col_factors = [phi(vj) for vj in v]
        arithmetic = "radical"
    return PsdFactorization(max(r, 0), row_factors, col_factors, arithmetic)


def square_entries(s: Matrix) -> Matrix:
    """The entry-wise square ``S∘S`` as a rational matrix."""
    return s.map(lambda x: rad(x * x).rational_value())


def is_sqrt_candidate(s: Matrix, m: Matrix) -> bool:
    """Every entry of ``S`` is a single term ``±c sqrt(t)`` and ``S∘S == M``."""
    s = s.map(rad)
    if any(len(x.terms) > 1 for x in s.entries):
        return False
    return s.shape == m.shape and square_entries(s) == m.map(as_rational)
