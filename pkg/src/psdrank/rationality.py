"""The rationality obstruction for minimal psd factorizations.

If every size-``k`` factorization of ``M`` is forced to be rank one, a
rational one would give an entry-wise square root of ``M`` that is diagonally
equivalent to a rational matrix.  On square classes that means
``class(M_ij) = chi_i * psi_j`` on every support cell.  A cycle in the support
graph whose alternating product is not a rational square rules this out.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from . import checker
from .bounds import (
    DEFAULT_EXHAUSTIVE_BITS,
    DEFAULT_RESTARTS,
    DEFAULT_SEED,
    ForcedSet,
    SignPattern,
    TriangularCertificate,
    psd_rank_bounds,
    rank_one_forced,
)
from .errors import ZeroLine
from .exactalg import DEFAULT_FACTOR_LIMIT, Matrix, as_rational, square_class_product, squarefree_part


@dataclass(frozen=True)
class SupportGraph:
    p: int
    q: int
    edges: tuple[tuple[int, int], ...]

    @classmethod
    def from_matrix(cls, m: Matrix) -> "SupportGraph":
        return cls(m.rows, m.cols, tuple(m.support()))

    def adjacency(self) -> list[list[int]]:
        """Row ``i`` is node ``i`` and column ``j`` is node ``p + j``."""
        adj: list[list[int]] = [[] for _ in range(self.p + self.q)]
        for i, j in self.edges:
            adj[i].append(self.p + j)
            adj[self.p + j].append(i)
        for a in adj:
            a.sort()
        return adj

    def components(self) -> list[tuple[list[int], list[int]]]:
        adj = self.adjacency()
        seen = [False] * (self.p + self.q)
        out = []
        for root in range(self.p + self.q):
            if seen[root]:
                continue
            seen[root] = True
            stack, nodes = [root], []
            while stack:
                u = stack.pop()
                nodes.append(u)
                for w in adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            nodes.sort()
            out.append(([u for u in nodes if u < self.p], [u - self.p for u in nodes if u >= self.p]))
        return out


@dataclass(frozen=True)
class CycleCertificate:
    """Alternating cycle ``i_1 j_1 i_2 j_2 ... i_m j_m`` through support cells
    ``(i_t, j_t)`` and ``(i_{t+1}, j_t)``, indices cyclic."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    alternating_class: int

    def cells(self) -> list[tuple[int, int]]:
        n = len(self.rows)
        out = []
        for t in range(n):
            out.append((self.rows[t], self.cols[t]))
            out.append((self.rows[(t + 1) % n], self.cols[t]))
        return out


@dataclass(frozen=True)
class DiagonalScaling:
    """Square classes with ``class(M_ij) == row_classes[i] * col_classes[j]`` on the support."""

    row_classes: tuple[int, ...]
    col_classes: tuple[int, ...]


@dataclass(frozen=True)
class IrrationalityCertificate:
    size: int
    forced: ForcedSet
    obstruction: CycleCertificate
    lower_certificate: TriangularCertificate | None = None
    upper_pattern: SignPattern | None = None


def square_class(r, limit: int = DEFAULT_FACTOR_LIMIT) -> int:
    return squarefree_part(r, limit).radicand


def alternating_product(m: Matrix, rows: Sequence[int], cols: Sequence[int]) -> Fraction:
    n = len(rows)
    num, den = Fraction(1), Fraction(1)
    for t in range(n):
        num *= as_rational(m[rows[t], cols[t]])
        den *= as_rational(m[rows[(t + 1) % n], cols[t]])
    return num / den


def cycle_certificate(m: Matrix, rows: Sequence[int], cols: Sequence[int],
                      limit: int = DEFAULT_FACTOR_LIMIT) -> CycleCertificate | None:
    """The alternating cycle through ``rows``/``cols`` as a certificate, or None if its class is 1."""
    rows, cols = tuple(rows), tuple(cols)
    n = len(rows)
    for t in range(n):
        if m[rows[t], cols[t]] == 0 or m[rows[(t + 1) % n], cols[t]] == 0:
            raise ValueError(f"cycle leaves the support at column {cols[t]}")
    cls = square_class(alternating_product(m, rows, cols), limit)
    return CycleCertificate(rows, cols, cls) if cls != 1 else None


def diagonal_rationality_test(
    m: Matrix, limit: int = DEFAULT_FACTOR_LIMIT
) -> Union[DiagonalScaling, CycleCertificate]:
    """Propagate square classes along a spanning forest; a failing edge closes a cycle.

    Components are rooted at their lowest node with class 1 and scale
    independently.  Non-tree edges are checked in row-major order.
    """
    if any(as_rational(x) < 0 for x in m.entries):
        raise ValueError("diagonal rationality test needs a nonnegative matrix")
    p = m.rows
    graph = SupportGraph.from_matrix(m)
    adj = graph.adjacency()
    n = p + m.cols
    cell_class = {(i, j): square_class(m[i, j], limit) for i, j in graph.edges}

    def edge_class(u, w):
        i, j = (u, w - p) if u < p else (w, u - p)
        return cell_class[i, j]

    node_class = [0] * n
    parent = [-1] * n
    depth = [0] * n
    seen = [False] * n
    for root in range(n):
        if seen[root]:
            continue
        seen[root] = True
        node_class[root] = 1
        queue = [root]
        while queue:
            nxt = []
            for u in queue:
                for w in adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        parent[w] = u
                        depth[w] = depth[u] + 1
                        node_class[w] = square_class_product(node_class[u], edge_class(u, w))
                        nxt.append(w)
            queue = nxt

    for i, j in graph.edges:
        u, w = i, p + j
        if square_class_product(node_class[u], node_class[w]) == cell_class[i, j]:
            continue
        # tree path from row node u to column node w, then close with (i, j)
        left, right = [u], [w]
        a, b = u, w
        while depth[a] > depth[b]:
            a = parent[a]
            left.append(a)
        while depth[b] > depth[a]:
            b = parent[b]
            right.append(b)
        while a != b:
            a, b = parent[a], parent[b]
            left.append(a)
            right.append(b)
        path = left + right[-2::-1]
        rows = tuple(path[0::2])
        cols = tuple(x - p for x in path[1::2])
        cert = cycle_certificate(m, rows, cols, limit)
        assert cert is not None
        return cert

    return DiagonalScaling(tuple(node_class[:p]), tuple(node_class[p:]))


def check_zero_lines(m: Matrix) -> None:
    for i in range(m.rows):
        if all(x == 0 for x in m.row(i)):
            raise ZeroLine(f"row {i} is zero")
    for j in range(m.cols):
        if all(x == 0 for x in m.col(j)):
            raise ZeroLine(f"column {j} is zero")


@dataclass
class IrrationalityAnalysis:
    certificate: IrrationalityCertificate | None
    reason: str
    bounds: object = None
    forced: ForcedSet | None = None
    outcome: Union[DiagonalScaling, CycleCertificate, None] = None


def analyze_irrationality(
    m: Matrix,
    exhaustive_bits: int = DEFAULT_EXHAUSTIVE_BITS,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
    limit: int = DEFAULT_FACTOR_LIMIT,
    bounds=None,
) -> IrrationalityAnalysis:
    """Run the three conditions in order and keep the intermediate results."""
    check_zero_lines(m)
    if bounds is None:
        bounds = psd_rank_bounds(m, exhaustive_bits, restarts, seed, workers, limit)
    if not bounds.tight:
        return IrrationalityAnalysis(None, f"bounds not tight ({bounds.lower} < {bounds.upper})", bounds)
    k = bounds.lower
    forced = rank_one_forced(m, k)
    if not forced.covers(m.rows, m.cols):
        missing = sorted(set(range(m.rows)) - forced.rows), sorted(set(range(m.cols)) - forced.cols)
        return IrrationalityAnalysis(
            None, f"rank-one forcing misses rows {missing[0]} and columns {missing[1]}", bounds, forced
        )
    outcome = diagonal_rationality_test(m, limit)
    if not isinstance(outcome, CycleCertificate):
        return IrrationalityAnalysis(
            None, "square classes are diagonally consistent", bounds, forced, outcome
        )
    cert = IrrationalityCertificate(k, forced, outcome, bounds.lower_certificate, bounds.upper_pattern)
    return IrrationalityAnalysis(cert, "certified", bounds, forced, outcome)


def no_rational_factorization_certificate(
    m: Matrix,
    exhaustive_bits: int = DEFAULT_EXHAUSTIVE_BITS,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
    limit: int = DEFAULT_FACTOR_LIMIT,
) -> IrrationalityCertificate | None:
    """Certificate that no rational psd factorization of size ``rank_psd M`` exists.

    None means inconclusive: the bounds are not tight, the forcing does not
    cover every line, or the square classes are diagonally consistent.
    """
    return analyze_irrationality(m, exhaustive_bits, restarts, seed, workers, limit).certificate


def validate_certificate(m: Matrix, cert: IrrationalityCertificate) -> bool:
    """Re-check witnesses, coverage and cycle arithmetic with :mod:`psdrank.checker`."""
    k = cert.size
    if k < 1:
        return False
    if cert.lower_certificate is not None:
        lc = cert.lower_certificate
        if len(lc.rows) != k or not checker.check_triangular(m, lc.rows, lc.cols):
            return False
    forced = cert.forced
    if set(forced.rows) != set(range(m.rows)) or set(forced.cols) != set(range(m.cols)):
        return False
    for axis, indices, witnesses, count in (
        ("row", forced.rows, forced.row_witnesses, m.rows),
        ("col", forced.cols, forced.col_witnesses, m.cols),
    ):
        for idx in range(count):
            w = witnesses.get(idx)
            if w is None or not checker.check_forced(m, idx, axis, w.rows, w.cols, k):
                return False
    ob = cert.obstruction
    return checker.check_cycle(m, ob.rows, ob.cols, ob.alternating_class)
