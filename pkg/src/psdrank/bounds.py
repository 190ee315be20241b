"""Psd-rank bounds.

Upper bound: the smallest rank of an entry-wise square root of ``M`` over
sign patterns.  Lower bound: the largest triangular submatrix.  A triangular
submatrix of the lower-bound size also forces the factors of lines with a
single nonzero inside it to be rank one.
"""
from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import BoundMismatch, NotSquare
from .exactalg import DEFAULT_FACTOR_LIMIT, Matrix, RadScalar, as_rational, field_rank

EXHAUSTIVE_LIMIT = 12
DEFAULT_EXHAUSTIVE_BITS = 20
DEFAULT_RESTARTS = 64
DEFAULT_SEED = 0


@dataclass(frozen=True, order=True)
class TriangularCertificate:
    """Row and column orderings of a lower-triangular submatrix with nonzero diagonal."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.rows)

    def key(self):
        return tuple(sorted(self.rows)), tuple(sorted(self.cols))


@dataclass(frozen=True)
class ForcedSet:
    rows: frozenset
    cols: frozenset
    row_witnesses: dict
    col_witnesses: dict

    def covers(self, p: int, q: int) -> bool:
        return self.rows == frozenset(range(p)) and self.cols == frozenset(range(q))


@dataclass(frozen=True)
class SignPattern:
    """A sign (+1/-1) for every support cell of ``M``."""

    signs: tuple[tuple[tuple[int, int], int], ...]

    def as_dict(self) -> dict:
        return dict(self.signs)

    def sign_matrix(self, p: int, q: int) -> list[list[int]]:
        out = [[0] * q for _ in range(p)]
        for (i, j), s in self.signs:
            out[i][j] = s
        return out

    def is_all_plus(self) -> bool:
        return all(s == 1 for _, s in self.signs)


@dataclass
class SqrtRankResult:
    rank: int
    pattern: SignPattern
    exhaustive: bool
    free_bits: int
    examined: int
    rank_counts: dict = field(default_factory=dict)


@dataclass
class BoundsReport:
    lower: int
    lower_certificate: TriangularCertificate
    upper: int
    upper_pattern: SignPattern
    search: SqrtRankResult

    @property
    def tight(self) -> bool:
        return self.lower == self.upper


# ---------------------------------------------------------------------------
# triangular submatrices


def is_triangular(t: Matrix):
    """Orderings that make ``t`` lower triangular with nonzero diagonal, or None.

    Greedy: peel a row with exactly one nonzero among the remaining columns,
    together with that column.
    """
    if not t.is_square():
        raise NotSquare(f"{t.rows}x{t.cols} is not square")
    rows = list(range(t.rows))
    cols = set(range(t.cols))
    row_order, col_order = [], []
    while rows:
        for r in rows:
            nz = [c for c in cols if t[r, c] != 0]
            if len(nz) == 1:
                break
        else:
            return None
        rows.remove(r)
        cols.discard(nz[0])
        row_order.append(r)
        col_order.append(nz[0])
    # peeled first = top row of the lower-triangular form
    return tuple(row_order), tuple(col_order)


def _row_masks(m: Matrix) -> list[int]:
    return [sum(1 << j for j in range(m.cols) if m[i, j] != 0) for i in range(m.rows)]


def _bits(mask: int) -> tuple[int, ...]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _extensions(state, masks, p, q):
    rmask, cmask = state
    for r in range(p):
        if rmask >> r & 1 or masks[r] & cmask:
            continue
        free = masks[r] & ~cmask
        c = 0
        while free:
            if free & 1:
                yield rmask | 1 << r, cmask | 1 << c
            free >>= 1
            c += 1


def _levels(m: Matrix, kmax: int) -> Iterator[set]:
    """Yield the sets of k x k triangular (row mask, col mask) pairs, k = 1, 2, ..."""
    masks = _row_masks(m)
    level = {(1 << i, 1 << j) for i, j in m.support()}
    k = 1
    while level and k <= kmax:
        yield level
        nxt = set()
        for state in level:
            nxt.update(_extensions(state, masks, m.rows, m.cols))
        level = nxt
        k += 1


def _certificate(m: Matrix, rmask: int, cmask: int) -> TriangularCertificate:
    rows, cols = _bits(rmask), _bits(cmask)
    orders = is_triangular(m.submatrix(rows, cols))
    assert orders is not None
    ro, co = orders
    return TriangularCertificate(tuple(rows[a] for a in ro), tuple(cols[b] for b in co))


def _state_key(state):
    return _bits(state[0]), _bits(state[1])


def enumerate_triangular(m: Matrix, k: int) -> Iterator[TriangularCertificate]:
    """All ``k x k`` triangular submatrices, once per (row set, column set)."""
    if k <= 0:
        return
    level = None
    for depth, lv in enumerate(_levels(m, k), start=1):
        if depth == k:
            level = lv
    if not level:
        return
    for state in sorted(level, key=_state_key):
        yield _certificate(m, *state)


def _branch_and_bound(m: Matrix) -> tuple[int, list]:
    masks = _row_masks(m)
    p, q = m.rows, m.cols
    # greedy seed: repeatedly add the extension that keeps most rows available
    best, state = 0, None
    for i, j in m.support():
        cur = (1 << i, 1 << j)
        size = 1
        while True:
            ext = sorted(_extensions(cur, masks, p, q), key=_state_key)
            if not ext:
                break
            cur = ext[0]
            size += 1
        if size > best:
            best, state = size, cur
    found = {state} if state else set()
    seen = set()

    def upper(st):
        rmask, cmask = st
        avail_r = sum(1 for r in range(p) if not rmask >> r & 1 and masks[r] & ~cmask)
        avail_c = q - bin(cmask).count("1")
        return bin(rmask).count("1") + min(avail_r, avail_c)

    def dfs(st, size):
        nonlocal best, found
        if st in seen:
            return
        seen.add(st)
        if size > best:
            best, found = size, {st}
        elif size == best:
            found.add(st)
        if upper(st) < best:
            return
        for nxt in _extensions(st, masks, p, q):
            dfs(nxt, size + 1)

    for i, j in m.support():
        dfs((1 << i, 1 << j), 1)
    return best, sorted(found, key=_state_key)


def max_triangular_submatrix(m: Matrix) -> TriangularCertificate:
    """A largest triangular submatrix, lexicographically smallest index sets on ties."""
    if not m.support():
        return TriangularCertificate((), ())
    if min(m.rows, m.cols) <= EXHAUSTIVE_LIMIT:
        last = None
        for lv in _levels(m, min(m.rows, m.cols)):
            last = lv
        state = min(last, key=_state_key)
    else:
        _, found = _branch_and_bound(m)
        state = found[0]
    return _certificate(m, *state)


def forced_from_certificates(m: Matrix, certs: Iterable[TriangularCertificate]) -> ForcedSet:
    row_w: dict = {}
    col_w: dict = {}
    for cert in certs:
        for r in cert.rows:
            if sum(1 for c in cert.cols if m[r, c] != 0) == 1:
                if r not in row_w or cert.key() < row_w[r].key():
                    row_w[r] = cert
        for c in cert.cols:
            if sum(1 for r in cert.rows if m[r, c] != 0) == 1:
                if c not in col_w or cert.key() < col_w[c].key():
                    col_w[c] = cert
    return ForcedSet(
        frozenset(row_w), frozenset(col_w),
        dict(sorted(row_w.items())), dict(sorted(col_w.items())),
    )


def rank_one_forced(m: Matrix, k: int) -> ForcedSet:
    """Lines whose factor must be rank one in every size-``k`` factorization."""
    certs = list(enumerate_triangular(m, k))
    if not certs:
        raise BoundMismatch(f"no {k}x{k} triangular submatrix")
    return forced_from_certificates(m, certs)


# ---------------------------------------------------------------------------
# entry-wise square roots


def spanning_forest(p: int, q: int, cells: Sequence[tuple[int, int]]):
    """Tree edges and component count of the bipartite support graph.

    Nodes ``0..p-1`` are rows and ``p..p+q-1`` columns; BFS from the lowest
    unvisited node with neighbours in increasing order.
    """
    adj: list[list[int]] = [[] for _ in range(p + q)]
    for i, j in cells:
        adj[i].append(p + j)
        adj[p + j].append(i)
    for a in adj:
        a.sort()
    seen = [False] * (p + q)
    tree = set()
    components = 0
    for root in range(p + q):
        if seen[root]:
            continue
        components += 1
        seen[root] = True
        queue = [root]
        while queue:
            nxt = []
            for u in queue:
                for w in adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        nxt.append(w)
                        tree.add((u, w - p) if u < p else (w, u - p))
            queue = nxt
    return tree, components


class _SqrtSearch:
    """Sign-pattern space of ``M`` modulo row/column sign flips."""

    def __init__(self, m: Matrix, limit: int = DEFAULT_FACTOR_LIMIT):
        if any(as_rational(x) < 0 for x in m.entries):
            raise ValueError("entry-wise square roots need a nonnegative matrix")
        self.p, self.q = m.rows, m.cols
        self.cells = m.support()
        self.base = [[RadScalar.sqrt(m[i, j], limit) for j in range(m.cols)] for i in range(m.rows)]
        tree, comps = spanning_forest(self.p, self.q, self.cells)
        self.free = [c for c in self.cells if c not in tree]
        assert len(self.free) == len(self.cells) - self.p - self.q + comps

    def matrix(self, bits: int) -> Matrix:
        rows = [list(r) for r in self.base]
        for b, (i, j) in enumerate(self.free):
            if bits >> b & 1:
                rows[i][j] = -rows[i][j]
        return Matrix(self.p, self.q, (x for r in rows for x in r))

    def rank(self, bits: int) -> int:
        return field_rank(self.matrix(bits))

    def pattern(self, bits: int) -> SignPattern:
        neg = {self.free[b] for b in range(len(self.free)) if bits >> b & 1}
        return SignPattern(tuple((c, -1 if c in neg else 1) for c in self.cells))


def _scan_block(args):
    m, lo, hi, limit = args
    search = _SqrtSearch(m, limit)
    best_rank, best_bits = None, None
    counts: dict = {}
    for bits in range(lo, hi):
        r = search.rank(bits)
        counts[r] = counts.get(r, 0) + 1
        if best_rank is None or r < best_rank:
            best_rank, best_bits = r, bits
    return best_rank, best_bits, counts


def sqrt_rank_min(
    m: Matrix,
    exhaustive_bits: int = DEFAULT_EXHAUSTIVE_BITS,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
    limit: int = DEFAULT_FACTOR_LIMIT,
) -> SqrtRankResult:
    """Minimum exact rank of an entry-wise square root of ``M``.

    Signs on a spanning forest of the support graph are fixed to ``+``; the
    remaining cells are searched exhaustively when there are at most
    ``exhaustive_bits`` of them, else by seeded hill-climbing.  Ties go to the
    lowest pattern index, so the all-plus root wins whenever it is optimal.
    """
    search = _SqrtSearch(m, limit)
    nfree = len(search.free)
    if not search.cells:
        return SqrtRankResult(0, SignPattern(()), True, 0, 1, {0: 1})

    if nfree <= exhaustive_bits:
        total = 1 << nfree
        if workers > 1 and total >= 2 * workers:
            step = -(-total // workers)
            blocks = [(m, lo, min(lo + step, total), limit) for lo in range(0, total, step)]
            with ProcessPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(_scan_block, blocks))
        else:
            parts = [_scan_block((m, 0, total, limit))]
        best_rank, best_bits = None, None
        counts: dict = {}
        for r, bits, c in parts:
            for key, v in c.items():
                counts[key] = counts.get(key, 0) + v
            if best_rank is None or r < best_rank:
                best_rank, best_bits = r, bits
        counts = dict(sorted(counts.items()))
        return SqrtRankResult(best_rank, search.pattern(best_bits), True, nfree, total, counts)

    rng = random.Random(seed)
    cache: dict = {}

    def rank(bits):
        if bits not in cache:
            cache[bits] = search.rank(bits)
        return cache[bits]

    best = (rank(0), 0)
    for _ in range(restarts):
        bits = rng.getrandbits(nfree)
        cur = rank(bits)
        best = min(best, (cur, bits))
        for _ in range(2 * nfree):
            cand = bits ^ (1 << rng.randrange(nfree))
            r = rank(cand)
            if r <= cur:
                bits, cur = cand, r
                best = min(best, (cur, bits))
    counts: dict = {}
    for r in cache.values():
        counts[r] = counts.get(r, 0) + 1
    return SqrtRankResult(best[0], search.pattern(best[1]), False, nfree, len(cache), dict(sorted(counts.items())))


def sqrt_matrix(m: Matrix, pattern: SignPattern) -> Matrix:
    """The square root ``S(sigma)`` with ``S_ij = sigma_ij * sqrt(M_ij)``."""
    signs = pattern.as_dict()
    return Matrix(m.rows, m.cols, (
        RadScalar.sqrt(m[i, j]) * signs.get((i, j), 1)
        for i in range(m.rows) for j in range(m.cols)
    ))


def psd_rank_bounds(
    m: Matrix,
    exhaustive_bits: int = DEFAULT_EXHAUSTIVE_BITS,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
    limit: int = DEFAULT_FACTOR_LIMIT,
) -> BoundsReport:
    cert = max_triangular_submatrix(m)
    search = sqrt_rank_min(m, exhaustive_bits, restarts, seed, workers, limit)
    return BoundsReport(cert.size, cert, search.rank, search.pattern, search)
