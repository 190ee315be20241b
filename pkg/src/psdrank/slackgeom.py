"""Slack matrices of small polytopes given by their vertices."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import NegativeSlack, NotFullDimensional
from .exactalg import Matrix, as_rational, nullspace, rat_rank

MAX_DIMENSION = 4
MAX_VERTICES = 32


@dataclass(frozen=True)
class Polytope:
    dimension: int
    vertices: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        verts = tuple(tuple(as_rational(x) for x in v) for v in self.vertices)
        if any(len(v) != self.dimension for v in verts):
            raise ValueError(f"every vertex needs {self.dimension} coordinates")
        if len(set(verts)) != len(verts):
            raise ValueError("duplicate vertices")
        object.__setattr__(self, "vertices", verts)
        if affine_rank(verts) != self.dimension:
            raise NotFullDimensional(
                f"vertices span dimension {affine_rank(verts)}, expected {self.dimension}"
            )


@dataclass(frozen=True)
class FacetInequality:
    """``normal . x <= offset``."""

    normal: tuple[Fraction, ...]
    offset: Fraction

    def slack(self, x: Sequence) -> Fraction:
        return self.offset - sum(a * as_rational(v) for a, v in zip(self.normal, x))

    def __str__(self):
        terms = []
        for idx, a in enumerate(self.normal):
            if a:
                terms.append(f"{a}*x{idx + 1}")
        lhs = " + ".join(terms).replace("+ -", "- ") or "0"
        return f"{lhs} <= {self.offset}"


@dataclass(frozen=True)
class SlackMatch:
    """``target[i][j] == col_scales[j] * computed[row_perm[i]][col_perm[j]]``."""

    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    col_scales: tuple[Fraction, ...]


def affine_rank(points) -> int:
    points = list(points)
    if not points:
        return -1
    base = points[0]
    diffs = [[a - b for a, b in zip(v, base)] for v in points[1:]]
    if not diffs:
        return 0
    return rat_rank(Matrix.from_rows(diffs))


def _normalize(normal, offset):
    lead = next((x for x in (*normal, offset) if x != 0))
    s = abs(lead)
    return tuple(x / s for x in normal), offset / s


def facets_bruteforce(poly: Polytope) -> list[FacetInequality]:
    """Facets from hyperplanes through every affinely independent d-subset of vertices."""
    d = poly.dimension
    verts = poly.vertices
    if d > MAX_DIMENSION or len(verts) > MAX_VERTICES:
        raise ValueError(f"brute-force hull limited to d <= {MAX_DIMENSION}, <= {MAX_VERTICES} vertices")
    found = set()
    for subset in combinations(verts, d):
        base = subset[0]
        diffs = [[a - b for a, b in zip(v, base)] for v in subset[1:]]
        if diffs:
            basis = nullspace(Matrix.from_rows(diffs))
        else:
            basis = [[Fraction(1)]]
        if len(basis) != 1:
            continue
        normal = tuple(basis[0])
        offset = sum(a * x for a, x in zip(normal, base))
        vals = [sum(a * x for a, x in zip(normal, v)) for v in verts]
        if all(v <= offset for v in vals):
            pass
        elif all(v >= offset for v in vals):
            normal, offset = tuple(-a for a in normal), -offset
        else:
            continue
        found.add(_normalize(normal, offset))
    return [FacetInequality(n, b) for n, b in sorted(found)]


def slack_matrix(poly: Polytope, facets: Sequence[FacetInequality]) -> Matrix:
    """Entry ``(i, j)`` is the slack of vertex ``i`` in facet ``j``."""
    entries = []
    for v in poly.vertices:
        for f in facets:
            s = f.slack(v)
            if s < 0:
                raise NegativeSlack(f"vertex {v} violates {f}")
            entries.append(s)
    return Matrix(len(poly.vertices), len(facets), entries)


def _column_scale(src: Sequence[Fraction], dst: Sequence[Fraction]):
    total_src, total_dst = sum(src), sum(dst)
    if total_src == 0 or total_dst == 0:
        return Fraction(1) if total_src == total_dst == 0 else None
    s = total_dst / total_src
    if s <= 0 or sorted(x * s for x in src) != sorted(dst):
        return None
    return s


def _row_matching(rows_src, rows_dst):
    pool: dict = {}
    for i, r in enumerate(rows_src):
        pool.setdefault(r, []).append(i)
    perm = []
    for r in rows_dst:
        idx = pool.get(r)
        if not idx:
            return None
        perm.append(idx.pop(0))
    return tuple(perm)


def match_up_to_scaling(computed: Matrix, target: Matrix) -> SlackMatch | None:
    """Column permutation + positive column scales, then row permutation, giving ``target``."""
    if computed.shape != target.shape:
        return None
    p, q = target.shape
    src_cols = [[as_rational(x) for x in computed.col(j)] for j in range(q)]
    dst_cols = [[as_rational(x) for x in target.col(j)] for j in range(q)]
    options = []
    for j in range(q):
        opts = [(c, s) for c in range(q) if (s := _column_scale(src_cols[c], dst_cols[j])) is not None]
        if not opts:
            return None
        options.append(opts)

    dst_rows = [tuple(dst_cols[j][i] for j in range(q)) for i in range(p)]
    identity = tuple(range(p))
    used = [False] * q
    chosen: list = []
    best: list = []

    def search(j):
        if j == q:
            src_rows = [tuple(src_cols[c][i] * s for c, s in chosen) for i in range(p)]
            rp = _row_matching(src_rows, dst_rows)
            if rp is not None:
                hit = SlackMatch(rp, tuple(c for c, _ in chosen), tuple(s for _, s in chosen))
                if not best or (hit.row_perm, hit.col_perm) < (best[0].row_perm, best[0].col_perm):
                    best[:] = [hit]
            return
        for c, s in options[j]:
            if used[c]:
                continue
            used[c] = True
            chosen.append((c, s))
            search(j + 1)
            chosen.pop()
            used[c] = False
            if best and best[0].row_perm == identity:
                return

    # smallest (row_perm, col_perm) wins, so vertex order is kept whenever possible
    search(0)
    return best[0] if best else None


def apply_match(computed: Matrix, match: SlackMatch) -> Matrix:
    p, q = computed.shape
    return Matrix(p, q, (
        match.col_scales[j] * computed[match.row_perm[i], match.col_perm[j]]
        for i in range(p) for j in range(q)
    ))

