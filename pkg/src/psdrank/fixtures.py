"""Built-in instances: the 8 x 6 counterexample matrix and its polytope."""
from __future__ import annotations

from .exactalg import Matrix
from .slackgeom import Polytope

PAPER_MATRIX = (
    (0, 0, 2, 1, 0, 1),
    (1, 0, 0, 2, 0, 1),
    (0, 1, 2, 0, 0, 1),
    (1, 2, 0, 0, 0, 1),
    (0, 0, 2, 1, 1, 0),
    (1, 0, 0, 2, 1, 0),
    (0, 1, 2, 0, 1, 0),
    (1, 2, 0, 0, 1, 0),
)

PAPER_VERTICES = (
    (0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 2, 0),
    (0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 2, 1),
)

# 0-based versions of the witnesses named in the text
PAPER_TRIANGULAR_ROWS = (0, 4, 6, 7)
PAPER_TRIANGULAR_COLS = (0, 1, 4, 5)
PAPER_CYCLE_ROWS = (0, 1)
PAPER_CYCLE_COLS = (3, 5)


def paper_matrix() -> Matrix:
    return Matrix.from_rows(PAPER_MATRIX)


def paper_polytope() -> Polytope:
    return Polytope(3, PAPER_VERTICES)


MATRICES = {"paper-matrix": paper_matrix}
POLYTOPES = {"paper-polytope": paper_polytope}
