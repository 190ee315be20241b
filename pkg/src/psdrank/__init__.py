"""Exact positive semidefinite rank bounds and certificates for rational matrices."""

from .bounds import (
    BoundsReport,
    ForcedSet,
    SignPattern,
    TriangularCertificate,
    enumerate_triangular,
    is_triangular,
    max_triangular_submatrix,
    psd_rank_bounds,
    rank_one_forced,
    sqrt_matrix,
    sqrt_rank_min,
)
from .exactalg import (
    Matrix,
    RadScalar,
    psd_check,
    psd_check_rational,
    rad_add,
    rad_inv,
    rad_is_rational,
    rad_mul,
    rad_rank,
    rat_rank,
    squarefree_part,
)
from .fixtures import paper_matrix, paper_polytope
from .psdfact import (
    PsdFactorization,
    RankOneDecomposition,
    factor_ranks,
    factorization_from_sqrt,
    phi,
    rational_direction,
    verify_factorization,
)
from .rationality import (
    CycleCertificate,
    DiagonalScaling,
    IrrationalityCertificate,
    diagonal_rationality_test,
    no_rational_factorization_certificate,
    square_class,
    validate_certificate,
)
from .slackgeom import FacetInequality, Polytope, SlackMatch, facets_bruteforce, match_up_to_scaling, slack_matrix

__version__ = "0.1.0"
