"""End-to-end reproduction of the 8 x 6 counterexample, as a claim ledger."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import checker, fixtures
from .bounds import (
    DEFAULT_EXHAUSTIVE_BITS,
    DEFAULT_RESTARTS,
    DEFAULT_SEED,
    SignPattern,
    enumerate_triangular,
    psd_rank_bounds,
    sqrt_matrix,
)
from .exactalg import DEFAULT_FACTOR_LIMIT, rad_rank, rat_rank
from .psdfact import factor_ranks, factorization_from_sqrt, verify_factorization
from .rationality import (
    alternating_product,
    analyze_irrationality,
    cycle_certificate,
    validate_certificate,
)
from .slackgeom import apply_match, facets_bruteforce, match_up_to_scaling, slack_matrix


@dataclass
class Claim:
    key: str
    description: str
    passed: bool
    detail: str


@dataclass
class Reproduction:
    claims: list[Claim] = field(default_factory=list)
    artifacts: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def add(self, key, description, passed, detail=""):
        self.claims.append(Claim(key, description, bool(passed), detail))


def _one_based(xs):
    return "{" + ",".join(str(x + 1) for x in sorted(xs)) + "}"


def reproduce_paper_example(
    exhaustive_bits: int = DEFAULT_EXHAUSTIVE_BITS,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
    limit: int = DEFAULT_FACTOR_LIMIT,
    figures_dir=None,
) -> Reproduction:
    """Vertices -> facets -> slack matrix -> match -> bounds -> certificate -> factorization."""
    out = Reproduction()
    target = fixtures.paper_matrix()
    poly = fixtures.paper_polytope()

    facets = facets_bruteforce(poly)
    tight_counts = [sum(1 for v in poly.vertices if f.slack(v) == 0) for f in facets]
    out.add("facets", "brute-force hull of the 8 vertices has 6 facets, each tight on 4 vertices",
            len(facets) == 6 and all(c == 4 for c in tight_counts),
            "; ".join(str(f) for f in facets))

    slack = slack_matrix(poly, facets)
    match = match_up_to_scaling(slack, target)
    scales = list(match.col_scales) if match else []
    ok = match is not None and sorted(scales) == [1, 1, 1, 1, 1, 2]
    out.add("slack-match", "slack matrix matches M after column scaling with one scale 2",
            ok, f"colScales={[str(s) for s in scales]}" if match else "no match")
    m = apply_match(slack, match) if match else target
    out.artifacts.update(facets=facets, slack=slack, match=match, matrix=m)
    out.add("matched-is-M", "matched slack matrix equals M entry for entry", m == target)

    out.add("rank-M", "M has usual rank 4", rat_rank(m) == 4, f"rank={rat_rank(m)}")

    bounds = psd_rank_bounds(m, exhaustive_bits, restarts, seed, workers, limit)
    search = bounds.search
    out.artifacts["bounds"] = bounds
    plus_rank = rad_rank(sqrt_matrix(m, SignPattern(tuple((c, 1) for c in m.support()))))
    out.add("sqrt-all-plus", "all-nonnegative entry-wise square root has rank 4",
            plus_rank == 4, f"rank={plus_rank}")
    low_ranks = sum(v for k, v in search.rank_counts.items() if k <= 3)
    out.add("sqrt-min", "minimum square-root rank over all sign classes is 4, none below",
            search.exhaustive and search.rank == 4 and low_ranks == 0,
            f"classes={search.examined} (2^{search.free_bits}), counts={search.rank_counts}")

    tri = [c for c in enumerate_triangular(m, 4)
           if c.key() == (fixtures.PAPER_TRIANGULAR_ROWS, fixtures.PAPER_TRIANGULAR_COLS)]
    ok = len(tri) == 1 and checker.check_triangular(m, tri[0].rows, tri[0].cols)
    out.add("triangular", "rows {1,5,7,8} x cols {1,2,5,6} is a triangular submatrix", ok,
            f"ordering rows={[r + 1 for r in tri[0].rows]} cols={[c + 1 for c in tri[0].cols]}" if tri else "")
    out.add("bounds", "triangular lower bound 4 meets square-root upper bound 4",
            bounds.lower == 4 and bounds.upper == 4 and bounds.tight,
            f"lower={bounds.lower} upper={bounds.upper}")

    analysis = analyze_irrationality(m, exhaustive_bits, restarts, seed, workers, limit, bounds=bounds)
    forced = analysis.forced
    ok = forced is not None and forced.covers(m.rows, m.cols)
    if ok:
        ok = all(checker.check_forced(m, i, "row", w.rows, w.cols, 4) for i, w in forced.row_witnesses.items())
        ok = ok and all(checker.check_forced(m, j, "col", w.rows, w.cols, 4)
                        for j, w in forced.col_witnesses.items())
    out.add("forcing", "every row and column is forced rank one by some 4x4 triangular submatrix", ok,
            f"rows={_one_based(forced.rows)} cols={_one_based(forced.cols)}" if forced else "")

    prod = alternating_product(m, fixtures.PAPER_CYCLE_ROWS, fixtures.PAPER_CYCLE_COLS)
    cyc = cycle_certificate(m, fixtures.PAPER_CYCLE_ROWS, fixtures.PAPER_CYCLE_COLS, limit)
    ok = cyc is not None and cyc.alternating_class == 2 and prod == Fraction(1, 2) and checker.check_cycle(
        m, cyc.rows, cyc.cols, cyc.alternating_class)
    out.add("cycle", "rows (1,2) x cols (4,6) has alternating product 1/2, square class 2", ok,
            f"product={prod}")

    cert = analysis.certificate
    ok = cert is not None and cert.obstruction.alternating_class == 2 and validate_certificate(m, cert)
    out.artifacts["certificate"] = cert
    out.add("certificate", "no rational psd factorization of size 4: certificate produced and validated", ok,
            analysis.reason + (f"; cycle rows={[r + 1 for r in cert.obstruction.rows]} "
                               f"cols={[c + 1 for c in cert.obstruction.cols]}" if cert else ""))

    fact = factorization_from_sqrt(sqrt_matrix(m, bounds.upper_pattern))
    report = verify_factorization(m, fact, 0)
    ranks = factor_ranks(fact)
    out.artifacts["factorization"] = fact
    out.add("factorization", "square root gives an exact size-4 factorization with 14 rank-one factors",
            fact.size == 4 and report.valid and ranks == [1] * 14,
            f"size={fact.size} arithmetic={fact.arithmetic} ranks={ranks}")

    if figures_dir is not None:
        from .plotting import plot_rank_histogram, plot_support

        figures_dir = Path(figures_dir)
        figures_dir.mkdir(parents=True, exist_ok=True)
        support_png = figures_dir / "matrix_witnesses.png"
        hist_png = figures_dir / "sqrt_rank_histogram.png"
        plot_support(m, support_png, tri[0] if tri else None, cyc,
                     title="triangular witness (shaded) and 2x2 cycle (outlined)")
        plot_rank_histogram(search.rank_counts, hist_png, lower=bounds.lower,
                            title=f"square-root ranks over 2^{search.free_bits} sign classes")
        out.artifacts["figures"] = [str(support_png), str(hist_png)]
    return out
