"""Command-line front end.

Exit codes: 0 proven / passed, 1 inconclusive or failed check, 2 usage,
I/O or parse error.  JSON documents go to ``--out`` (stdout when omitted);
human-readable summaries go to stderr, except ``paper-example`` whose
tab-separated claim ledger is its stdout.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from . import fixtures, serialize
from .bounds import (
    DEFAULT_EXHAUSTIVE_BITS,
    DEFAULT_RESTARTS,
    DEFAULT_SEED,
    psd_rank_bounds,
    sqrt_matrix,
    sqrt_rank_min,
)
from .errors import DimensionMismatch, PsdRankError
from .exactalg import DEFAULT_FACTOR_LIMIT, as_rational
from .psdfact import DEFAULT_TOL, factor_ranks, factorization_from_sqrt, verify_factorization
from .rationality import analyze_irrationality, validate_certificate
from .reproduce import reproduce_paper_example
from .slackgeom import facets_bruteforce, slack_matrix


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: tuple
    out: str | None = None
    exhaustive_bits: int = DEFAULT_EXHAUSTIVE_BITS
    restarts: int = DEFAULT_RESTARTS
    factor_limit: int = DEFAULT_FACTOR_LIMIT
    tolerance: float = DEFAULT_TOL
    seed: int = DEFAULT_SEED
    workers: int = 1
    figures: str | None = None

    def __post_init__(self):
        for name in ("exhaustive_bits", "restarts", "factor_limit", "workers"):
            if getattr(self, name) <= 0:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        if self.tolerance < 0:
            raise UsageError("--tol must be nonnegative")
        if self.seed < 0:
            raise UsageError("--seed must be nonnegative")

    @property
    def search(self) -> dict:
        return dict(exhaustive_bits=self.exhaustive_bits, restarts=self.restarts,
                    seed=self.seed, workers=self.workers, limit=self.factor_limit)


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _emit(doc, cfg: RunConfig) -> None:
    if cfg.out:
        serialize.write(doc, cfg.out)
    else:
        sys.stdout.write(serialize.dumps(doc))


def load_matrix(arg: str):
    if arg in fixtures.MATRICES and not Path(arg).exists():
        return fixtures.MATRICES[arg]()
    return serialize.matrix_from_json(serialize.read(arg))


def load_polytope(arg: str):
    if arg in fixtures.POLYTOPES and not Path(arg).exists():
        return fixtures.POLYTOPES[arg]()
    return serialize.polytope_from_json(serialize.read(arg))


def _exact_rational(m):
    try:
        return m.map(as_rational)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"matrix must be rational: {exc}") from exc


def _nonnegative(m):
    m = _exact_rational(m)
    if any(x < 0 for x in m.entries):
        raise UsageError("matrix has negative entries")
    return m


# ---------------------------------------------------------------------------


def cmd_bounds(cfg: RunConfig) -> int:
    m = _nonnegative(load_matrix(cfg.inputs[0]))
    report = psd_rank_bounds(m, **cfg.search)
    _emit(serialize.bounds_to_json(m, report), cfg)
    kind = "exhaustive" if report.search.exhaustive else "heuristic"
    _say(f"psd rank bounds: lower {report.lower}, upper {report.upper} ({kind}), "
         f"{'tight' if report.tight else 'not tight'}")
    return 0


def cmd_irrationality(cfg: RunConfig) -> int:
    m = _nonnegative(load_matrix(cfg.inputs[0]))
    analysis = analyze_irrationality(m, **cfg.search)
    cert = analysis.certificate
    if cert is None:
        _emit({"type": "irrationality_result", "status": "inconclusive", "reason": analysis.reason}, cfg)
        _say(f"inconclusive: {analysis.reason}")
        return 1
    if not validate_certificate(m, cert):
        _say("internal error: produced certificate failed validation; nothing written")
        return 1
    _emit(serialize.certificate_to_json(m, cert), cfg)
    ob = cert.obstruction
    _say(f"certified: no rational psd factorization of size {cert.size}; "
         f"cycle rows {[r + 1 for r in ob.rows]} cols {[c + 1 for c in ob.cols]} "
         f"has square class {ob.alternating_class}")
    return 0


def cmd_validate(cfg: RunConfig) -> int:
    m = _exact_rational(load_matrix(cfg.inputs[0]))
    cert = serialize.certificate_from_json(serialize.read(cfg.inputs[1]))
    ok = validate_certificate(m, cert)
    _say("certificate valid" if ok else "certificate INVALID")
    return 0 if ok else 1


def cmd_verify(cfg: RunConfig) -> int:
    m = _exact_rational(load_matrix(cfg.inputs[0]))
    f = serialize.factorization_from_json(serialize.read(cfg.inputs[1]))
    report = verify_factorization(m, f, cfg.tolerance)
    _emit(serialize.verification_to_json(report), cfg)
    if report.valid:
        _say(f"valid psd factorization of size {f.size} ({f.arithmetic})")
        return 0
    for i, j, want, got in report.bad_cells:
        _say(f"cell ({i + 1},{j + 1}): expected {want}, got {got}")
    for side, idx in report.non_psd:
        _say(f"{side} factor {idx + 1} is not psd")
    return 1


def cmd_factorize(cfg: RunConfig) -> int:
    m = _nonnegative(load_matrix(cfg.inputs[0]))
    search = sqrt_rank_min(m, **cfg.search)
    f = factorization_from_sqrt(sqrt_matrix(m, search.pattern))
    if not verify_factorization(m, f, 0).valid:
        _say("internal error: constructed factorization failed verification")
        return 1
    _emit(serialize.factorization_to_json(f), cfg)
    ranks = factor_ranks(f)
    _say(f"size-{f.size} {f.arithmetic} factorization, {sum(r == 1 for r in ranks)} of {len(ranks)} factors rank one")
    return 0


def cmd_slack(cfg: RunConfig) -> int:
    poly = load_polytope(cfg.inputs[0])
    facets = facets_bruteforce(poly)
    s = slack_matrix(poly, facets)
    _emit({
        "type": "slack_matrix",
        "polytope": serialize.polytope_to_json(poly),
        "facets": [serialize.facet_to_json(f) for f in facets],
        "matrix": serialize.matrix_to_json(s),
    }, cfg)
    _say(f"{len(facets)} facets, {s.rows}x{s.cols} slack matrix")
    return 0


def cmd_paper_example(cfg: RunConfig) -> int:
    rep = reproduce_paper_example(figures_dir=cfg.figures, **cfg.search)
    print("claim\tstatus\tdescription\tdetail")
    for c in rep.claims:
        print(f"{c.key}\t{'PASS' if c.passed else 'FAIL'}\t{c.description}\t{c.detail}")
    if cfg.out:
        art = rep.artifacts
        m = art["matrix"]
        doc = {
            "type": "paper_example_report",
            "passed": rep.passed,
            "claims": [{"key": c.key, "description": c.description, "passed": c.passed, "detail": c.detail}
                       for c in rep.claims],
            "facets": [serialize.facet_to_json(f) for f in art["facets"]],
            "slackMatch": serialize.match_to_json(art["match"]) if art["match"] else None,
            "bounds": serialize.bounds_to_json(m, art["bounds"]),
            "certificate": serialize.certificate_to_json(m, art["certificate"]) if art["certificate"] else None,
            "factorization": serialize.factorization_to_json(art["factorization"]),
        }
        if "figures" in art:
            doc["figures"] = art["figures"]
        serialize.write(doc, cfg.out)
    _say(f"{sum(c.passed for c in rep.claims)}/{len(rep.claims)} claims pass")
    return 0 if rep.passed else 1


COMMANDS = {
    "bounds": (cmd_bounds, ["matrix"]),
    "irrationality": (cmd_irrationality, ["matrix"]),
    "validate": (cmd_validate, ["matrix", "certificate"]),
    "verify": (cmd_verify, ["matrix", "factorization"]),
    "factorize": (cmd_factorize, ["matrix"]),
    "slack": (cmd_slack, ["polytope"]),
    "paper-example": (cmd_paper_example, []),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--exhaustive-bits", type=int, default=DEFAULT_EXHAUSTIVE_BITS,
                        help="exhaustive sign search up to this many free signs (default %(default)s)")
    common.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS,
                        help="hill-climbing restarts beyond the exhaustive limit (default %(default)s)")
    common.add_argument("--factor-limit", type=int, default=DEFAULT_FACTOR_LIMIT,
                        help="trial-division bound for square classes (default %(default)s)")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL,
                        help="absolute tolerance for float64 factorizations (default %(default)s)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="heuristic search seed")
    common.add_argument("--workers", type=int, default=1, help="processes for the sign search")
    common.add_argument("--out", help="write the JSON document here instead of stdout")

    parser = argparse.ArgumentParser(prog="psdrank", description="Exact psd-rank bounds and certificates.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "bounds": "triangular lower bound and square-root upper bound",
        "irrationality": "certificate that no rational minimal-size factorization exists",
        "validate": "independently re-check an irrationality certificate",
        "verify": "check a psd factorization against a matrix",
        "factorize": "exact factorization from a minimum-rank square root",
        "slack": "facets and slack matrix of a polytope given by vertices",
        "paper-example": "reproduce the built-in 8x6 example end to end",
    }
    for name, (_, args) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=helps[name])
        for a in args:
            p.add_argument(a, help=f"{a} JSON file or built-in name")
        if name == "paper-example":
            p.add_argument("--figures", help="directory for PNG figures")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    func, names = COMMANDS[ns.command]
    try:
        cfg = RunConfig(
            command=ns.command,
            inputs=tuple(getattr(ns, n) for n in names),
            out=ns.out,
            exhaustive_bits=ns.exhaustive_bits,
            restarts=ns.restarts,
            factor_limit=ns.factor_limit,
            tolerance=ns.tol,
            seed=ns.seed,
            workers=ns.workers,
            figures=getattr(ns, "figures", None),
        )
        return func(cfg)
    except DimensionMismatch as exc:
        _say(f"error: dimension mismatch: {exc}")
        return 2
    except (UsageError, PsdRankError, OSError, ValueError, TypeError) as exc:
        _say(f"error: {type(exc).__name__}: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
