"""JSON encoding for matrices, factorizations, reports and certificates.

See ``docs/schema.md`` for the document layouts.  All indices are 0-based.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .bounds import BoundsReport, ForcedSet, SignPattern, TriangularCertificate
from .errors import SchemaError
from .exactalg import Matrix, RadScalar, as_rational
from .psdfact import PsdFactorization, VerificationReport
from .rationality import CycleCertificate, IrrationalityCertificate, alternating_product
from .slackgeom import FacetInequality, Polytope, SlackMatch


_WIDTH = 96


def _format(obj, indent: int) -> str:
    flat = json.dumps(obj)
    if not isinstance(obj, (list, dict)) or not obj or len(flat) + indent <= _WIDTH:
        return flat
    pad = " " * (indent + 2)
    if isinstance(obj, dict):
        items = [f"{pad}{json.dumps(k)}: {_format(v, indent + 2)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + " " * indent + "}"
    items = [pad + _format(v, indent + 2) for v in obj]
    return "[\n" + ",\n".join(items) + "\n" + " " * indent + "]"


def dumps(doc) -> str:
    """JSON with short containers kept on one line, so matrix rows stay readable."""
    return _format(doc, 0) + "\n"


def write(doc, path) -> None:
    Path(path).write_text(dumps(doc))


def read(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from exc


# scalars -------------------------------------------------------------------


def rational_to_json(x) -> str:
    x = as_rational(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def rational_from_json(v) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise SchemaError(f"expected a rational as integer or 'p/q' string, got {v!r}")
    try:
        return Fraction(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad rational {v!r}") from exc


def rad_to_json(x) -> list:
    x = x if isinstance(x, RadScalar) else RadScalar({1: x})
    return [{"coefficient": rational_to_json(c), "radicand": s} for s, c in sorted(x.terms.items())]


def rad_from_json(v) -> RadScalar:
    if not isinstance(v, list):
        raise SchemaError(f"expected a list of coefficient/radicand pairs, got {v!r}")
    terms = []
    for t in v:
        if not isinstance(t, dict) or set(t) != {"coefficient", "radicand"}:
            raise SchemaError(f"bad radical term {t!r}")
        s = t["radicand"]
        if isinstance(s, bool) or not isinstance(s, int) or s < 1:
            raise SchemaError(f"radicand must be a positive integer, got {s!r}")
        terms.append((s, rational_from_json(t["coefficient"])))
    return RadScalar(terms)


def scalar_from_json(v):
    return rad_from_json(v) if isinstance(v, list) else rational_from_json(v)


# matrices ------------------------------------------------------------------


def entries_to_json(m: Matrix, arithmetic: str = "rational") -> list:
    if arithmetic == "radical":
        enc = rad_to_json
    elif arithmetic == "float64":
        enc = float
    else:
        enc = rational_to_json
    return [[enc(x) for x in m.row(i)] for i in range(m.rows)]


def _matrix_from_entries(rows, conv) -> Matrix:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise SchemaError("matrix entries must be a list of rows")
    try:
        return Matrix.from_rows(rows, conv)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def matrix_to_json(m: Matrix) -> dict:
    radical = any(isinstance(x, RadScalar) and not x.is_rational() for x in m.entries)
    return {
        "type": "matrix",
        "rows": m.rows,
        "cols": m.cols,
        "entries": entries_to_json(m, "radical" if radical else "rational"),
    }


def matrix_from_json(doc) -> Matrix:
    """Rational (or radical) matrix document; also accepts any document with a ``matrix`` member."""
    if isinstance(doc, dict) and "entries" not in doc and "matrix" in doc:
        doc = doc["matrix"]
    if not isinstance(doc, dict) or "entries" not in doc:
        raise SchemaError("matrix document needs an 'entries' member")
    m = _matrix_from_entries(doc["entries"], scalar_from_json)
    for key, want in (("rows", m.rows), ("cols", m.cols)):
        if key in doc and doc[key] != want:
            raise SchemaError(f"'{key}' is {doc[key]} but entries give {want}")
    if all(not isinstance(x, RadScalar) or x.is_rational() for x in m.entries):
        m = m.map(as_rational)
    return m


# factorizations ------------------------------------------------------------


def factorization_to_json(f: PsdFactorization) -> dict:
    return {
        "type": "psd_factorization",
        "size": f.size,
        "arithmetic": f.arithmetic,
        "rowFactors": [entries_to_json(a, f.arithmetic) for a in f.row_factors],
        "colFactors": [entries_to_json(b, f.arithmetic) for b in f.col_factors],
    }


def factorization_from_json(doc) -> PsdFactorization:
    try:
        size, arithmetic = doc["size"], doc["arithmetic"]
        rows, cols = doc["rowFactors"], doc["colFactors"]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"factorization document missing {exc}") from exc
    if arithmetic == "float64":
        def conv(x):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise SchemaError(f"float64 entry expected, got {x!r}")
            return float(x)
    elif arithmetic in ("rational", "radical"):
        conv = scalar_from_json
    else:
        raise SchemaError(f"unknown arithmetic {arithmetic!r}")
    if isinstance(size, bool) or not isinstance(size, int) or size < 0:
        raise SchemaError(f"bad size {size!r}")
    return PsdFactorization(
        size,
        [_matrix_from_entries(a, conv) for a in rows],
        [_matrix_from_entries(b, conv) for b in cols],
        arithmetic,
    )


def verification_to_json(r: VerificationReport) -> dict:
    def enc(x):
        return float(x) if isinstance(x, float) else rad_to_json(x) if isinstance(x, RadScalar) else rational_to_json(x)

    return {
        "type": "verification_report",
        "valid": r.valid,
        "badCells": [{"row": i, "col": j, "expected": enc(w), "actual": enc(g)} for i, j, w, g in r.bad_cells],
        "nonPsd": [{"side": side, "index": idx} for side, idx in r.non_psd],
    }


# bounds --------------------------------------------------------------------


def triangular_to_json(c: TriangularCertificate) -> dict:
    return {"rows": list(c.rows), "cols": list(c.cols)}


def triangular_from_json(doc) -> TriangularCertificate:
    try:
        return TriangularCertificate(tuple(int(x) for x in doc["rows"]), tuple(int(x) for x in doc["cols"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad triangular certificate {doc!r}") from exc


def pattern_to_json(pattern: SignPattern, p: int, q: int) -> list:
    return pattern.sign_matrix(p, q)


def pattern_from_json(rows) -> SignPattern:
    try:
        return SignPattern(tuple(
            ((i, j), int(s)) for i, r in enumerate(rows) for j, s in enumerate(r) if s != 0
        ))
    except (TypeError, ValueError) as exc:
        raise SchemaError("bad sign pattern") from exc


def bounds_to_json(m: Matrix, b: BoundsReport) -> dict:
    s = b.search
    return {
        "type": "bounds_report",
        "matrix": matrix_to_json(m),
        "lowerBound": {"value": b.lower, "certificate": triangular_to_json(b.lower_certificate)},
        "upperBound": {
            "value": b.upper,
            "signPattern": pattern_to_json(b.upper_pattern, m.rows, m.cols),
            "exhaustive": s.exhaustive,
            "freeBits": s.free_bits,
            "examined": s.examined,
            "rankCounts": {str(k): v for k, v in s.rank_counts.items()},
        },
        "tight": b.tight,
    }


# certificates --------------------------------------------------------------


def forced_to_json(f: ForcedSet) -> dict:
    return {
        "rows": sorted(f.rows),
        "cols": sorted(f.cols),
        "rowWitnesses": {str(k): triangular_to_json(v) for k, v in sorted(f.row_witnesses.items())},
        "colWitnesses": {str(k): triangular_to_json(v) for k, v in sorted(f.col_witnesses.items())},
    }


def forced_from_json(doc) -> ForcedSet:
    try:
        rw = {int(k): triangular_from_json(v) for k, v in doc["rowWitnesses"].items()}
        cw = {int(k): triangular_from_json(v) for k, v in doc["colWitnesses"].items()}
        return ForcedSet(frozenset(int(x) for x in doc["rows"]), frozenset(int(x) for x in doc["cols"]), rw, cw)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise SchemaError(f"bad forced set: {exc}") from exc


def cycle_to_json(c: CycleCertificate, m: Matrix | None = None) -> dict:
    doc = {"rows": list(c.rows), "cols": list(c.cols), "alternatingClass": c.alternating_class}
    if m is not None:
        doc["alternatingProduct"] = rational_to_json(alternating_product(m, c.rows, c.cols))
    return doc


def cycle_from_json(doc) -> CycleCertificate:
    try:
        return CycleCertificate(
            tuple(int(x) for x in doc["rows"]), tuple(int(x) for x in doc["cols"]), int(doc["alternatingClass"])
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad cycle certificate: {exc}") from exc


def certificate_to_json(m: Matrix, c: IrrationalityCertificate) -> dict:
    doc = {
        "type": "irrationality_certificate",
        "matrix": matrix_to_json(m),
        "size": c.size,
        "forced": forced_to_json(c.forced),
        "obstruction": cycle_to_json(c.obstruction, m),
    }
    if c.lower_certificate is not None:
        doc["lowerCertificate"] = triangular_to_json(c.lower_certificate)
    if c.upper_pattern is not None:
        doc["upperPattern"] = pattern_to_json(c.upper_pattern, m.rows, m.cols)
    return doc


def certificate_from_json(doc) -> IrrationalityCertificate:
    if not isinstance(doc, dict) or doc.get("type") != "irrationality_certificate":
        raise SchemaError("not an irrationality certificate document")
    try:
        size = int(doc["size"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError("certificate needs an integer 'size'") from exc
    return IrrationalityCertificate(
        size,
        forced_from_json(doc.get("forced")),
        cycle_from_json(doc.get("obstruction")),
        triangular_from_json(doc["lowerCertificate"]) if "lowerCertificate" in doc else None,
        pattern_from_json(doc["upperPattern"]) if "upperPattern" in doc else None,
    )


# geometry ------------------------------------------------------------------


def polytope_from_json(doc) -> Polytope:
    try:
        d = doc["dimension"]
        verts = [tuple(rational_from_json(x) for x in v) for v in doc["vertices"]]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"polytope document missing {exc}") from exc
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise SchemaError(f"bad dimension {d!r}")
    return Polytope(d, tuple(verts))


def polytope_to_json(p: Polytope) -> dict:
    return {
        "type": "polytope",
        "dimension": p.dimension,
        "vertices": [[rational_to_json(x) for x in v] for v in p.vertices],
    }


def facet_to_json(f: FacetInequality) -> dict:
    return {"normal": [rational_to_json(x) for x in f.normal], "offset": rational_to_json(f.offset)}


def match_to_json(s: SlackMatch) -> dict:
    return {
        "rowPermutation": list(s.row_perm),
        "colPermutation": list(s.col_perm),
        "colScales": [rational_to_json(x) for x in s.col_scales],
    }
