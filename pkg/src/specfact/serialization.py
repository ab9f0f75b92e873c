"""JSON wire formats with rational-string coefficients.

Matrix files carry entries either as ``{"num": [...], "den": [...]}``
polynomial pairs or as ``{"lpoly": {"minpow": k, "coeffs": [...]}}``;
coefficients are strings like ``"3"`` or ``"-5/2"`` in ascending powers, so
exactness survives serialization.  Emission is canonical: sorted keys, fixed
separators, one trailing newline; parse -> serialize -> parse is the
identity.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .matrices import Matrix, as_ratfun
from .regions import RegionPair, RegionSpec
from .scalars import LPoly, Poly, RatFun

__all__ = [
    "matrix_to_obj",
    "matrix_from_obj",
    "dumps_canonical",
    "load_matrix",
    "save_matrix",
    "load_regions",
    "save_regions",
    "trace_to_obj",
]


class ParseError(ValueError):
    """Malformed input file."""


def _frac_str(c: Fraction) -> str:
    return str(c)


def _parse_coeffs(values) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(str(v)) for v in values)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad coefficient list {values!r}: {exc}") from exc


def _entry_to_obj(x) -> dict:
    if isinstance(x, LPoly):
        return {
            "lpoly": {
                "minpow": x.minpow,
                "coeffs": [_frac_str(c) for c in x.coeffs],
            }
        }
    f = as_ratfun(x)
    obj = {"num": [_frac_str(c) for c in f.num.coeffs]}
    if f.den != Poly.one():
        obj["den"] = [_frac_str(c) for c in f.den.coeffs]
    return obj


def _entry_from_obj(obj) -> object:
    if not isinstance(obj, dict):
        raise ParseError(f"matrix entry must be an object, got {obj!r}")
    if "lpoly" in obj:
        body = obj["lpoly"]
        if not isinstance(body, dict) or "minpow" not in body or "coeffs" not in body:
            raise ParseError(f"bad lpoly entry {obj!r}")
        return LPoly(int(body["minpow"]), _parse_coeffs(body["coeffs"]))
    if "num" not in obj:
        raise ParseError(f"matrix entry needs 'num' or 'lpoly': {obj!r}")
    num = Poly(_parse_coeffs(obj["num"]))
    den = Poly(_parse_coeffs(obj["den"])) if "den" in obj else Poly.one()
    if den.is_zero:
        raise ParseError("entry denominator is zero")
    return RatFun(num, den)


def matrix_to_obj(M: Matrix) -> dict:
    return {
        "rows": M.rows,
        "cols": M.cols,
        "entries": [
            [_entry_to_obj(M[i, j]) for j in range(M.cols)] for i in range(M.rows)
        ],
    }


def matrix_from_obj(obj) -> Matrix:
    if not isinstance(obj, dict):
        raise ParseError("matrix file must contain a JSON object")
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        entries = obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"matrix object missing rows/cols/entries: {exc}") from exc
    if len(entries) != rows or any(len(r) != cols for r in entries):
        raise ParseError("entry grid does not match declared shape")
    grid = tuple(tuple(_entry_from_obj(e) for e in row) for row in entries)
    return Matrix(rows, cols, grid)


def dumps_canonical(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def load_matrix(path) -> Matrix:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read matrix file {path}: {exc}") from exc
    return matrix_from_obj(obj)


def save_matrix(path, M: Matrix) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_canonical(matrix_to_obj(M)))


def load_regions(path) -> RegionPair:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read region file {path}: {exc}") from exc
    if not isinstance(obj, dict) or "poles" not in obj or "zeros" not in obj:
        raise ParseError("region file needs 'poles' and 'zeros' fragments")
    try:
        return RegionPair(
            poles=RegionSpec.from_json_fragment(obj["poles"]),
            zeros=RegionSpec.from_json_fragment(obj["zeros"]),
        )
    except (ValueError, TypeError) as exc:
        raise ParseError(f"bad region fragment: {exc}") from exc


def save_regions(path, pair: RegionPair) -> None:
    obj = {
        "poles": pair.poles.to_json_fragment(),
        "zeros": pair.zeros.to_json_fragment(),
    }
    with open(path, "w") as fh:
        fh.write(dumps_canonical(obj))


def trace_to_obj(trace) -> dict:
    """Reduction trace as JSON (kernel vectors, pivots, updates, the final
    constant and its split)."""
    return {
        "iterations": trace.iterations,
        "iteration_bound": trace.iteration_bound,
        "kernel_vectors": [[str(x) for x in v] for v in trace.kernel_vectors],
        "pivots": list(trace.pivots),
        "psi_sequence": [matrix_to_obj(m.to_lpoly()) for m in trace.psi_sequence],
        "omega_invs": [matrix_to_obj(m) for m in trace.omega_invs],
        "psi_final": matrix_to_obj(trace.psi_final),
        "ldl": {"L": matrix_to_obj(trace.L), "D": matrix_to_obj(trace.Dc)},
        "cholesky_factor": matrix_to_obj(trace.C),
        "cholesky_exact": trace.sqrt_exact,
    }
