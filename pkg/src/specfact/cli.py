"""Command-line front end: JSON matrix I/O, factorization, canonical forms,
verification and degree queries.

Exit codes: 0 success (verify: all checks pass), 1 verification failure,
2 parse error, 3 not a spectrum (or invalid region/input combination),
4 numeric tolerance exceeded, 5 internal invariant violation.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .canonical import mcmillan_degree, smith_mcmillan
from .errors import (
    DegreeNotReduced,
    DivisionNotExact,
    NotASpectrum,
    NotPDOnCircle,
    NotPositiveDefinite,
    NumericFallbackExceededTolerance,
    OddOnCircleMultiplicity,
    OnCircleAmbiguous,
    OnCircleForbidden,
    RankZero,
    SpecFactError,
    UnresolvableCircleProximity,
)
from .factorize import FactorizationOptions, factorize, verify
from .matrices import Matrix
from .serialization import (
    ParseError,
    dumps_canonical,
    load_matrix,
    load_regions,
    matrix_to_obj,
    save_matrix,
    trace_to_obj,
)

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_PARSE = 2
EXIT_NOT_SPECTRUM = 3
EXIT_TOLERANCE = 4
EXIT_INTERNAL = 5

_INPUT_ERRORS = (
    NotASpectrum,
    RankZero,
    OnCircleForbidden,
    OnCircleAmbiguous,
    OddOnCircleMultiplicity,
)
_TOLERANCE_ERRORS = (NumericFallbackExceededTolerance, UnresolvableCircleProximity)
_INTERNAL_ERRORS = (
    DegreeNotReduced,
    DivisionNotExact,
    NotPDOnCircle,
    NotPositiveDefinite,
)


def _header() -> str:
    return f"# specfact {__version__}"


def _fmt_part(part) -> str:
    if part is None:
        return "none"
    bits = []
    if part.zero_power:
        bits.append(f"z^{part.zero_power}")
    for f, m in list(part.inside) + list(part.on_circle) + list(part.outside):
        bits.append(f"({f})^{m}" if m > 1 else f"({f})")
    return " * ".join(bits) if bits else "none"


def _report_lines(res, input_path, regions_path) -> list[str]:
    d = res.diagnostics
    wp = d["w_poles"]
    lines = [
        _header(),
        f"input: {input_path}",
        f"regions: {regions_path}",
        f"rank: {res.rank}",
        f"delta_M(Phi): {d['delta_phi']}",
        f"delta_M(W): {d['delta_w']}",
        f"stochastically minimal: {str(d['stochastically_minimal']).lower()}",
        f"exact: {str(res.exact).lower()}",
        f"split exact: {str(res.split_exact).lower()}",
        f"square roots exact: {str(res.sqrt_exact).lower()}",
        (
            "residual: 0 (exact identity)"
            if d["residual_exact"]
            else f"residual: {d['residual_sampled']:.3e} (sampled, not certified)"
        ),
        f"reduction iterations: {d['iterations']} (bound {d['iteration_bound']})",
        f"finite poles of W: {_fmt_part(wp['pole_part'])}",
        f"finite zeroes of W: {_fmt_part(wp['zero_part'])}",
        f"pole degree at infinity: {wp['pole_at_inf']}",
        f"zero degree at infinity: {wp['zero_at_inf']}",
        (
            "pole-region compliance: ok"
            if not d["pole_violations"]
            else "pole-region compliance: " + "; ".join(d["pole_violations"])
        ),
        (
            "zero-region compliance: ok"
            if not d["zero_violations"]
            else "zero-region compliance: " + "; ".join(d["zero_violations"])
        ),
        "positive semi-definiteness: sampled, not certified",
    ]
    return lines


def cmd_factorize(args) -> int:
    phi = load_matrix(args.input)
    regions = load_regions(args.regions)
    opts = FactorizationOptions(grid_size=args.grid, tol=args.tol)
    res = factorize(phi, regions, opts)
    save_matrix(args.output, res.W)
    if args.trace:
        with open(args.trace, "w") as fh:
            fh.write(dumps_canonical(trace_to_obj(res.trace)))
    lines = _report_lines(res, args.input, args.regions)
    text = "\n".join(lines) + "\n"
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_smith_mcmillan(args) -> int:
    M = load_matrix(args.input)
    smm = smith_mcmillan(M)
    obj = {
        "rank": smm.rank,
        "C": matrix_to_obj(smm.C),
        "D": matrix_to_obj(smm.D),
        "F": matrix_to_obj(smm.F),
        "eps": [[str(c) for c in p.coeffs] for p in smm.eps],
        "psi": [[str(c) for c in p.coeffs] for p in smm.psi],
    }
    with open(args.output, "w") as fh:
        fh.write(dumps_canonical(obj))
    sys.stdout.write(_header() + "\n" + f"rank: {smm.rank}\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    phi = load_matrix(args.phi)
    w = load_matrix(args.w)
    regions = load_regions(args.regions)
    report = verify(phi, w, regions, tol=args.tol, grid_size=args.grid)
    sys.stdout.write(_header() + "\n" + "\n".join(report.lines()) + "\n")
    return EXIT_OK if report.passed else EXIT_CHECKS_FAILED


def cmd_degree(args) -> int:
    M = load_matrix(args.input)
    delta = mcmillan_degree(M)
    sys.stdout.write(f"{delta}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="specfact",
        description=(
            "Exact spectral factorization of rational discrete-time spectral "
            "densities with selectable pole/zero regions."
        ),
    )
    ap.add_argument("--version", action="version", version=f"specfact {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    f = sub.add_parser("factorize", help="factor Phi = star(W) * W")
    f.add_argument("--input", required=True, help="spectrum matrix JSON")
    f.add_argument("--regions", required=True, help="region pair JSON")
    f.add_argument("--output", required=True, help="where to write W")
    f.add_argument("--report", help="write the text report here instead of stdout")
    f.add_argument("--trace", help="write the reduction trace JSON here")
    f.add_argument("--tol", type=float, default=1e-9)
    f.add_argument("--grid", type=int, default=512)
    f.set_defaults(fn=cmd_factorize)

    s = sub.add_parser("smith-mcmillan", help="Smith-McMillan decomposition")
    s.add_argument("--input", required=True)
    s.add_argument("--output", required=True)
    s.set_defaults(fn=cmd_smith_mcmillan)

    v = sub.add_parser("verify", help="check a claimed factorization")
    v.add_argument("--phi", required=True)
    v.add_argument("--w", required=True)
    v.add_argument("--regions", required=True)
    v.add_argument("--tol", type=float, default=1e-9)
    v.add_argument("--grid", type=int, default=512)
    v.set_defaults(fn=cmd_verify)

    g = sub.add_parser("degree", help="print the McMillan degree")
    g.add_argument("--input", required=True)
    g.set_defaults(fn=cmd_degree)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except _INPUT_ERRORS as exc:
        sys.stderr.write(f"input rejected: {exc}\n")
        return EXIT_NOT_SPECTRUM
    except _TOLERANCE_ERRORS as exc:
        sys.stderr.write(f"numeric tolerance exceeded: {exc}\n")
        return EXIT_TOLERANCE
    except (_INTERNAL_ERRORS, AssertionError, SpecFactError) as exc:
        sys.stderr.write(f"internal invariant violation: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
