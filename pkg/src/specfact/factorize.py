"""End-to-end spectral factorization Phi = star(W) * W with region-selected
pole/zero placement, stochastic minimality, verification, and the standard
corollaries (para-unitary parametrization, dual factorization, Laurent
specialization).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .canonical import (
    SmithMcMillanDecomposition,
    mcmillan_degree,
    smith_mcmillan,
    structural_indices,
)
from .errors import (
    NotASpectrum,
    NotParaUnitary,
    NumericFallbackExceededTolerance,
    OnCircleForbidden,
    RankZero,
)
from .matrices import (
    Matrix,
    as_lpoly,
    as_ratfun,
    evaluate_grid,
    is_para_unitary,
    is_spectrum,
)
from .reduction import ReductionTrace, assemble_P, assemble_Q, build_psi, run_reduction
from .regions import (
    RegionPair,
    RegionSpec,
    Side,
    SplitDecomposition,
    classify_roots,
    membership,
    split_diagonal,
)
from .scalars import INF, Poly, RatFun

__all__ = [
    "FactorizationOptions",
    "SpectralFactorization",
    "factorize",
    "factorize_youla",
    "VerificationReport",
    "verify",
    "orthogonal_relator",
    "compose_parametrization",
    "dual_factorize",
    "lpoly_specialization_check",
    "canonical_right_inverse",
]


@dataclass(frozen=True)
class FactorizationOptions:
    grid_size: int = 512
    tol: float = 1e-9
    kernel_choice: str = "first"
    check_input: bool = True


@dataclass
class SpectralFactorization:
    """Result record: the factor, its building blocks, the reduction trace,
    the exact certificate (Q, Dc), and diagnostics."""

    W: Matrix
    P: Matrix
    Dplus: Matrix
    regions: RegionPair
    smm: SmithMcMillanDecomposition
    split: SplitDecomposition
    trace: ReductionTrace
    Q: Matrix
    Dc: Matrix
    exact: bool
    split_exact: bool
    sqrt_exact: bool
    diagnostics: dict = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return self.W.rows


# ---------------------------------------------------------------------------
# Pole/zero bookkeeping
# ---------------------------------------------------------------------------

def _pole_zero_report(smm: SmithMcMillanDecomposition, tol: float) -> dict:
    """Finite pole/zero factor lists (from psi_1 and eps_r) plus the
    structural indices at infinity."""
    out: dict = {}
    psi1 = smm.psi[0]
    eps_r = smm.eps[smm.rank - 1]
    out["pole_part"] = classify_roots(psi1, tol) if psi1.degree > 0 else None
    out["zero_part"] = classify_roots(eps_r, tol) if eps_r.degree > 0 else None
    inf_idx = structural_indices(smm, INF).indices
    out["inf_indices"] = inf_idx
    out["pole_at_inf"] = sum(-v for v in inf_idx if v < 0)
    out["zero_at_inf"] = sum(v for v in inf_idx if v > 0)
    return out


def _compliance_violations(report: dict, spec: RegionSpec, kind: str) -> list[str]:
    """Pole (or zero) locations of W that land inside the forbidden region."""
    part = report["pole_part" if kind == "pole" else "zero_part"]
    violations = []
    if part is not None:
        if part.zero_power and spec.contains_zero:
            violations.append(f"{kind} at 0 lies in the region")
        for f, _m in list(part.inside) + list(part.outside):
            if membership(spec, f) is Side.IN_REGION:
                violations.append(f"{kind} orbit {f} lies in the region")
        if part.on_circle and spec.closed_circle:
            violations.append(f"on-circle {kind} with a closed-circle region")
    at_inf = report["pole_at_inf" if kind == "pole" else "zero_at_inf"]
    if at_inf and spec.contains_infinity:
        violations.append(f"{kind} at infinity lies in the region")
    return violations


def _sampled_residual(Phi: Matrix, W: Matrix, grid_size: int) -> float:
    omegas = 2.0 * np.pi * np.arange(grid_size) / grid_size
    points = np.exp(1j * omegas)
    pv, pd = evaluate_grid(Phi, points)
    wv, wd = evaluate_grid(W, points)
    mask = pd & wd
    if not mask.any():
        return float("nan")
    res = pv[mask] - np.einsum("kij,kil->kjl", wv[mask].conj(), wv[mask])
    return float(np.max(np.abs(res)))


def _circle_analytic(smm: SmithMcMillanDecomposition, tol: float) -> bool:
    psi1 = smm.psi[0]
    if psi1.degree == 0:
        return True
    return classify_roots(psi1, tol).poly_on() == Poly.one()


def _circle_constant_rank(smm: SmithMcMillanDecomposition, tol: float) -> bool:
    eps_r = smm.eps[smm.rank - 1]
    if eps_r.degree == 0:
        return True
    return classify_roots(eps_r, tol).poly_on() == Poly.one()


# ---------------------------------------------------------------------------
# Factorization
# ---------------------------------------------------------------------------

def factorize(
    Phi: Matrix,
    regions: RegionPair,
    options: FactorizationOptions = FactorizationOptions(),
    _smm: SmithMcMillanDecomposition | None = None,
) -> SpectralFactorization:
    """Factor a spectrum as Phi = star(W) * W with poles of W outside the
    pole region and zeroes of W outside the zero region.

    W = P * D+ * F with P unimodular, D+ = Theta * Lambda, and F from the
    Smith-McMillan decomposition; the result is stochastically minimal.
    """
    if not Phi.is_square:
        raise NotASpectrum("a spectrum must be square")
    R = Phi.to_ratfun()
    if R.normal_rank() == 0:
        raise RankZero("the zero spectrum admits no full-row-rank factor")
    if options.check_input:
        ok, report = is_spectrum(R, options.grid_size, options.tol)
        if not ok:
            detail = (
                "not para-Hermitian"
                if not report.para_hermitian
                else f"min sampled eigenvalue {report.min_eigenvalue:.3e}"
            )
            raise NotASpectrum(f"input is not a spectrum: {detail}")
    smm = _smm if _smm is not None else smith_mcmillan(R)
    delta_phi = mcmillan_degree(smm)
    if delta_phi % 2:
        raise NotASpectrum(
            f"McMillan degree {delta_phi} is odd; spectra factorize with "
            "even degree only"
        )
    if regions.poles.closed_circle and not _circle_analytic(smm, options.tol):
        raise OnCircleForbidden(
            "pole region includes the circle but the spectrum has poles on it"
        )
    if regions.zeros.closed_circle and not (
        _circle_analytic(smm, options.tol) and _circle_constant_rank(smm, options.tol)
    ):
        raise OnCircleForbidden(
            "zero region includes the circle but the spectrum is not "
            "circle-analytic with constant circle rank"
        )

    split = split_diagonal(smm.D, regions.poles, regions.zeros, options.tol)
    psi = build_psi(smm, split, options.grid_size, options.tol)
    trace = run_reduction(psi, options.kernel_choice)
    P = assemble_P(trace)
    Q = assemble_Q(trace)
    dplus = Matrix.diag(
        [
            as_ratfun(split.Theta[i, i]) * as_ratfun(split.Lambda[i, i])
            for i in range(smm.rank)
        ]
    )
    W = (P * dplus * smm.F).to_ratfun()

    split_exact = not split.approximate
    exact = split_exact and trace.sqrt_exact
    diagnostics: dict = {
        "delta_phi": delta_phi,
        "iterations": trace.iterations,
        "iteration_bound": trace.iteration_bound,
    }

    if exact:
        if R != W.star() * W:
            raise AssertionError("exact factorization identity failed")
        diagnostics["residual_exact"] = True
        diagnostics["residual_sampled"] = 0.0
    else:
        res = _sampled_residual(R, W, options.grid_size)
        diagnostics["residual_exact"] = False
        diagnostics["residual_sampled"] = res
        if not res <= options.tol:
            raise NumericFallbackExceededTolerance(
                f"sampled residual {res:.3e} exceeds tolerance {options.tol:.1e}"
            )
    if split_exact:
        M = (Q * dplus * smm.F).to_ratfun()
        if R != M.star() * trace.Dc * M:
            raise AssertionError("exact certificate identity failed")
        diagnostics["certificate_exact"] = True
    else:
        diagnostics["certificate_exact"] = False

    smm_w = smith_mcmillan(W)
    delta_w = mcmillan_degree(smm_w)
    diagnostics["delta_w"] = delta_w
    diagnostics["stochastically_minimal"] = 2 * delta_w == delta_phi
    wreport = _pole_zero_report(smm_w, options.tol)
    diagnostics["w_poles"] = wreport
    diagnostics["pole_violations"] = _compliance_violations(
        wreport, regions.poles, "pole"
    )
    diagnostics["zero_violations"] = _compliance_violations(
        wreport, regions.zeros, "zero"
    )

    return SpectralFactorization(
        W=W,
        P=P,
        Dplus=dplus,
        regions=regions,
        smm=smm,
        split=split,
        trace=trace,
        Q=Q,
        Dc=trace.Dc,
        exact=exact,
        split_exact=split_exact,
        sqrt_exact=trace.sqrt_exact,
        diagnostics=diagnostics,
    )


def factorize_youla(
    Phi: Matrix, options: FactorizationOptions = FactorizationOptions()
) -> SpectralFactorization:
    """Outer-type factorization: both regions default to the open exterior
    of the unit disk, upgraded to include the circle when the spectrum is
    circle-analytic (pole region) and additionally of constant circle rank
    (zero region)."""
    R = Phi.to_ratfun()
    if R.normal_rank() == 0:
        raise RankZero("the zero spectrum admits no full-row-rank factor")
    if options.check_input:
        ok, report = is_spectrum(R, options.grid_size, options.tol)
        if not ok:
            detail = (
                "not para-Hermitian"
                if not report.para_hermitian
                else f"min sampled eigenvalue {report.min_eigenvalue:.3e}"
            )
            raise NotASpectrum(f"input is not a spectrum: {detail}")
    smm = smith_mcmillan(R)
    analytic = _circle_analytic(smm, options.tol)
    const_rank = _circle_constant_rank(smm, options.tol)
    pole_region = RegionSpec.outside(closed=analytic)
    zero_region = RegionSpec.outside(closed=analytic and const_rank)
    regions = RegionPair(pole_region, zero_region)
    inner = FactorizationOptions(
        grid_size=options.grid_size,
        tol=options.tol,
        kernel_choice=options.kernel_choice,
        check_input=False,
    )
    return factorize(Phi, regions, inner, _smm=smm)


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VerificationCheck:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[VerificationCheck, ...]
    delta_phi: int
    delta_w: int

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        out = [
            f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}"
            for c in self.checks
        ]
        out.append(f"δ_M(Φ)={self.delta_phi}, δ_M(W)={self.delta_w}")
        return out


def verify(
    Phi: Matrix,
    W: Matrix,
    regions: RegionPair,
    tol: float = 1e-9,
    grid_size: int = 512,
) -> VerificationReport:
    """Re-derive the factorization postconditions as independent checks:
    residual, pole/zero region compliance, and the 2:1 McMillan degree
    relation."""
    R = Phi.to_ratfun()
    Wr = W.to_ratfun()
    checks = []

    diff = R - Wr.star() * Wr
    residual_exact = diff.is_zero
    res = 0.0 if residual_exact else _sampled_residual(R, Wr, grid_size)
    checks.append(
        VerificationCheck(
            "residual",
            residual_exact or res <= tol,
            "exactly zero" if residual_exact else f"max sampled residual {res:.3e}",
        )
    )

    smm_w = smith_mcmillan(Wr)
    wreport = _pole_zero_report(smm_w, tol)
    pv = _compliance_violations(wreport, regions.poles, "pole")
    zv = _compliance_violations(wreport, regions.zeros, "zero")
    checks.append(
        VerificationCheck(
            "pole region", not pv, "; ".join(pv) if pv else "poles avoid the pole region"
        )
    )
    checks.append(
        VerificationCheck(
            "zero region", not zv, "; ".join(zv) if zv else "zeroes avoid the zero region"
        )
    )

    delta_phi = mcmillan_degree(R)
    delta_w = mcmillan_degree(smm_w)
    checks.append(
        VerificationCheck(
            "stochastic minimality",
            2 * delta_w == delta_phi,
            f"2*{delta_w} vs {delta_phi}",
        )
    )
    return VerificationReport(tuple(checks), delta_phi, delta_w)


# ---------------------------------------------------------------------------
# Relations between factors
# ---------------------------------------------------------------------------

def canonical_right_inverse(W: Matrix) -> Matrix:
    """Right inverse whose poles are exactly the zeroes of W
    (F^-R * D^-1 * C^-1 from the Smith-McMillan decomposition)."""
    smm = smith_mcmillan(W.to_ratfun())
    if smm.rank != W.rows:
        raise ValueError("right inverse requires full row rank")
    dinv = Matrix.diag([RatFun.one() / as_ratfun(smm.D[i, i]) for i in range(smm.rank)])
    return smm.F_rinv * dinv * smm.C.inverse()


def orthogonal_relator(W1: Matrix, W2: Matrix, tol: float = 1e-12):
    """Constant orthogonal T with W1 = T * W2, or None when the factors are
    not so related."""
    if (W1.rows, W1.cols) != (W2.rows, W2.cols):
        return None
    T = (W1.to_ratfun() * canonical_right_inverse(W2)).to_ratfun()
    r = T.rows
    if all(as_ratfun(T[i, j]).is_constant for i in range(r) for j in range(r)):
        Tc = T.map(lambda f: as_ratfun(f).constant_value())
        if Tc.transpose() * Tc == Matrix.identity(r):
            return Tc
        prod = Tc.transpose() * Tc
        dev = max(
            abs(float(Fraction(prod[i, j]) - (1 if i == j else 0)))
            for i in range(r)
            for j in range(r)
        )
        return Tc if dev <= tol else None
    # numeric fallback: sample for constancy and orthogonality within tol
    points = np.exp(1j * 2.0 * np.pi * (np.arange(16) + 0.37) / 16)
    vals, defined = evaluate_grid(T, points)
    if not defined.all():
        return None
    mean = vals.mean(axis=0)
    if np.max(np.abs(vals - mean)) > tol or np.max(np.abs(mean.imag)) > tol:
        return None
    Tc = mean.real
    if np.max(np.abs(Tc.T @ Tc - np.eye(r))) > tol:
        return None
    return Matrix.from_rows([[Fraction(float(x)) for x in row] for row in Tc])


def compose_parametrization(W: Matrix, V: Matrix) -> Matrix:
    """L = V * [I_r; 0] * W for a para-unitary V; star(L) * L equals
    star(W) * W exactly."""
    if not is_para_unitary(V):
        raise NotParaUnitary("V must be para-unitary")
    r = W.rows
    if V.cols < r:
        raise ValueError("V must have at least rank(W) columns")
    return (V.submatrix(range(V.rows), range(r)) * W).to_ratfun()


def dual_factorize(
    Phi: Matrix,
    regions: RegionPair,
    options: FactorizationOptions = FactorizationOptions(),
) -> SpectralFactorization:
    """Factorization of the dual form Phi = W * star(W), obtained by
    factorizing the transposed spectrum and transposing back."""
    res = factorize(Phi.transpose(), regions, options)
    res.W = res.W.transpose()
    res.diagnostics["dual"] = True
    return res


def lpoly_specialization_check(Phi: Matrix, result: SpectralFactorization) -> bool:
    """For Laurent-polynomial spectra: the factor is polynomial in 1/z when
    the pole region contains infinity, polynomial in z when it contains 0."""
    Phi.to_lpoly()  # raises if the input is not Laurent-polynomial
    W = result.W.to_ratfun()
    entries = [as_ratfun(W[i, j]) for i in range(W.rows) for j in range(W.cols)]
    lp = []
    for f in entries:
        if not f.is_lpoly:
            return False
        lp.append(f.to_lpoly())
    if result.regions.poles.contains_infinity:
        return all(e.is_zero or e.max_degree <= 0 for e in lp)
    return all(e.is_zero or e.min_degree >= 0 for e in lp)
