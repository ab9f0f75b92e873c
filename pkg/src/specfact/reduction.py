"""Construction of the para-Hermitian L-unimodular matrix Psi and its exact
factorization Psi = star(P) * P with P unimodular polynomial.

The degree-reduction loop repeatedly kills the singular direction of the
highest-column-degree coefficient matrix with a unimodular column operation,
strictly lowering one column degree per step, until a constant positive
definite matrix remains; that constant is split by an exact LDL^T followed by
diagonal square roots (exact whenever the pivots are rational squares).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .canonical import SmithMcMillanDecomposition
from .errors import (
    DegreeNotReduced,
    DivisionNotExact,
    NotPDOnCircle,
    NotPositiveDefinite,
)
from .matrices import (
    Matrix,
    as_lpoly,
    as_ratfun,
    hc_matrix,
    is_L_unimodular,
    is_para_hermitian,
    is_spectrum,
)
from .regions import SplitDecomposition
from .scalars import LPoly, Poly, RatFun

__all__ = [
    "ReductionTrace",
    "build_psi",
    "reduce_step",
    "run_reduction",
    "ldl_and_sqrt",
    "assemble_P",
    "assemble_Q",
]


# ---------------------------------------------------------------------------
# Step 3: Psi
# ---------------------------------------------------------------------------

def build_psi(smm: SmithMcMillanDecomposition, split: SplitDecomposition,
              grid_size: int = 512, tol: float = 1e-9) -> Matrix:
    """Psi = star(Sigma) * D+ * Xi * D+^-1 with D+ = Theta * Lambda and
    Xi = star(C) * F^-R.

    Every entry must come out Laurent-polynomial (DivisionNotExact
    otherwise); the result is validated para-Hermitian with constant
    determinant and positive definite on the sampled circle.
    """
    r = smm.rank
    xi = smm.C.star() * smm.F_rinv
    dplus = [
        as_ratfun(split.Theta[i, i]) * as_ratfun(split.Lambda[i, i]) for i in range(r)
    ]
    sigma_star = [as_lpoly(split.Sigma[i, i]).star() for i in range(r)]
    rows = []
    for i in range(r):
        row = []
        for j in range(r):
            val = sigma_star[i] * dplus[i] * as_ratfun(xi[i, j]) / dplus[j]
            if not val.is_lpoly:
                raise DivisionNotExact(
                    f"Psi entry ({i},{j}) = {val} is not Laurent-polynomial"
                )
            row.append(val.to_lpoly())
        rows.append(row)
    psi = Matrix.from_rows(rows)
    if not is_para_hermitian(psi):
        raise DivisionNotExact("Psi is not para-Hermitian")
    det = as_lpoly(psi.det())
    if det.is_zero or not det.is_constant:
        raise DivisionNotExact(f"det Psi = {det} is not a nonzero constant")
    ok, report = is_spectrum(psi, grid_size=grid_size, tol=tol)
    if not ok:
        raise NotPDOnCircle(
            f"Psi fails the sampled circle positivity check: min eigenvalue "
            f"{report.min_eigenvalue:.3e}"
        )
    return psi


# ---------------------------------------------------------------------------
# Step 4: degree reduction
# ---------------------------------------------------------------------------

def _column_max_degrees(psi: Matrix) -> list[int]:
    degs = []
    for j in range(psi.cols):
        col = [as_lpoly(x) for x in psi.col(j)]
        nz = [x for x in col if not x.is_zero]
        if not nz:
            raise DegreeNotReduced(f"column {j} of Psi is identically zero")
        degs.append(max(x.max_degree for x in nz))
    return degs


def _kernel_vector(M: Matrix, choice: str = "first") -> list[Fraction] | None:
    """Exact kernel vector of a constant matrix from its reduced row-echelon
    form, as a primitive integer vector with positive first nonzero entry.

    `choice` selects the basis vector of the first or last free column; None
    when the matrix is nonsingular.
    """
    n = M.rows
    grid = [[Fraction(x) for x in row] for row in M.entries]
    pivots = []
    prow = 0
    for j in range(n):
        piv = next((i for i in range(prow, n) if grid[i][j] != 0), None)
        if piv is None:
            continue
        grid[prow], grid[piv] = grid[piv], grid[prow]
        pv = grid[prow][j]
        grid[prow] = [a / pv for a in grid[prow]]
        for i in range(n):
            if i != prow and grid[i][j] != 0:
                f = grid[i][j]
                grid[i] = [a - f * b for a, b in zip(grid[i], grid[prow])]
        pivots.append(j)
        prow += 1
    free = [j for j in range(n) if j not in pivots]
    if not free:
        return None
    jf = free[0] if choice == "first" else free[-1]
    v = [Fraction(0)] * n
    v[jf] = Fraction(1)
    for row_idx, jp in enumerate(pivots):
        v[jp] = -grid[row_idx][jf]
    lcm = 1
    for x in v:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    ints = [x // g for x in ints]
    first = next(x for x in ints if x != 0)
    if first < 0:
        ints = [-x for x in ints]
    return [Fraction(x) for x in ints]


@dataclass(frozen=True)
class ReductionStep:
    kernel_vector: tuple[Fraction, ...]
    pivot: int
    omega: Matrix
    omega_inv: Matrix
    psi_next: Matrix


def reduce_step(psi: Matrix, choice: str = "first"):
    """One degree-reduction step.

    Returns the constant matrix when the highest-column-degree coefficient
    matrix is nonsingular; otherwise a ReductionStep with the kernel vector,
    the pivot index (largest index among active columns of maximal degree,
    which reproduces the reference trace), the unimodular update and the
    reduced matrix.
    """
    r = psi.rows
    K = _column_max_degrees(psi)
    hc = hc_matrix(psi)
    v = _kernel_vector(hc, choice)
    if v is None:
        const = psi.map(lambda x: as_lpoly(x))
        for i in range(r):
            for j in range(r):
                if not as_lpoly(const[i, j]).is_constant:
                    raise DegreeNotReduced(
                        "nonsingular highest-degree matrix but Psi is not "
                        "constant; input was not PD on the circle"
                    )
        return psi.map(lambda x: as_lpoly(x).constant_value())
    active = [i for i in range(r) if v[i] != 0]
    kmax = max(K[i] for i in active)
    p = max(i for i in active if K[i] == kmax)
    omega_inv_rows = []
    omega_rows = []
    for i in range(r):
        oi_row = [Poly.one() if i == j else Poly.zero() for j in range(r)]
        o_row = list(oi_row)
        if i != p:
            coef = v[i] / v[p]
            if coef != 0:
                mono = Poly.monomial(K[p] - K[i], coef)
                oi_row[p] = mono
                o_row[p] = -mono
        omega_inv_rows.append(oi_row)
        omega_rows.append(o_row)
    omega_inv = Matrix.from_rows(omega_inv_rows)
    omega = Matrix.from_rows(omega_rows)
    psi_next = omega_inv.star() * psi * omega_inv
    psi_next = psi_next.map(as_lpoly)

    K_next = _column_max_degrees(psi_next)
    if K_next[p] >= K[p]:
        raise DegreeNotReduced(
            f"pivot column {p} max-degree did not decrease ({K[p]} -> {K_next[p]})"
        )
    for i in range(r):
        if i != p and K_next[i] > K[i]:
            raise DegreeNotReduced(
                f"column {i} max-degree increased ({K[i]} -> {K_next[i]})"
            )
    return ReductionStep(tuple(v), p, omega, omega_inv, psi_next)


@dataclass
class ReductionTrace:
    """Audit trail of the degree-reduction loop."""

    psi_sequence: list[Matrix]
    kernel_vectors: list[tuple[Fraction, ...]]
    pivots: list[int]
    omegas: list[Matrix]
    omega_invs: list[Matrix]
    psi_final: Matrix
    L: Matrix
    Dc: Matrix
    C: Matrix
    sqrt_exact: bool
    iteration_bound: int

    @property
    def iterations(self) -> int:
        return len(self.omegas)


def run_reduction(psi: Matrix, choice: str = "first") -> ReductionTrace:
    """Iterate reduce_step to a constant matrix, then split it.

    Per-step assertions (strict pivot-column decrease, no other increase,
    determinant conservation, para-Hermitian symmetry) are always on; the
    iteration count is bounded by the initial sum of column degrees.
    """
    if not is_para_hermitian(psi):
        raise DegreeNotReduced("reduction input is not para-Hermitian")
    if not is_L_unimodular(psi):
        raise DegreeNotReduced("reduction input is not L-unimodular")
    det0 = as_lpoly(psi.det())
    bound = sum(max(k, 0) for k in _column_max_degrees(psi)) + 1
    psis = [psi]
    vs, ps, oms, oinvs = [], [], [], []
    cur = psi
    for _ in range(bound + 1):
        out = reduce_step(cur, choice)
        if not isinstance(out, ReductionStep):
            const = out
            break
        vs.append(out.kernel_vector)
        ps.append(out.pivot)
        oms.append(out.omega)
        oinvs.append(out.omega_inv)
        cur = out.psi_next
        psis.append(cur)
        if as_lpoly(cur.det()) != det0:
            raise DegreeNotReduced("determinant changed during reduction")
        if not is_para_hermitian(cur):
            raise DegreeNotReduced("para-Hermitian symmetry lost during reduction")
    else:
        raise DegreeNotReduced(
            f"no constant matrix after {bound} iterations; giving up"
        )
    if len(oms) > bound - 1:
        raise DegreeNotReduced("iteration bound exceeded")
    L, Dc, C, exact = ldl_and_sqrt(const)
    return ReductionTrace(
        psi_sequence=psis,
        kernel_vectors=vs,
        pivots=ps,
        omegas=oms,
        omega_invs=oinvs,
        psi_final=const,
        L=L,
        Dc=Dc,
        C=C,
        sqrt_exact=exact,
        iteration_bound=bound,
    )


# ---------------------------------------------------------------------------
# Constant factorization
# ---------------------------------------------------------------------------

def _sqrt_fraction(x: Fraction, digits: int = 40) -> tuple[Fraction, bool]:
    """Exact square root when x is a rational square; otherwise a rational
    approximation accurate to ~10^-digits."""
    n, d = x.numerator, x.denominator
    sn, sd = math.isqrt(n), math.isqrt(d)
    if sn * sn == n and sd * sd == d:
        return Fraction(sn, sd), True
    scale = 10 ** digits
    approx = Fraction(math.isqrt(n * d * scale * scale), d * scale)
    return approx, False


def ldl_and_sqrt(psi_final: Matrix) -> tuple[Matrix, Matrix, Matrix, bool]:
    """Exact LDL^T of a constant symmetric positive definite matrix, plus
    C = sqrt(Dc) * L^T.

    L is unit lower triangular and Dc positive diagonal, both exactly
    rational; C is exact iff every pivot is a rational square, otherwise its
    square roots are high-precision rational approximations and the returned
    flag is False.
    """
    r = psi_final.rows
    A = [[Fraction(psi_final[i, j]) for j in range(r)] for i in range(r)]
    for i in range(r):
        for j in range(i):
            if A[i][j] != A[j][i]:
                raise NotPositiveDefinite("matrix is not symmetric")
    L = [[Fraction(1) if i == j else Fraction(0) for j in range(r)] for i in range(r)]
    d = [Fraction(0)] * r
    for j in range(r):
        s = A[j][j] - sum(L[j][k] * L[j][k] * d[k] for k in range(j))
        if s <= 0:
            raise NotPositiveDefinite(
                f"leading principal minor {j + 1} is not positive"
            )
        d[j] = s
        for i in range(j + 1, r):
            L[i][j] = (A[i][j] - sum(L[i][k] * L[j][k] * d[k] for k in range(j))) / d[j]
    Lm = Matrix.from_rows(L)
    Dm = Matrix.diag(d)
    exact = True
    sqrts = []
    for x in d:
        s, ex = _sqrt_fraction(x)
        sqrts.append(s)
        exact = exact and ex
    C = Matrix.diag(sqrts) * Lm.transpose()
    return Lm, Dm, C, exact


# ---------------------------------------------------------------------------
# Assembly
# ---------------------------------------------------------------------------

def assemble_P(trace: ReductionTrace) -> Matrix:
    """P = C * Omega_{h-1} * ... * Omega_1 (unimodular polynomial)."""
    acc = trace.C
    for om in reversed(trace.omegas):
        acc = acc * om
    return acc


def assemble_Q(trace: ReductionTrace) -> Matrix:
    """Exact certificate factor Q = L^T * Omega_{h-1} * ... * Omega_1;
    star(Q) * Dc * Q equals the original Psi exactly regardless of whether
    the square roots were exact."""
    acc = trace.L.transpose()
    for om in reversed(trace.omegas):
        acc = acc * om
    return acc
