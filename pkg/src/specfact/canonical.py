"""Smith form of polynomial matrices with unimodular witnesses, the
Smith-McMillan decomposition of rational matrices, structural indices
(including the point at infinity), McMillan degree, and one-sided polynomial
inverses of unimodular matrices.

The Smith-McMillan result is standardized on the shape G = C * D * F with C
(m x r) and F (r x n) unimodular polynomial matrices and D an r x r canonic
diagonal; the square Smith witnesses U, V and their inverses remain available
on the SmithForm record.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotUnimodular
from .matrices import Matrix, as_poly, as_ratfun
from .scalars import INF, Poly, RatFun, poly_lcm, rat, split_at_point, valuation

__all__ = [
    "SmithForm",
    "smith_form",
    "SmithMcMillanDecomposition",
    "smith_mcmillan",
    "StructuralIndices",
    "structural_indices",
    "mcmillan_degree",
    "unimodular_right_inverse",
    "unimodular_left_inverse",
    "subs_inv_matrix",
]


# ---------------------------------------------------------------------------
# Smith form over Q[z]
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmithForm:
    """U * G * V = S with S diagonal (padded by zeros to G's shape),
    invariant factors monic with the divisibility chain, and U, V square
    unimodular with explicitly tracked inverses."""

    U: Matrix
    Uinv: Matrix
    V: Matrix
    Vinv: Matrix
    invariants: tuple[Poly, ...]
    shape: tuple[int, int]

    def S(self) -> Matrix:
        m, n = self.shape
        out = [[Poly.zero()] * n for _ in range(m)]
        for i, s in enumerate(self.invariants):
            out[i][i] = s
        return Matrix(m, n, tuple(tuple(r) for r in out))


class _Witnessed:
    """Mutable elimination state mirroring every row/column operation on the
    unimodular witnesses and their inverses."""

    def __init__(self, G: Matrix):
        self.m, self.n = G.rows, G.cols
        self.A = [[_to_poly(G[i, j]) for j in range(self.n)] for i in range(self.m)]
        self.U = _eye(self.m)
        self.Uinv = _eye(self.m)
        self.V = _eye(self.n)
        self.Vinv = _eye(self.n)

    # row ops: act on the left (U); inverse op appended to Uinv on the right
    def swap_rows(self, i, j):
        if i == j:
            return
        self.A[i], self.A[j] = self.A[j], self.A[i]
        self.U[i], self.U[j] = self.U[j], self.U[i]
        for row in self.Uinv:
            row[i], row[j] = row[j], row[i]

    def add_row(self, i, j, q: Poly):
        """row_i += q * row_j (i != j)."""
        if q.is_zero:
            return
        self.A[i] = [a + q * b for a, b in zip(self.A[i], self.A[j])]
        self.U[i] = [a + q * b for a, b in zip(self.U[i], self.U[j])]
        for row in self.Uinv:
            row[j] = row[j] - q * row[i]

    def scale_row(self, i, c: Fraction):
        self.A[i] = [c * a for a in self.A[i]]
        self.U[i] = [c * a for a in self.U[i]]
        inv = 1 / c
        for row in self.Uinv:
            row[i] = row[i] * inv

    # column ops: act on the right (V); inverse appended to Vinv on the left
    def swap_cols(self, i, j):
        if i == j:
            return
        for row in self.A:
            row[i], row[j] = row[j], row[i]
        for row in self.V:
            row[i], row[j] = row[j], row[i]
        self.Vinv[i], self.Vinv[j] = self.Vinv[j], self.Vinv[i]

    def add_col(self, i, j, q: Poly):
        """col_i += q * col_j (i != j)."""
        if q.is_zero:
            return
        for row in self.A:
            row[i] = row[i] + q * row[j]
        for row in self.V:
            row[i] = row[i] + q * row[j]
        self.Vinv[j] = [a - q * b for a, b in zip(self.Vinv[j], self.Vinv[i])]


def _eye(n):
    return [[Poly.one() if i == j else Poly.zero() for j in range(n)] for i in range(n)]


def _to_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly((rat(x),))
    from .matrices import as_poly

    return as_poly(x)


def _find_pivot(A, k, m, n):
    """Nonzero entry of minimal degree in the trailing submatrix.

    Ties broken by lowest row index, then lowest column index.
    """
    best = None
    for i in range(k, m):
        for j in range(k, n):
            p = A[i][j]
            if p.is_zero:
                continue
            key = (p.degree, i, j)
            if best is None or key < best[0]:
                best = (key, i, j)
    if best is None:
        return None
    return best[1], best[2]


def smith_form(G: Matrix) -> SmithForm:
    """Diagonalize a polynomial matrix by unimodular row/column operations.

    Pivot rule: nonzero entry of minimal degree (ties: lowest row, then
    column); reduce and re-check until the pivot divides every remaining
    entry, then normalize the pivot monic.
    """
    st = _Witnessed(G)
    m, n = st.m, st.n
    invariants: list[Poly] = []
    for k in range(min(m, n)):
        loc = _find_pivot(st.A, k, m, n)
        if loc is None:
            break
        st.swap_rows(k, loc[0])
        st.swap_cols(k, loc[1])
        while True:
            # clear column k
            dirty = False
            for i in range(k + 1, m):
                if st.A[i][k].is_zero:
                    continue
                q, r = divmod(st.A[i][k], st.A[k][k])
                st.add_row(i, k, -q)
                if not r.is_zero:
                    st.swap_rows(i, k)
                    dirty = True
            if dirty:
                continue
            # clear row k
            for j in range(k + 1, n):
                if st.A[k][j].is_zero:
                    continue
                q, r = divmod(st.A[k][j], st.A[k][k])
                st.add_col(j, k, -q)
                if not r.is_zero:
                    st.swap_cols(j, k)
                    dirty = True
            if dirty:
                continue
            # divisibility of the remaining block by the pivot
            offender = None
            for i in range(k + 1, m):
                for j in range(k + 1, n):
                    if not divmod(st.A[i][j], st.A[k][k])[1].is_zero:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            st.add_row(k, offender, Poly.one())
        lc = st.A[k][k].lead
        if lc != 1:
            st.scale_row(k, 1 / lc)
        invariants.append(st.A[k][k])

    sf = SmithForm(
        U=Matrix.from_rows(st.U),
        Uinv=Matrix.from_rows(st.Uinv),
        V=Matrix.from_rows(st.V),
        Vinv=Matrix.from_rows(st.Vinv),
        invariants=tuple(invariants),
        shape=(m, n),
    )
    _check_smith(sf, G)
    return sf


def _check_smith(sf: SmithForm, G: Matrix):
    if sf.U * G.to_poly() * sf.V != sf.S():
        raise AssertionError("Smith form reassembly failed")
    if sf.U * sf.Uinv != Matrix.identity(sf.shape[0]):
        raise AssertionError("Smith U witness inverse failed")
    if sf.V * sf.Vinv != Matrix.identity(sf.shape[1]):
        raise AssertionError("Smith V witness inverse failed")
    for a, b in zip(sf.invariants, sf.invariants[1:]):
        if not a.divides(b):
            raise AssertionError("Smith invariant divisibility chain failed")


# ---------------------------------------------------------------------------
# Smith-McMillan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmithMcMillanDecomposition:
    """G = C * D * F with C, F unimodular polynomial matrices and D the
    canonic diagonal diag[eps_i / psi_i]."""

    C: Matrix
    D: Matrix
    F: Matrix
    eps: tuple[Poly, ...]
    psi: tuple[Poly, ...]
    rank: int
    F_rinv: Matrix
    C_linv: Matrix
    matrix: Matrix
    smith: SmithForm

    def diagonal(self) -> tuple[RatFun, ...]:
        return tuple(as_ratfun(self.D[i, i]) for i in range(self.rank))


def _reduce_C_columns(C: Matrix, diag: list[RatFun]) -> tuple[Matrix, Matrix]:
    """Canonicalizing transformation T (and its inverse): degree-reduce each
    column of C against earlier columns.

    Right-multiplying C by I + q*E_ij (i < j) is compensated on F by the
    polynomial matrix D^-1 * (I - q*E_ij) * D, which the divisibility chains
    keep polynomial; the representative with degree-minimal later columns is
    the canonical one.
    """
    m, r = C.rows, C.cols
    cols = [[as_poly(C[i, j]) for i in range(m)] for j in range(r)]
    T = [[Poly.one() if i == j else Poly.zero() for j in range(r)] for i in range(r)]
    Tinv = [[Poly.one() if i == j else Poly.zero() for j in range(r)] for i in range(r)]
    ops: list[tuple[int, int, Poly]] = []

    def col_deg(j):
        return max(p.degree for p in cols[j])

    def lead_vec(j, deg):
        return [p.coeff(deg) for p in cols[j]]

    for j in range(1, r):
        while True:
            kj = col_deg(j)
            u = lead_vec(j, kj)
            eligible = [i for i in range(j) if col_deg(i) <= kj]
            combo = _solve_combination(
                [lead_vec(i, col_deg(i)) for i in eligible], u
            )
            if combo is None:
                break
            for idx, ci in zip(eligible, combo):
                if ci == 0:
                    continue
                q = Poly.monomial(kj - col_deg(idx), -ci)
                cols[j] = [a + q * b for a, b in zip(cols[j], cols[idx])]
                ops.append((idx, j, q))
    for i, j, q in ops:
        # T := T * (I + q E_ij); with T kept upper-unitriangular this is
        # column update T[:,j] += q * T[:,i]
        for k in range(r):
            T[k][j] = T[k][j] + q * T[k][i]
    for i, j, q in reversed(ops):
        for k in range(r):
            Tinv[k][j] = Tinv[k][j] - q * Tinv[k][i]
    return Matrix.from_rows(T), Matrix.from_rows(Tinv)


def _solve_combination(vecs: list[list[Fraction]], target: list[Fraction]):
    """Exact coefficients c with sum c_i * vecs[i] == target, or None.

    Deterministic: Gaussian elimination with free variables set to zero.
    """
    if not vecs:
        return None
    if all(x == 0 for x in target):
        return None
    n, k = len(target), len(vecs)
    aug = [[vecs[j][i] for j in range(k)] + [target[i]] for i in range(n)]
    pivots = []
    row = 0
    for col in range(k):
        piv = next((i for i in range(row, n) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        pv = aug[row][col]
        aug[row] = [x / pv for x in aug[row]]
        for i in range(n):
            if i != row and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
    for i in range(row, n):
        if aug[i][k] != 0:
            return None
    c = [Fraction(0)] * k
    for i, col in enumerate(pivots):
        c[col] = aug[i][k]
    if all(x == 0 for x in c):
        return None
    return c


def _compensation(T: Matrix, diag: list[RatFun]) -> Matrix:
    """D^-1 * T * D for diagonal D, verified polynomial."""
    r = T.rows
    out = []
    for i in range(r):
        row = []
        for j in range(r):
            e = as_ratfun(T[i, j])
            if not e.is_zero and i != j:
                e = e * diag[j] / diag[i]
            row.append(e.to_poly())
        out.append(row)
    return Matrix.from_rows(out)


def smith_mcmillan(G: Matrix) -> SmithMcMillanDecomposition:
    """Clear denominators, take the Smith form, and re-divide.

    The eps/psi pairs inherit the divisibility chains from the Smith
    invariants; the C witness is canonicalized by degree-reducing later
    columns against earlier ones; reassembly C*D*F == G is verified exactly.
    """
    R = G.to_ratfun()
    if R.is_zero:
        raise ValueError("Smith-McMillan of the zero matrix")
    d = Poly.one()
    for i in range(R.rows):
        for j in range(R.cols):
            d = poly_lcm(d, R[i, j].den)
    N = R.map(lambda f: (f * d).to_poly())
    sf = smith_form(N)
    r = len(sf.invariants)
    eps, psi = [], []
    for s in sf.invariants:
        f = RatFun(s, d)
        eps.append(f.num)
        psi.append(f.den)
    D = Matrix.diag([RatFun(e, p) for e, p in zip(eps, psi)])
    C = sf.Uinv.submatrix(range(R.rows), range(r))
    F = sf.Vinv.submatrix(range(r), range(R.cols))
    F_rinv = sf.V.submatrix(range(R.cols), range(r))
    C_linv = sf.U.submatrix(range(r), range(R.rows))
    if r > 1:
        diag = [RatFun(e, p) for e, p in zip(eps, psi)]
        T, Tinv = _reduce_C_columns(C, diag)
        Tf = _compensation(Tinv, diag)
        Tf_inv = _compensation(T, diag)
        C = C * T
        F = Tf * F
        F_rinv = F_rinv * Tf_inv
        C_linv = Tinv * C_linv
    smm = SmithMcMillanDecomposition(
        C=C,
        D=D,
        F=F,
        eps=tuple(eps),
        psi=tuple(psi),
        rank=r,
        F_rinv=F_rinv,
        C_linv=C_linv,
        matrix=R,
        smith=sf,
    )
    if C * D * F != R:
        raise AssertionError("Smith-McMillan reassembly failed")
    for a, b in zip(eps, eps[1:]):
        if not a.divides(b):
            raise AssertionError("eps divisibility chain failed")
    for a, b in zip(psi, psi[1:]):
        if not b.divides(a):
            raise AssertionError("psi divisibility chain failed")
    return smm


# ---------------------------------------------------------------------------
# Structural indices and McMillan degree
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StructuralIndices:
    point: object
    indices: tuple[int, ...]


def _factor_multiplicity(p: Poly, q: Poly) -> int:
    """Multiplicity of the factor q in p (p nonzero, q nonconstant)."""
    mult = 0
    cur = p
    while True:
        quo, rem = divmod(cur, q)
        if not rem.is_zero:
            return mult
        cur = quo
        mult += 1


def structural_indices(smm: SmithMcMillanDecomposition, point) -> StructuralIndices:
    """Structural indices of the decomposed matrix at a point.

    The point may be a finite rational, a polynomial factor (its valuation is
    counted factor-wise), or INF, which triggers the substitution z -> 1/z
    and an exact recomputation at 0.
    """
    if point is INF:
        sub = subs_inv_matrix(smm.matrix)
        smm2 = smith_mcmillan(sub)
        idx = tuple(valuation(f, Fraction(0)) for f in smm2.diagonal())
        return StructuralIndices(INF, idx)
    if isinstance(point, Poly):
        idx = tuple(
            _factor_multiplicity(e, point) - _factor_multiplicity(p, point)
            for e, p in zip(smm.eps, smm.psi)
        )
        return StructuralIndices(point, idx)
    a = rat(point)
    idx = tuple(valuation(f, a) for f in smm.diagonal())
    return StructuralIndices(a, idx)


def subs_inv_matrix(G: Matrix) -> Matrix:
    """Entrywise substitution z -> 1/z (no transpose)."""
    return G.to_ratfun().map(lambda f: f.star())


def mcmillan_degree(G) -> int:
    """Sum of pole degrees over all poles, the pole at infinity included.

    The finite contribution is sum(deg psi_i); the infinity contribution is
    read off the structural indices of G(1/z) at 0.
    """
    smm = G if isinstance(G, SmithMcMillanDecomposition) else smith_mcmillan(G)
    finite = sum(p.degree for p in smm.psi)
    at_inf = structural_indices(smm, INF).indices
    return finite + sum(-v for v in at_inf if v < 0)


# ---------------------------------------------------------------------------
# One-sided inverses of unimodular polynomial matrices
# ---------------------------------------------------------------------------

def _constant_invariants(sf: SmithForm, count: int) -> list[Fraction]:
    if len(sf.invariants) != count:
        raise NotUnimodular("matrix does not have full normal rank")
    consts = []
    for s in sf.invariants:
        if s.degree != 0:
            raise NotUnimodular(f"nonconstant invariant factor: {s}")
        consts.append(s.coeff(0))
    return consts


def unimodular_right_inverse(F: Matrix) -> Matrix:
    """Polynomial right inverse of a unimodular r x n polynomial matrix."""
    sf = smith_form(F)
    r, n = F.rows, F.cols
    consts = _constant_invariants(sf, r)
    E = Matrix(
        n,
        r,
        tuple(
            tuple(
                Poly((1 / consts[j],)) if i == j else Poly.zero() for j in range(r)
            )
            for i in range(n)
        ),
    )
    inv = sf.V * E * sf.U
    if F * inv != Matrix.identity(r):
        raise AssertionError("right inverse verification failed")
    return inv


def unimodular_left_inverse(C: Matrix) -> Matrix:
    """Polynomial left inverse of a unimodular m x r polynomial matrix."""
    sf = smith_form(C)
    m, r = C.rows, C.cols
    consts = _constant_invariants(sf, r)
    E = Matrix(
        r,
        m,
        tuple(
            tuple(
                Poly((1 / consts[i],)) if i == j else Poly.zero() for j in range(m)
            )
            for i in range(r)
        ),
    )
    inv = sf.V * E * sf.U
    if inv * C != Matrix.identity(r):
        raise AssertionError("left inverse verification failed")
    return inv
