"""Matrices over the exact scalar tower (Fraction / Poly / LPoly / RatFun).

A single immutable Matrix class carries entries of any scalar kind; binary
operations rely on the scalars' own coercion.  Determinants use fraction-free
Bareiss elimination over the entry ring; rank and inversion work over the
rational-function field.  Structural predicates (para-Hermitian, para-unitary,
L-unimodular) are exact; positive semi-definiteness on the unit circle is a
sampled check and is reported as such.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ZeroColumn
from .scalars import LPoly, Poly, RatFun, rat

__all__ = [
    "Matrix",
    "DegreeProfile",
    "SpectrumReport",
    "as_poly",
    "as_lpoly",
    "as_ratfun",
    "entry_star",
    "hc_matrix",
    "lc_matrix",
    "hr_matrix",
    "lr_matrix",
    "degree_profile",
    "is_para_hermitian",
    "is_para_unitary",
    "is_L_unimodular",
    "is_spectrum",
    "evaluate_grid",
]


# ---------------------------------------------------------------------------
# Entry coercions
# ---------------------------------------------------------------------------

def as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly((rat(x),))
    if isinstance(x, LPoly):
        return x.to_poly()
    if isinstance(x, RatFun):
        return x.to_poly()
    raise TypeError(f"cannot interpret as polynomial: {x!r}")


def as_lpoly(x) -> LPoly:
    if isinstance(x, LPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return LPoly(0, (rat(x),))
    if isinstance(x, Poly):
        return x.to_lpoly()
    if isinstance(x, RatFun):
        return x.to_lpoly()
    raise TypeError(f"cannot interpret as Laurent polynomial: {x!r}")


def as_ratfun(x) -> RatFun:
    r = RatFun._coerce(x)
    if r is None:
        raise TypeError(f"cannot interpret as rational function: {x!r}")
    return r


def entry_star(x):
    """Scalar star z -> 1/z for any entry kind (constants are fixed)."""
    if isinstance(x, (int, Fraction)):
        return rat(x)
    if isinstance(x, Poly):
        return x.to_lpoly().star()
    if isinstance(x, (LPoly, RatFun)):
        return x.star()
    raise TypeError(f"no star for entry: {x!r}")


def _is_zero_entry(x) -> bool:
    if isinstance(x, (int, Fraction)):
        return x == 0
    return x.is_zero


def _normalize_entry(x):
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (Fraction, Poly, LPoly, RatFun)):
        return x
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"unsupported matrix entry: {x!r}")


# ---------------------------------------------------------------------------
# Matrix
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows <= 0 or self.cols <= 0:
            raise ValueError("matrix dimensions must be positive")
        grid = tuple(
            tuple(_normalize_entry(x) for x in row) for row in self.entries
        )
        if len(grid) != self.rows or any(len(r) != self.cols for r in grid):
            raise ValueError("entry grid does not match declared shape")
        object.__setattr__(self, "entries", grid)

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Matrix":
        rows = [list(r) for r in rows]
        return cls(len(rows), len(rows[0]), tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls.diag([Fraction(1)] * n)

    @classmethod
    def zeros(cls, m: int, n: int) -> "Matrix":
        z = Fraction(0)
        return cls(m, n, tuple(tuple(z for _ in range(n)) for _ in range(m)))

    @classmethod
    def diag(cls, values: Sequence) -> "Matrix":
        n = len(values)
        z = Fraction(0)
        return cls(
            n,
            n,
            tuple(
                tuple(values[i] if i == j else z for j in range(n))
                for i in range(n)
            ),
        )

    # -- access -------------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def col(self, j: int) -> tuple:
        return tuple(self.entries[i][j] for i in range(self.rows))

    def diagonal(self) -> tuple:
        return tuple(self.entries[i][i] for i in range(min(self.rows, self.cols)))

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(
            len(rows),
            len(cols),
            tuple(tuple(self.entries[i][j] for j in cols) for i in rows),
        )

    def map(self, fn: Callable) -> "Matrix":
        return Matrix(
            self.rows,
            self.cols,
            tuple(tuple(fn(x) for x in row) for row in self.entries),
        )

    def to_ratfun(self) -> "Matrix":
        return self.map(as_ratfun)

    def to_lpoly(self) -> "Matrix":
        return self.map(as_lpoly)

    def to_poly(self) -> "Matrix":
        return self.map(as_poly)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in matrix addition")
        return Matrix(
            self.rows,
            self.cols,
            tuple(
                tuple(a + b for a, b in zip(r1, r2))
                for r1, r2 in zip(self.entries, other.entries)
            ),
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        return self.map(lambda x: -x)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch in matrix product")
            out = []
            for i in range(self.rows):
                row = []
                for j in range(other.cols):
                    acc = None
                    for k in range(self.cols):
                        a, b = self.entries[i][k], other.entries[k][j]
                        if _is_zero_entry(a) or _is_zero_entry(b):
                            continue
                        term = a * b
                        acc = term if acc is None else acc + term
                    row.append(Fraction(0) if acc is None else acc)
                out.append(tuple(row))
            return Matrix(self.rows, other.cols, tuple(out))
        return self.map(lambda x: x * other)

    def __rmul__(self, other):
        return self.map(lambda x: other * x)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            return False
        for r1, r2 in zip(self.entries, other.entries):
            for a, b in zip(r1, r2):
                if as_ratfun(a) != as_ratfun(b):
                    return False
        return True

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(str(x) for x in r) for r in self.entries)))

    @property
    def is_zero(self) -> bool:
        return all(_is_zero_entry(x) for row in self.entries for x in row)

    def transpose(self) -> "Matrix":
        return Matrix(
            self.cols,
            self.rows,
            tuple(
                tuple(self.entries[i][j] for i in range(self.rows))
                for j in range(self.cols)
            ),
        )

    def star(self) -> "Matrix":
        """G*(z) = G(1/z) transposed."""
        return self.transpose().map(entry_star)

    # -- determinant / rank / inverse ----------------------------------------

    def det(self):
        """Determinant by fraction-free Bareiss elimination."""
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        kinds = [type(x) for row in self.entries for x in row]
        if any(k is RatFun for k in kinds):
            grid = [[as_ratfun(x) for x in row] for row in self.entries]
            one = RatFun.one()
        elif any(k is LPoly for k in kinds):
            grid = [[as_lpoly(x) for x in row] for row in self.entries]
            one = LPoly.one()
        elif any(k is Poly for k in kinds):
            grid = [[as_poly(x) for x in row] for row in self.entries]
            one = Poly.one()
        else:
            grid = [[rat(x) for x in row] for row in self.entries]
            one = Fraction(1)
        sign = 1
        prev = one
        for k in range(n - 1):
            piv = next((i for i in range(k, n) if not _is_zero_entry(grid[i][k])), None)
            if piv is None:
                return one * 0
            if piv != k:
                grid[k], grid[piv] = grid[piv], grid[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    num = grid[i][j] * grid[k][k] - grid[i][k] * grid[k][j]
                    grid[i][j] = _ring_exact_div(num, prev)
                grid[i][k] = one * 0
            prev = grid[k][k]
        return grid[n - 1][n - 1] * sign

    def normal_rank(self) -> int:
        grid = [[as_ratfun(x) for x in row] for row in self.entries]
        rank = 0
        for j in range(self.cols):
            piv = next(
                (i for i in range(rank, self.rows) if not grid[i][j].is_zero), None
            )
            if piv is None:
                continue
            grid[rank], grid[piv] = grid[piv], grid[rank]
            pv = grid[rank][j]
            for i in range(self.rows):
                if i != rank and not grid[i][j].is_zero:
                    f = grid[i][j] / pv
                    grid[i] = [a - f * b for a, b in zip(grid[i], grid[rank])]
            rank += 1
            if rank == self.rows:
                break
        return rank

    def inverse(self) -> "Matrix":
        """Exact inverse over the rational-function field."""
        if not self.is_square:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        grid = [
            [as_ratfun(x) for x in row]
            + [RatFun.one() if i == j else RatFun.zero() for j in range(n)]
            for i, row in enumerate(self.entries)
        ]
        for k in range(n):
            piv = next((i for i in range(k, n) if not grid[i][k].is_zero), None)
            if piv is None:
                raise ValueError("singular matrix has no inverse")
            grid[k], grid[piv] = grid[piv], grid[k]
            pv = grid[k][k]
            grid[k] = [a / pv for a in grid[k]]
            for i in range(n):
                if i != k and not grid[i][k].is_zero:
                    f = grid[i][k]
                    grid[i] = [a - f * b for a, b in zip(grid[i], grid[k])]
        return Matrix(n, n, tuple(tuple(row[n:]) for row in grid))

    def __str__(self) -> str:
        return "[" + "; ".join(", ".join(str(x) for x in row) for row in self.entries) + "]"

    __repr__ = __str__


def _ring_exact_div(a, b):
    if isinstance(a, (Poly, LPoly)):
        return a.exact_div(b)
    return a / b


# ---------------------------------------------------------------------------
# Degree-coefficient matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DegreeProfile:
    """Column maximum-degrees and row minimum-degrees; None marks a zero
    column or row."""

    column_max: tuple[Optional[int], ...]
    row_min: tuple[Optional[int], ...]


def degree_profile(G: Matrix) -> DegreeProfile:
    L = G.to_lpoly()
    col_max = []
    for j in range(L.cols):
        col = [x for x in L.col(j) if not x.is_zero]
        col_max.append(max(x.max_degree for x in col) if col else None)
    row_min = []
    for i in range(L.rows):
        row = [x for x in L.row(i) if not x.is_zero]
        row_min.append(min(x.min_degree for x in row) if row else None)
    return DegreeProfile(tuple(col_max), tuple(row_min))


def _degree_coeff(G: Matrix, axis: str, which: str) -> Matrix:
    L = G.to_lpoly()
    out = [[Fraction(0)] * L.cols for _ in range(L.rows)]
    if axis == "col":
        for j in range(L.cols):
            col = [x for x in L.col(j) if not x.is_zero]
            if not col:
                raise ZeroColumn(f"column {j} is identically zero")
            deg = (
                max(x.max_degree for x in col)
                if which == "high"
                else min(x.min_degree for x in col)
            )
            for i in range(L.rows):
                out[i][j] = L[i, j].coeff(deg)
    else:
        for i in range(L.rows):
            row = [x for x in L.row(i) if not x.is_zero]
            if not row:
                raise ZeroColumn(f"row {i} is identically zero")
            deg = (
                max(x.max_degree for x in row)
                if which == "high"
                else min(x.min_degree for x in row)
            )
            for j in range(L.cols):
                out[i][j] = L[i, j].coeff(deg)
    return Matrix(L.rows, L.cols, tuple(tuple(r) for r in out))


def hc_matrix(G: Matrix) -> Matrix:
    """Highest-column-degree coefficient matrix."""
    return _degree_coeff(G, "col", "high")


def lc_matrix(G: Matrix) -> Matrix:
    """Lowest-column-degree coefficient matrix."""
    return _degree_coeff(G, "col", "low")


def hr_matrix(G: Matrix) -> Matrix:
    """Highest-row-degree coefficient matrix."""
    return _degree_coeff(G, "row", "high")


def lr_matrix(G: Matrix) -> Matrix:
    """Lowest-row-degree coefficient matrix."""
    return _degree_coeff(G, "row", "low")


# ---------------------------------------------------------------------------
# Predicates
# ---------------------------------------------------------------------------

def is_para_hermitian(G: Matrix) -> bool:
    if not G.is_square:
        raise ValueError("para-Hermitian test requires a square matrix")
    return G == G.star()


def is_para_unitary(G: Matrix) -> bool:
    if not G.is_square:
        raise ValueError("para-unitary test requires a square matrix")
    eye = Matrix.identity(G.rows)
    gs = G.star()
    return gs * G == eye and G * gs == eye


def is_L_unimodular(G: Matrix) -> bool:
    if not G.is_square:
        raise ValueError("L-unimodularity test requires a square matrix")
    try:
        d = as_lpoly(G.to_lpoly().det())
    except ValueError:
        return False
    return (not d.is_zero) and d.is_monomial


@dataclass(frozen=True)
class SpectrumReport:
    para_hermitian: bool
    samples_checked: int
    samples_skipped: int
    min_eigenvalue: float
    failures: tuple = ()
    note: str = "positive semi-definiteness sampled on the unit circle, not certified"

    @property
    def ok(self) -> bool:
        return self.para_hermitian and not self.failures


def evaluate_grid(G: Matrix, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate a rational matrix at complex points.

    Returns (values, defined) where values has shape (npts, rows, cols) and
    defined is a boolean mask of points where every denominator is safely
    away from zero.
    """
    npts = len(points)
    vals = np.empty((npts, G.rows, G.cols), dtype=complex)
    defined = np.ones(npts, dtype=bool)
    for i in range(G.rows):
        for j in range(G.cols):
            f = as_ratfun(G[i, j])
            nc = np.array(f.num.float_coeffs()[::-1] or [0.0])
            dc = np.array(f.den.float_coeffs()[::-1])
            nv = np.polyval(nc, points)
            dv = np.polyval(dc, points)
            scale = max(1.0, float(np.max(np.abs(dc))))
            bad = np.abs(dv) < 1e-12 * scale
            defined &= ~bad
            dv = np.where(bad, 1.0, dv)
            vals[:, i, j] = nv / dv
    return vals, defined


def is_spectrum(
    Phi: Matrix, grid_size: int = 512, tol: float = 1e-9
) -> tuple[bool, SpectrumReport]:
    """Exact para-Hermitian symmetry plus sampled PSD on the unit circle."""
    if not Phi.is_square:
        raise ValueError("a spectrum must be square")
    ph = is_para_hermitian(Phi)
    omegas = 2.0 * np.pi * np.arange(grid_size) / grid_size
    points = np.exp(1j * omegas)
    vals, defined = evaluate_grid(Phi, points)
    failures = []
    min_eig = np.inf
    checked = 0
    for k in range(grid_size):
        if not defined[k]:
            continue
        checked += 1
        H = 0.5 * (vals[k] + vals[k].conj().T)
        lam = float(np.linalg.eigvalsh(H)[0])
        min_eig = min(min_eig, lam)
        if lam < -tol:
            failures.append((float(omegas[k]), lam))
    report = SpectrumReport(
        para_hermitian=ph,
        samples_checked=checked,
        samples_skipped=grid_size - checked,
        min_eigenvalue=float(min_eig) if checked else float("nan"),
        failures=tuple(failures),
    )
    return report.ok, report
