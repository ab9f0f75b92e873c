"""Unmixed-symplectic region specifications, unit-circle root classification,
and the region-aware splitting of a canonic diagonal into Sigma, Lambda and
Theta factors.

A region is encoded as a default side of the unit circle plus a set of
flipped pair-orbits; each orbit {a, 1/a} is keyed by the monic factor whose
roots lie strictly inside the open unit disk (the factor z keys the {0, inf}
orbit).  Root splitting is exact whenever the roots are rational, on-circle
factors are recovered exactly through verified division, and a clearly
flagged numeric fallback covers irrational off-circle roots.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .errors import (
    NotASpectrum,
    OddOnCircleMultiplicity,
    OnCircleAmbiguous,
    OnCircleForbidden,
    UnresolvableCircleProximity,
)
from .matrices import Matrix, as_ratfun
from .scalars import INF, LPoly, Poly, RatFun, rat, reciprocal_monic, split_at_point

__all__ = [
    "Side",
    "RegionSpec",
    "RegionPair",
    "membership",
    "split_circle",
    "classify_roots",
    "CirclePartition",
    "split_diagonal",
    "SplitDecomposition",
    "OrbitPlacement",
    "all_roots_in_open_disk",
]

_Z = Poly.variable()


class Side(enum.Enum):
    IN_REGION = "in_region"
    IN_STAR = "in_star"
    ON_CIRCLE = "on_circle"

    def flipped(self) -> "Side":
        if self is Side.IN_REGION:
            return Side.IN_STAR
        if self is Side.IN_STAR:
            return Side.IN_REGION
        return self


# ---------------------------------------------------------------------------
# Exact disk tests
# ---------------------------------------------------------------------------

def all_roots_in_open_disk(p: Poly) -> bool:
    """Exact Schur-Cohn test: every root of p has modulus < 1."""
    if p.is_zero:
        raise ValueError("zero polynomial has no root locus")
    if p.degree == 0:
        return True
    _, q = split_at_point(p, Fraction(0))  # roots at 0 are inside
    while q.degree > 0:
        a0, an = q.coeff(0), q.lead
        if abs(a0) >= abs(an):
            return False
        nxt = an * q - a0 * q.reverse()
        if nxt.coeff(0) != 0:
            raise AssertionError("Schur-Cohn recursion lost exactness")
        q = Poly(nxt.coeffs[1:])
    return True


def _is_rational_square(x: Fraction) -> bool:
    if x < 0:
        return False
    n, d = x.numerator, x.denominator
    return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d


# ---------------------------------------------------------------------------
# Region specification
# ---------------------------------------------------------------------------

def _validate_flip(f: Poly) -> Poly:
    if f.is_zero or f.degree < 1 or f.degree > 2:
        raise ValueError(f"flip factors must have degree 1 or 2: {f}")
    f = f.monic()
    if f.degree == 2:
        b, c = f.coeff(1), f.coeff(0)
        disc = b * b - 4 * c
        if disc >= 0 and _is_rational_square(disc):
            raise ValueError(
                f"flip factor {f} is reducible; list its linear factors instead"
            )
    if not all_roots_in_open_disk(f):
        raise ValueError(f"flip factor must have all roots inside the unit disk: {f}")
    return f


@dataclass(frozen=True)
class RegionSpec:
    """An unmixed-symplectic set: a default side of the circle plus flipped
    pair-orbits keyed by their inside-disk representative factor."""

    default_side: str = "outside"
    closed_circle: bool = False
    flips: frozenset = frozenset()

    def __post_init__(self):
        if self.default_side not in ("inside", "outside"):
            raise ValueError("default_side must be 'inside' or 'outside'")
        object.__setattr__(
            self, "flips", frozenset(_validate_flip(f) for f in self.flips)
        )

    @classmethod
    def outside(cls, closed: bool = False, flips=()) -> "RegionSpec":
        return cls("outside", closed, frozenset(flips))

    @classmethod
    def inside(cls, closed: bool = False, flips=()) -> "RegionSpec":
        return cls("inside", closed, frozenset(flips))

    @property
    def contains_infinity(self) -> bool:
        base = self.default_side == "outside"
        return base ^ (_Z in self.flips)

    @property
    def contains_zero(self) -> bool:
        return not self.contains_infinity

    def to_json_fragment(self) -> dict:
        return {
            "default": self.default_side,
            "closed": self.closed_circle,
            "flips": sorted(
                [[str(c) for c in f.coeffs] for f in self.flips]
            ),
        }

    @classmethod
    def from_json_fragment(cls, frag: dict) -> "RegionSpec":
        flips = frozenset(
            Poly(tuple(Fraction(c) for c in coeffs)) for coeffs in frag.get("flips", [])
        )
        return cls(frag.get("default", "outside"), bool(frag.get("closed", False)), flips)


@dataclass(frozen=True)
class RegionPair:
    """The pole region and the zero region for a factorization."""

    poles: RegionSpec
    zeros: RegionSpec

    @classmethod
    def youla(cls) -> "RegionPair":
        return cls(RegionSpec.outside(), RegionSpec.outside())


def _orbit_key_and_side(point) -> tuple[Poly, bool, bool]:
    """Map a point or factor to (inside-representative key, is_inside_rep,
    is_on_circle)."""
    if point is INF or (isinstance(point, float) and math.isinf(point)):
        return _Z, False, False
    if isinstance(point, (int, Fraction)):
        a = rat(point)
        if a == 0:
            return _Z, True, False
        if a * a == 1:
            return Poly((-a, Fraction(1))), True, True
        if a * a < 1:
            return Poly((-a, Fraction(1))), True, False
        return Poly((-1 / a, Fraction(1))), False, False
    if isinstance(point, Poly):
        f = point.monic()
        if f.degree == 1:
            return _orbit_key_and_side(-f.coeff(0))
        if f.degree == 2:
            b, c = f.coeff(1), f.coeff(0)
            if c == 1:
                if b * b < 4:
                    return f, True, True
                raise ValueError(
                    f"factor {f} carries a reciprocal real pair; it has no side"
                )
            if all_roots_in_open_disk(f):
                return f, True, False
            rec = reciprocal_monic(f)
            if all_roots_in_open_disk(rec):
                return rec, False, False
            raise ValueError(f"factor {f} has roots on both sides of the circle")
        raise ValueError(f"orbit factors must have degree 1 or 2: {f}")
    raise TypeError(f"not a region point: {point!r}")


def membership(spec: RegionSpec, point) -> Side:
    """Which side of the region a point (or irreducible factor orbit) is on.

    Points on the unit circle return ON_CIRCLE for weakly unmixed-symplectic
    regions and raise OnCircleAmbiguous otherwise.
    """
    key, is_inside_rep, on_circle = _orbit_key_and_side(point)
    if on_circle:
        if spec.closed_circle:
            return Side.ON_CIRCLE
        raise OnCircleAmbiguous(f"{point} lies on the unit circle")
    inside_belongs = spec.default_side == "inside"
    if key in spec.flips:
        inside_belongs = not inside_belongs
    belongs = inside_belongs if is_inside_rep else not inside_belongs
    return Side.IN_REGION if belongs else Side.IN_STAR


# ---------------------------------------------------------------------------
# Integer factorization (for the rational-root theorem)
# ---------------------------------------------------------------------------

_SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    for c in range(1, 32):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"failed to factor {n}")


def _factorint(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    w = 0
    while f * f <= n and f < 100000:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += wheel[w]
        w = (w + 1) % 8
    if n > 1:
        stack = [n]
        while stack:
            m = stack.pop()
            if m == 1:
                continue
            if _is_probable_prime(m):
                out[m] = out.get(m, 0) + 1
                continue
            d = _pollard_rho(m)
            stack.extend([d, m // d])
    return out


def _divisors(n: int, cap: int = 100000) -> list[int] | None:
    if n == 0:
        return None
    divs = [1]
    for p, e in _factorint(abs(n)).items():
        new = []
        pk = 1
        for _ in range(e + 1):
            new.extend(d * pk for d in divs)
            pk *= p
            if len(new) > cap:
                return None
        divs = new
    return divs


# ---------------------------------------------------------------------------
# Rational roots
# ---------------------------------------------------------------------------

def _int_coeffs(p: Poly) -> list[int]:
    lcm = 1
    for c in p.coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    return [int(c * lcm) for c in p.coeffs]


def _rational_root_candidates(p: Poly) -> list[Fraction] | None:
    """Candidates from the rational-root theorem (p(0) != 0), or None if the
    divisor enumeration would blow up."""
    ic = _int_coeffs(p)
    num_divs = _divisors(ic[0])
    den_divs = _divisors(ic[-1])
    if num_divs is None or den_divs is None:
        return None
    if len(num_divs) * len(den_divs) > 200000:
        return None
    p1 = sum(ic)
    pm1 = sum(c if i % 2 == 0 else -c for i, c in enumerate(ic))
    cands = set()
    for a0 in num_divs:
        for b in den_divs:
            if math.gcd(a0, b) != 1:
                continue
            for a in (a0, -a0):
                # necessary: (a - b) | p(1) and (a + b) | p(-1)
                if p1 != 0 and a != b and p1 % (a - b) != 0:
                    continue
                if pm1 != 0 and a != -b and pm1 % (a + b) != 0:
                    continue
                cands.add(Fraction(a, b))
    return sorted(cands)


def _int_eval_zero(ic: list[int], r: Fraction) -> bool:
    a, b = r.numerator, r.denominator
    n = len(ic) - 1
    acc = 0
    bp = 1
    # sum c_i a^i b^(n-i), accumulated from the top by Horner in a
    for c in reversed(ic):
        acc = acc * a + c * bp
        bp *= b
    return acc == 0


def _deflate_rational_roots(p: Poly) -> tuple[Poly, list[tuple[Fraction, int]]]:
    """Extract all rational roots with exact deflation; p(0) != 0, p monic."""
    found: list[tuple[Fraction, int]] = []
    cur = p
    while cur.degree >= 1:
        ic = _int_coeffs(cur)
        cands = _rational_root_candidates(cur)
        root = None
        if cands is not None:
            for r in cands:
                if _int_eval_zero(ic, r):
                    root = r
                    break
        else:
            root = _reconstruct_rational_root(cur)
        if root is None:
            break
        mult, cur = split_at_point(cur, root)
        found.append((root, mult))
    return cur, found


def _reconstruct_rational_root(p: Poly) -> Fraction | None:
    """High-precision numeric roots + continued-fraction reconstruction,
    verified by exact evaluation; used when divisor enumeration is infeasible."""
    for r in _numeric_roots(_squarefree_part(p)):
        if abs(mpmath.im(r)) > mpmath.mpf("1e-30"):
            continue
        for cand in _frac_candidates(mpmath.re(r)):
            if p(cand) == 0:
                return cand
    return None


# ---------------------------------------------------------------------------
# Numeric roots and reconstruction helpers
# ---------------------------------------------------------------------------

def _squarefree_part(p: Poly) -> Poly:
    from .scalars import poly_gcd

    dp = Poly(tuple(c * (i + 1) for i, c in enumerate(p.coeffs[1:])))
    if dp.is_zero:
        return p
    g = poly_gcd(p, dp)
    if g.degree == 0:
        return p
    return p.exact_div(g)


def _numeric_roots(p: Poly) -> list:
    if p.degree < 1:
        return []
    with mpmath.workdps(50):
        coeffs = [
            mpmath.mpf(c.numerator) / mpmath.mpf(c.denominator)
            for c in reversed(p.coeffs)
        ]
        try:
            roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=120)
        except mpmath.libmp.NoConvergence:
            roots = [mpmath.mpc(z) for z in _companion_roots(p)]
    return list(roots)


def _companion_roots(p: Poly):
    import numpy as np

    return np.roots([float(c) for c in reversed(p.coeffs)])


def _frac_candidates(x, limits=(10 ** 6, 10 ** 12, 10 ** 18)) -> list[Fraction]:
    """Continued-fraction rational candidates for a high-precision real, from
    smallest denominator bound upward; callers verify exactly."""
    with mpmath.workdps(50):
        scaled = mpmath.nint(x * mpmath.mpf(10) ** 38)
        try:
            base = Fraction(int(scaled), 10 ** 38)
        except (OverflowError, ValueError):
            return []
    out = []
    for lim in limits:
        cand = base.limit_denominator(lim)
        if cand not in out:
            out.append(cand)
    return out


def _frac_from_mpf(x) -> Fraction | None:
    cands = _frac_candidates(x)
    return cands[0] if cands else None


# ---------------------------------------------------------------------------
# Circle partition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CirclePartition:
    """Factorization of a monic polynomial into inside / on-circle / outside
    parts, with the z^k monomial tracked separately.

    Factor lists hold (monic factor, multiplicity) pairs; approximate marks
    factors reconstructed from numeric roots rather than exact arithmetic.
    """

    zero_power: int
    inside: tuple
    on_circle: tuple
    outside: tuple
    approximate: bool

    def poly_inside(self) -> Poly:
        out = Poly.monomial(self.zero_power)
        for f, m in self.inside:
            out = out * f ** m
        return out

    def poly_on(self) -> Poly:
        out = Poly.one()
        for f, m in self.on_circle:
            out = out * f ** m
        return out

    def poly_outside(self) -> Poly:
        out = Poly.one()
        for f, m in self.outside:
            out = out * f ** m
        return out


def _classify_abs(a: Fraction) -> str:
    s = a * a
    if s < 1:
        return "in"
    if s == 1:
        return "on"
    return "out"


def _extract_on_circle(cur: Poly, tol: float) -> tuple[Poly, list]:
    """Pull out exact on-circle quadratic factors z^2 + b z + 1 suggested by
    numeric roots; any near-circle root without an exact factor is an error."""
    factors = []
    while cur.degree >= 1:
        roots = _numeric_roots(_squarefree_part(cur))
        near = [r for r in roots if abs(abs(r) - 1) < tol]
        if not near:
            break
        r = near[0]
        if abs(mpmath.im(r)) <= mpmath.mpf(tol):
            # real near-circle root; exact +-1 was already deflated
            raise UnresolvableCircleProximity(
                f"numeric root {complex(r)} is within {tol} of the unit "
                "circle but no exact on-circle factor divides the polynomial"
            )
        extracted = None
        for b in _frac_candidates(-2 * mpmath.re(r)):
            if abs(b) >= 2:
                continue
            q = Poly((Fraction(1), b, Fraction(1)))
            mult = 0
            while divmod(cur, q)[1].is_zero:
                cur = cur.exact_div(q)
                mult += 1
            if mult:
                extracted = (q, mult)
                break
        if extracted is None:
            raise UnresolvableCircleProximity(
                f"numeric root {complex(r)} is within {tol} of the unit "
                "circle but no exact on-circle factor divides the polynomial"
            )
        factors.append(extracted)
    return cur, factors


def _extract_exact_offcircle(cur: Poly) -> tuple[Poly, list]:
    """Recover exact irrational off-circle factors (conjugate-pair quadratics,
    stray linears, same-side real-pair quadratics) via verified division."""
    factors = []
    changed = True
    while changed and cur.degree >= 1:
        changed = False
        roots = _numeric_roots(_squarefree_part(cur))
        complex_roots = [r for r in roots if mpmath.im(r) > mpmath.mpf("1e-25")]
        real_roots = [mpmath.re(r) for r in roots if abs(mpmath.im(r)) <= mpmath.mpf("1e-25")]
        candidates = []
        for r in complex_roots:
            for b in _frac_candidates(-2 * mpmath.re(r)):
                for c in _frac_candidates(abs(r) ** 2):
                    candidates.append(Poly((c, b, Fraction(1))))
        for x in real_roots:
            for a in _frac_candidates(x):
                candidates.append(Poly((-a, Fraction(1))))
        for i in range(len(real_roots)):
            for j in range(i + 1, len(real_roots)):
                for s in _frac_candidates(real_roots[i] + real_roots[j]):
                    for q in _frac_candidates(real_roots[i] * real_roots[j]):
                        candidates.append(Poly((q, -s, Fraction(1))))
        for q in candidates:
            mult = 0
            while divmod(cur, q)[1].is_zero:
                cur = cur.exact_div(q)
                mult += 1
            if mult:
                factors.append((q, mult))
                changed = True
                break
    return cur, factors


def _numeric_factors(cur: Poly, tol: float) -> list:
    """Last resort: real linear/quadratic factors with float-derived rational
    coefficients."""
    roots = _numeric_roots(cur)
    factors = []
    used = [False] * len(roots)
    for i, r in enumerate(roots):
        if used[i]:
            continue
        if abs(abs(r) - 1) < tol:
            raise UnresolvableCircleProximity(
                f"numeric root {complex(r)} is within {tol} of the unit circle"
            )
        if abs(mpmath.im(r)) <= mpmath.mpf("1e-25"):
            a = Fraction(float(mpmath.re(r)))
            factors.append(Poly((-a, Fraction(1))))
            used[i] = True
        else:
            b = Fraction(float(-2 * mpmath.re(r)))
            c = Fraction(float(abs(r) ** 2))
            factors.append(Poly((c, b, Fraction(1))))
            # consume the conjugate partner
            used[i] = True
            for j in range(i + 1, len(roots)):
                if not used[j] and abs(roots[j] - mpmath.conj(r)) < mpmath.mpf("1e-20"):
                    used[j] = True
                    break
    return [(f, 1) for f in factors]


def classify_roots(p: Poly, tol: float = 1e-9) -> CirclePartition:
    """Split a monic polynomial by root location relative to the unit circle.

    Stages: strip z^k; exhaust rational roots (rational-root theorem with
    exact deflation, reconstruction fallback); recover exact on-circle
    quadratics by verified division; recover exact off-circle irrational
    factors; classify any numeric remainder with the approximate flag set.
    """
    if p.is_zero:
        raise ValueError("cannot classify the zero polynomial")
    if p.lead != 1:
        raise ValueError("classify_roots requires a monic polynomial")
    inside: list = []
    on: list = []
    outside: list = []
    zero_power, cur = split_at_point(p, Fraction(0))
    cur, rational = _deflate_rational_roots(cur)
    for root, mult in rational:
        f = Poly((-root, Fraction(1)))
        where = _classify_abs(root)
        (inside if where == "in" else on if where == "on" else outside).append((f, mult))
    approximate = False
    if cur.degree >= 1:
        cur, on_factors = _extract_on_circle(cur, tol)
        on.extend(on_factors)
    if cur.degree >= 1:
        cur, exact_factors = _extract_exact_offcircle(cur)
        for f, m in exact_factors:
            if all_roots_in_open_disk(f):
                inside.append((f, m))
            elif all_roots_in_open_disk(reciprocal_monic(f)):
                outside.append((f, m))
            else:
                # straddling factor: push back for the numeric split
                cur = cur * f ** m
    if cur.degree >= 1:
        approximate = True
        for f, m in _numeric_factors(cur, tol):
            if all_roots_in_open_disk(f):
                inside.append((f, m))
            else:
                outside.append((f, m))
        cur = Poly.one()
    part = CirclePartition(
        zero_power=zero_power,
        inside=tuple(_merge_factors(inside)),
        on_circle=tuple(_merge_factors(on)),
        outside=tuple(_merge_factors(outside)),
        approximate=approximate,
    )
    if not approximate:
        prod = part.poly_inside() * part.poly_on() * part.poly_outside()
        if prod != p:
            raise AssertionError("root classification lost factors")
    return part


def _merge_factors(factors: list) -> list:
    merged: dict[Poly, int] = {}
    order: list[Poly] = []
    for f, m in factors:
        if f not in merged:
            merged[f] = 0
            order.append(f)
        merged[f] += m
    return [(f, merged[f]) for f in order]


def split_circle(p: Poly, tol: float = 1e-9) -> tuple[Poly, Poly, Poly, bool]:
    """p = p_in * p_on * p_out with roots strictly inside / exactly on /
    strictly outside the unit circle; all parts monic."""
    part = classify_roots(p, tol)
    return part.poly_inside(), part.poly_on(), part.poly_outside(), part.approximate


# ---------------------------------------------------------------------------
# Diagonal splitting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrbitPlacement:
    """Diagnostic record: which representative of a pair-orbit was placed in
    Lambda for a given diagonal entry."""

    entry: int
    kind: str  # "pole" or "zero"
    inside_rep: Poly
    chosen_rep: Poly
    multiplicity: int


@dataclass(frozen=True)
class SplitDecomposition:
    """D = Sigma * star(Lambda) * star(Theta) * Theta * Lambda with Sigma a
    diagonal of Laurent monomials, Theta carrying exactly the on-circle
    structure at half multiplicity, and Lambda's poles/zeroes placed by the
    region specs."""

    Sigma: Matrix
    Lambda: Matrix
    Theta: Matrix
    approximate: bool
    placements: tuple = field(default_factory=tuple)

    def reassemble(self) -> Matrix:
        n = self.Sigma.rows
        out = []
        for k in range(n):
            s = as_ratfun(self.Sigma[k, k])
            lam = as_ratfun(self.Lambda[k, k])
            th = as_ratfun(self.Theta[k, k])
            out.append(s * lam.star() * th.star() * th * lam)
        return Matrix.diag(out)


def _pair_orbits(part: CirclePartition, what: str, entry: int, tol: float):
    """Pair inside factors with their reciprocal outside factors.

    Exact parts must match exactly; approximate parts are matched by
    coefficient proximity and snapped to the exact reciprocal.
    """
    outside = list(part.outside)
    orbits = []
    for f, m in part.inside:
        rec = reciprocal_monic(f)
        hit = None
        for i, (g, mg) in enumerate(outside):
            if g == rec:
                hit = i
                break
        if hit is None and part.approximate:
            for i, (g, mg) in enumerate(outside):
                if g.degree == rec.degree and all(
                    abs(float(g.coeff(k) - rec.coeff(k))) < tol * 1e3
                    for k in range(rec.degree + 1)
                ):
                    hit = i
                    break
        if hit is None:
            raise NotASpectrum(
                f"diagonal entry {entry}: {what} factor {f} lacks its "
                f"reciprocal partner; the input is not reciprocal-symmetric"
            )
        g, mg = outside.pop(hit)
        if mg != m:
            raise NotASpectrum(
                f"diagonal entry {entry}: {what} orbit {f} has mismatched "
                f"multiplicities {m} vs {mg}"
            )
        orbits.append((f, rec, m))
    if outside:
        raise NotASpectrum(
            f"diagonal entry {entry}: unmatched outside {what} factors "
            f"{[str(g) for g, _ in outside]}"
        )
    return orbits


def split_diagonal(
    D: Matrix,
    pole_spec: RegionSpec,
    zero_spec: RegionSpec,
    tol: float = 1e-9,
) -> SplitDecomposition:
    """Region-aware splitting of a canonic diagonal.

    Theta collects each on-circle root at half its multiplicity; every
    off-circle orbit contributes the representative allowed by the region
    specs to Lambda; the exact monomial-and-constant balance lands in Sigma.
    """
    n = min(D.rows, D.cols)
    sig, lam, th = [], [], []
    placements: list[OrbitPlacement] = []
    approximate = False
    for k in range(n):
        f = as_ratfun(D[k, k])
        if f.is_zero:
            raise ValueError("split_diagonal requires a nonsingular diagonal")
        eps, psi = f.num, f.den
        lead = eps.lead
        eps_part = classify_roots(eps.monic(), tol)
        psi_part = classify_roots(psi, tol)
        approximate = approximate or eps_part.approximate or psi_part.approximate

        # on-circle halves
        if psi_part.on_circle and pole_spec.closed_circle:
            raise OnCircleForbidden(
                "on-circle poles present but the pole region includes the circle"
            )
        if eps_part.on_circle and zero_spec.closed_circle:
            raise OnCircleForbidden(
                "on-circle zeroes present but the zero region includes the circle"
            )
        th_num, th_den = Poly.one(), Poly.one()
        for fac, m in eps_part.on_circle:
            if m % 2:
                raise OddOnCircleMultiplicity(
                    f"on-circle zero factor {fac} has odd multiplicity {m}"
                )
            th_num = th_num * fac ** (m // 2)
        for fac, m in psi_part.on_circle:
            if m % 2:
                raise OddOnCircleMultiplicity(
                    f"on-circle pole factor {fac} has odd multiplicity {m}"
                )
            th_den = th_den * fac ** (m // 2)
        theta_k = RatFun(th_num, th_den)

        # off-circle orbits
        zero_orbits = _pair_orbits(eps_part, "zero", k, tol)
        pole_orbits = _pair_orbits(psi_part, "pole", k, tol)
        lam_num, lam_den = Poly.one(), Poly.one()
        for f_in, f_out, m in zero_orbits:
            chosen = f_out if membership(zero_spec, f_in) is Side.IN_REGION else f_in
            lam_num = lam_num * chosen ** m
            placements.append(OrbitPlacement(k, "zero", f_in, chosen, m))
        for f_in, f_out, m in pole_orbits:
            chosen = f_out if membership(pole_spec, f_in) is Side.IN_REGION else f_in
            lam_den = lam_den * chosen ** m
            placements.append(OrbitPlacement(k, "pole", f_in, chosen, m))

        # the {0, inf} orbit: z-powers stay in Lambda only on the open side
        a_k, b_k = eps_part.zero_power, psi_part.zero_power
        m_k = 0
        if a_k and not zero_spec.contains_zero:
            m_k += a_k
        if b_k and not pole_spec.contains_zero:
            m_k -= b_k
        lam_num = lam_num * Poly.monomial(max(m_k, 0))
        lam_den = lam_den * Poly.monomial(max(-m_k, 0))
        lambda_k = RatFun(lam_num, lam_den)

        # reconstructed entry (equals the input exactly on the exact path)
        recon_num = (
            Poly.monomial(a_k)
            * eps_part.poly_on()
            * _orbit_product(zero_orbits)
            * lead
        )
        recon_den = Poly.monomial(b_k) * psi_part.poly_on() * _orbit_product(pole_orbits)
        d_hat = RatFun(recon_num, recon_den)
        if not (eps_part.approximate or psi_part.approximate):
            if d_hat != f:
                raise AssertionError("diagonal reconstruction mismatch")

        sigma_k = d_hat / (
            lambda_k.star() * theta_k.star() * theta_k * lambda_k
        )
        if not sigma_k.is_lpoly:
            raise NotASpectrum(
                f"diagonal entry {k} does not admit a monomial balance; the "
                "input is not the canonic diagonal of a spectrum"
            )
        sig_l = sigma_k.to_lpoly()
        if not sig_l.is_monomial:
            raise NotASpectrum(
                f"diagonal entry {k}: balance {sig_l} is not a monomial"
            )
        sig.append(sig_l)
        lam.append(lambda_k)
        th.append(theta_k)

    return SplitDecomposition(
        Sigma=Matrix.diag(sig),
        Lambda=Matrix.diag(lam),
        Theta=Matrix.diag(th),
        approximate=approximate,
        placements=tuple(placements),
    )


def _orbit_product(orbits) -> Poly:
    out = Poly.one()
    for f_in, f_out, m in orbits:
        out = out * (f_in * f_out) ** m
    return out
