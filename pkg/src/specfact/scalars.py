"""Exact scalar arithmetic: rationals, polynomials, Laurent polynomials and
reduced rational functions in one variable z.

All coefficients are arbitrary-precision `fractions.Fraction` values, so every
operation in this module is exact.  The three value classes form a coercion
tower

    int / Fraction  ->  Poly  ->  LPoly  ->  RatFun

and binary operators accept anything lower in the tower on either side.
Values are immutable and hashable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

__all__ = [
    "Rat",
    "INF",
    "rat",
    "Poly",
    "LPoly",
    "RatFun",
    "poly_gcd",
    "poly_lcm",
    "split_at_point",
    "valuation",
    "lpoly_star",
    "reciprocal_monic",
]

Rat = Fraction

#: Sentinel for the point at infinity and for the valuation of the zero
#: function.  Compares correctly against integers.
INF = math.inf

Scalar = Union[int, Fraction]


def rat(x) -> Fraction:
    """Coerce ints, strings like ``"3/2"`` and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def _as_frac_tuple(coeffs: Iterable) -> tuple[Fraction, ...]:
    return tuple(rat(c) for c in coeffs)


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Poly:
    """Univariate polynomial over Q, coefficients ascending in z.

    The zero polynomial is the empty coefficient tuple; otherwise the last
    coefficient is nonzero.
    """

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        cs = _as_frac_tuple(self.coeffs)
        while cs and cs[-1] == 0:
            cs = cs[:-1]
        object.__setattr__(self, "coeffs", cs)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> "Poly":
        return cls(())

    @classmethod
    def one(cls) -> "Poly":
        return cls((Fraction(1),))

    @classmethod
    def variable(cls) -> "Poly":
        return cls((Fraction(0), Fraction(1)))

    @classmethod
    def monomial(cls, power: int, coeff=1) -> "Poly":
        if power < 0:
            raise ValueError("Poly powers must be nonnegative")
        c = rat(coeff)
        if c == 0:
            return cls.zero()
        return cls((Fraction(0),) * power + (c,))

    @classmethod
    def from_roots(cls, roots: Sequence, lead=1) -> "Poly":
        p = cls((rat(lead),))
        for r in roots:
            p = p * cls((-rat(r), Fraction(1)))
        return p

    # -- basic structure ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def coeff(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def constant_value(self) -> Fraction:
        if not self.is_constant:
            raise ValueError(f"not a constant polynomial: {self}")
        return self.coeff(0)

    # -- arithmetic ---------------------------------------------------------

    def __bool__(self) -> bool:
        return not self.is_zero

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly((rat(other),))
        if isinstance(other, Poly):
            n = max(len(self.coeffs), len(other.coeffs))
            return Poly(tuple(self.coeff(i) + other.coeff(i) for i in range(n)))
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            return self + (-other if isinstance(other, Poly) else Poly((-rat(other),)))
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = rat(other)
            return Poly(tuple(c * a for a in self.coeffs))
        if isinstance(other, Poly):
            if self.is_zero or other.is_zero:
                return Poly.zero()
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if a == 0:
                    continue
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return Poly(tuple(out))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if not isinstance(other, Poly):
            other = Poly((rat(other),))
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        q = [Fraction(0)] * max(0, self.degree - other.degree + 1)
        r = list(self.coeffs)
        d, lead = other.degree, other.lead
        while len(r) - 1 >= d and any(c != 0 for c in r):
            while r and r[-1] == 0:
                r.pop()
            if len(r) - 1 < d:
                break
            k = len(r) - 1 - d
            f = r[-1] / lead
            q[k] = f
            for i, c in enumerate(other.coeffs):
                r[k + i] -= f * c
            r.pop()
        return Poly(tuple(q)), Poly(tuple(r))

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero:
            raise ValueError(f"inexact polynomial division: {self} by {other}")
        return q

    def divides(self, other: "Poly") -> bool:
        if self.is_zero:
            return other.is_zero
        return divmod(other, self)[1].is_zero

    def monic(self) -> "Poly":
        if self.is_zero:
            return self
        return self * (1 / self.lead)

    # -- evaluation & transforms -------------------------------------------

    def __call__(self, x):
        """Evaluate by Horner's rule; x may be Fraction, int, float, complex."""
        acc = 0 if not isinstance(x, complex) else 0j
        for c in reversed(self.coeffs):
            acc = acc * x + (complex(c) if isinstance(x, complex) else c)
        return acc

    def reverse(self) -> "Poly":
        """Coefficient reversal z^deg * p(1/z) (zero stays zero)."""
        return Poly(tuple(reversed(self.coeffs)))

    def shift(self, k: int) -> "LPoly":
        """Multiply by z^k, yielding a Laurent polynomial."""
        return LPoly(k, self.coeffs)

    def to_lpoly(self) -> "LPoly":
        return LPoly(0, self.coeffs)

    def to_ratfun(self) -> "RatFun":
        return RatFun(self, Poly.one())

    def float_coeffs(self) -> list[float]:
        return [float(c) for c in self.coeffs]

    def __str__(self) -> str:
        return _format_terms(enumerate(self.coeffs))

    __repr__ = __str__


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LPoly:
    """Laurent polynomial: coeffs[i] multiplies z**(minpow + i).

    Zero is (minpow=0, empty coeffs); otherwise the first and last
    coefficients are nonzero, so minpow is the minimum degree and
    minpow + len(coeffs) - 1 the maximum degree.
    """

    minpow: int = 0
    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        cs = _as_frac_tuple(self.coeffs)
        mp = self.minpow
        while cs and cs[-1] == 0:
            cs = cs[:-1]
        while cs and cs[0] == 0:
            cs = cs[1:]
            mp += 1
        if not cs:
            mp = 0
        object.__setattr__(self, "coeffs", cs)
        object.__setattr__(self, "minpow", mp)

    @classmethod
    def zero(cls) -> "LPoly":
        return cls(0, ())

    @classmethod
    def one(cls) -> "LPoly":
        return cls(0, (Fraction(1),))

    @classmethod
    def monomial(cls, power: int, coeff=1) -> "LPoly":
        c = rat(coeff)
        if c == 0:
            return cls.zero()
        return cls(power, (c,))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def min_degree(self) -> int:
        if self.is_zero:
            raise ValueError("zero Laurent polynomial has no minimum degree")
        return self.minpow

    @property
    def max_degree(self) -> int:
        if self.is_zero:
            raise ValueError("zero Laurent polynomial has no maximum degree")
        return self.minpow + len(self.coeffs) - 1

    @property
    def is_constant(self) -> bool:
        return self.is_zero or (self.minpow == 0 and len(self.coeffs) == 1)

    def constant_value(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        if not self.is_constant:
            raise ValueError(f"not a constant: {self}")
        return self.coeffs[0]

    @property
    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    def coeff(self, power: int) -> Fraction:
        i = power - self.minpow
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    # -- arithmetic ---------------------------------------------------------

    def __bool__(self) -> bool:
        return not self.is_zero

    @staticmethod
    def _coerce(other):
        if isinstance(other, (int, Fraction)):
            return LPoly(0, (rat(other),))
        if isinstance(other, Poly):
            return other.to_lpoly()
        if isinstance(other, LPoly):
            return other
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero:
            return o
        if o.is_zero:
            return self
        lo = min(self.minpow, o.minpow)
        hi = max(self.max_degree, o.max_degree)
        return LPoly(lo, tuple(self.coeff(k) + o.coeff(k) for k in range(lo, hi + 1)))

    __radd__ = __add__

    def __neg__(self) -> "LPoly":
        return LPoly(self.minpow, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero or o.is_zero:
            return LPoly.zero()
        a = Poly(self.coeffs) * Poly(o.coeffs)
        return LPoly(self.minpow + o.minpow, a.coeffs)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LPoly":
        if n < 0:
            if not self.is_monomial:
                raise ValueError("negative power of a non-monomial Laurent polynomial")
            return LPoly(self.minpow * n, (self.coeffs[0] ** n,))
        result = LPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def exact_div(self, other: "LPoly") -> "LPoly":
        """Exact division in the Laurent ring (z is a unit)."""
        o = self._coerce(other)
        if o is None or o.is_zero:
            raise ZeroDivisionError("Laurent division by zero")
        if self.is_zero:
            return LPoly.zero()
        q = Poly(self.coeffs).exact_div(Poly(o.coeffs))
        return LPoly(self.minpow - o.minpow, q.coeffs)

    def star(self) -> "LPoly":
        """Substitution z -> 1/z: reverses coefficients, negates degrees."""
        if self.is_zero:
            return self
        return LPoly(-self.max_degree, tuple(reversed(self.coeffs)))

    def __call__(self, x):
        base = Poly(self.coeffs)(x)
        return base * (x ** self.minpow)

    def to_poly(self) -> Poly:
        if self.is_zero:
            return Poly.zero()
        if self.minpow < 0:
            raise ValueError(f"not a polynomial: {self}")
        return Poly((Fraction(0),) * self.minpow + self.coeffs)

    def to_ratfun(self) -> "RatFun":
        if self.is_zero:
            return RatFun.zero()
        if self.minpow >= 0:
            return RatFun(self.to_poly(), Poly.one())
        return RatFun(Poly(self.coeffs), Poly.monomial(-self.minpow))

    def __str__(self) -> str:
        return _format_terms((self.minpow + i, c) for i, c in enumerate(self.coeffs))

    __repr__ = __str__


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RatFun:
    """Reduced rational function num/den with monic denominator.

    gcd(num, den) = 1 always holds; the zero function is 0/1.
    """

    num: Poly
    den: Poly

    def __post_init__(self):
        num, den = self.num, self.den
        if not isinstance(num, Poly):
            num = Poly((rat(num),)) if isinstance(num, (int, Fraction)) else Poly(num)
        if not isinstance(den, Poly):
            den = Poly((rat(den),)) if isinstance(den, (int, Fraction)) else Poly(den)
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero:
            num, den = Poly.zero(), Poly.one()
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
            lc = den.lead
            if lc != 1:
                num = num * (1 / lc)
                den = den * (1 / lc)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def zero(cls) -> "RatFun":
        return cls(Poly.zero(), Poly.one())

    @classmethod
    def one(cls) -> "RatFun":
        return cls(Poly.one(), Poly.one())

    @classmethod
    def constant(cls, c) -> "RatFun":
        return cls(Poly((rat(c),)), Poly.one())

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_constant(self) -> bool:
        return self.num.is_constant and self.den.is_constant

    def constant_value(self) -> Fraction:
        if not self.is_constant:
            raise ValueError(f"not a constant: {self}")
        return self.num.coeff(0)

    def __bool__(self) -> bool:
        return not self.is_zero

    @staticmethod
    def _coerce(other):
        if isinstance(other, (int, Fraction)):
            return RatFun.constant(other)
        if isinstance(other, Poly):
            return other.to_ratfun()
        if isinstance(other, LPoly):
            return other.to_ratfun()
        if isinstance(other, RatFun):
            return other
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFun(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFun":
        return RatFun(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFun(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFun(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int) -> "RatFun":
        if n < 0:
            return (RatFun.one() / self) ** (-n)
        return RatFun(self.num ** n, self.den ** n)

    def inverse(self) -> "RatFun":
        return RatFun.one() / self

    # -- transforms ---------------------------------------------------------

    def star(self) -> "RatFun":
        """Substitution z -> 1/z, exactly."""
        if self.is_zero:
            return self
        dn, dd = self.num.degree, self.den.degree
        num = self.num.reverse()
        den = self.den.reverse()
        if dd >= dn:
            num = num * Poly.monomial(dd - dn)
        else:
            den = den * Poly.monomial(dn - dd)
        return RatFun(num, den)

    subs_inv = star

    def __call__(self, x):
        dv = self.den(x)
        return self.num(x) / dv

    def to_lpoly(self) -> LPoly:
        """Convert when the denominator is a monomial z^k."""
        if self.is_zero:
            return LPoly.zero()
        if any(c != 0 for c in self.den.coeffs[:-1]):
            raise ValueError(f"denominator is not a monomial: {self}")
        return LPoly(-self.den.degree, self.num.coeffs)

    @property
    def is_lpoly(self) -> bool:
        return self.is_zero or all(c == 0 for c in self.den.coeffs[:-1])

    def to_poly(self) -> Poly:
        if self.den.degree != 0:
            raise ValueError(f"not a polynomial: {self}")
        return self.num

    def __str__(self) -> str:
        if self.den == Poly.one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__


# ---------------------------------------------------------------------------
# GCDs (subresultant pseudo-remainder sequence over the integers)
# ---------------------------------------------------------------------------

def _clear_denominators(p: Poly) -> list[int]:
    lcm = 1
    for c in p.coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in p.coeffs]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def _int_deg(a: list[int]) -> int:
    return len(a) - 1


def _int_prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of integer polynomials (lists, ascending)."""
    r = list(a)
    d = _int_deg(a) - _int_deg(b)
    lb = b[-1]
    for _ in range(d + 1):
        if _int_deg(r) < _int_deg(b):
            r = [c * lb for c in r]
            continue
        lr = r[-1]
        k = _int_deg(r) - _int_deg(b)
        r = [c * lb for c in r]
        for i, c in enumerate(b):
            r[k + i] -= lr * c
        while r and r[-1] == 0:
            r.pop()
        if not r:
            return r
    return r


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic GCD via the subresultant PRS to control coefficient growth."""
    if a.is_zero:
        return b.monic()
    if b.is_zero:
        return a.monic()
    A = _clear_denominators(a)
    B = _clear_denominators(b)
    if _int_deg(A) < _int_deg(B):
        A, B = B, A
    g, h = 1, 1
    while True:
        d = _int_deg(A) - _int_deg(B)
        R = _int_prem(A, B)
        if not R:
            break
        if _int_deg(R) == 0:
            B = [1]
            break
        div = g * h ** d
        A, B = B, [c // div for c in R]
        g = A[-1]
        if d == 1:
            h = g
        elif d > 1:
            h = g ** d // h ** (d - 1)
    cont = 0
    for v in B:
        cont = math.gcd(cont, v)
    B = [v // cont for v in B]
    return Poly(tuple(Fraction(v) for v in B)).monic()


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero or b.is_zero:
        return Poly.zero()
    g = poly_gcd(a, b)
    return (a * b).exact_div(g).monic()


# ---------------------------------------------------------------------------
# Valuations
# ---------------------------------------------------------------------------

def split_at_point(p: Poly, alpha) -> tuple[int, Poly]:
    """Write p(z) = (z - alpha)^nu * cofactor(z) with cofactor(alpha) != 0.

    Exact synthetic division; p must be nonzero.
    """
    if p.is_zero:
        raise ValueError("cannot split the zero polynomial")
    a = rat(alpha)
    nu = 0
    cur = p
    while True:
        if cur(a) != 0:
            return nu, cur
        cur = cur.exact_div(Poly((-a, Fraction(1))))
        nu += 1


def valuation(f, alpha):
    """Valuation of a rational function at a finite rational point or INF.

    Returns INF for the zero function; negative values flag a pole of
    multiplicity -v, positive values a zero of multiplicity v.
    """
    g = RatFun._coerce(f)
    if g is None:
        raise TypeError(f"not a rational-function value: {f!r}")
    if g.is_zero:
        return INF
    if alpha is INF or (isinstance(alpha, float) and math.isinf(alpha)):
        return g.den.degree - g.num.degree
    a = rat(alpha)
    vn, _ = split_at_point(g.num, a)
    vd, _ = split_at_point(g.den, a)
    return vn - vd


def lpoly_star(p: LPoly) -> LPoly:
    """Star of a scalar Laurent polynomial: p(z) -> p(1/z)."""
    if isinstance(p, Poly):
        p = p.to_lpoly()
    return p.star()


def reciprocal_monic(p: Poly) -> Poly:
    """Monic polynomial whose roots are the reciprocals of p's roots.

    Requires p monic with p(0) != 0.
    """
    if p.is_zero or p.coeff(0) == 0:
        raise ValueError("reciprocal requires a nonzero constant term")
    return p.reverse().monic()


# ---------------------------------------------------------------------------
# Pretty-printing
# ---------------------------------------------------------------------------

def _format_terms(terms) -> str:
    parts = []
    for power, c in terms:
        if c == 0:
            continue
        if power == 0:
            s = str(c)
        else:
            zs = "z" if power == 1 else ("z^-1" if power == -1 else f"z^{power}")
            if c == 1:
                s = zs
            elif c == -1:
                s = f"-{zs}"
            else:
                s = f"{c}*{zs}"
        parts.append(s)
    if not parts:
        return "0"
    out = parts[0]
    for s in parts[1:]:
        out += f" - {s[1:]}" if s.startswith("-") else f" + {s}"
    return out
