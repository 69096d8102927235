"""Exact real numbers of the form a + b*sqrt(n), a, b rational, n a nonnegative integer.

The invariants g2, g3, g4 of an alpha-vector are of this shape (|x| = sqrt(norm x)),
and the chain of inequalities between them has equality cases that no interval
enclosure can certify. Comparisons here are decided exactly.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from mpmath import iv

from .enclosure import ivprec

__all__ = ["Surd", "sign_radicals"]


def _split_square(n: int) -> tuple[int, int]:
    """n = k^2 * r with r squarefree; returns (k, r)."""
    k, r, p = 1, n, 2
    while p * p <= r:
        while r % (p * p) == 0:
            r //= p * p
            k *= p
        p += 1
    return k, r


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def _sign1(c: Fraction, u: Fraction, p) -> int:
    """sign(c + u*sqrt(p))."""
    s_rad = _sgn(u) if p else 0
    s_c = _sgn(c)
    if s_rad == 0 or s_c == s_rad:
        return s_c or s_rad
    if s_c == 0:
        return s_rad
    d = c * c - u * u * p
    return s_c if d > 0 else (s_rad if d < 0 else 0)


def sign_radicals(c, u, p, v, q) -> int:
    """Exact sign of c + u*sqrt(p) + v*sqrt(q) for rationals c, u, v and integers p, q >= 0."""
    c, u, v = Fraction(c), Fraction(u), Fraction(v)
    if not p or not u:
        return _sign1(c, v, q)
    if not q or not v:
        return _sign1(c, u, p)
    # sign of T = u*sqrt(p) + v*sqrt(q)
    su, sv = _sgn(u), _sgn(v)
    if su == sv:
        st = su
    else:
        d = u * u * p - v * v * q
        st = su if d > 0 else (sv if d < 0 else 0)
    sc = _sgn(c)
    if st == 0 or sc == st:
        return sc or st
    if sc == 0:
        return st
    # opposite signs: compare c^2 with T^2 = u^2 p + v^2 q + 2uv sqrt(pq)
    diff = _sign1(c * c - u * u * p - v * v * q, -2 * u * v, p * q)
    return sc if diff > 0 else (st if diff < 0 else 0)


class Surd:
    """Exact a + b*sqrt(n) with n squarefree (n == 1 folds into the rational part)."""

    __slots__ = ("a", "b", "n")

    def __init__(self, a=0, b=0, n: int = 0):
        a, b = Fraction(a), Fraction(b)
        if n < 0:
            raise ValueError("radicand must be nonnegative")
        if n and b:
            k, r = _split_square(n)
            b *= k
            n = r
            if n == 1:
                a, b, n = a + b, Fraction(0), 0
        else:
            b, n = Fraction(0), 0
        self.a, self.b, self.n = a, b, n

    @classmethod
    def sqrt(cls, x) -> Surd:
        """sqrt of a nonnegative rational."""
        x = Fraction(x)
        if x < 0:
            raise ValueError("negative radicand")
        # sqrt(p/q) = sqrt(p*q)/q
        return cls(0, Fraction(1, x.denominator), x.numerator * x.denominator)

    @property
    def is_rational(self) -> bool:
        return not self.b

    def _coerce(self, other) -> Surd:
        if isinstance(other, Surd):
            return other
        if isinstance(other, (int, Fraction)):
            return Surd(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_rational:
            return Surd(self.a + o.a, self.b, self.n)
        if self.is_rational:
            return Surd(self.a + o.a, o.b, o.n)
        if self.n != o.n:
            raise ValueError("sum of different radicals is not a Surd")
        return Surd(self.a + o.a, self.b + o.b, self.n)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.n)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_rational:
            return Surd(self.a * o.a, self.b * o.a, self.n)
        if self.is_rational:
            return Surd(self.a * o.a, self.a * o.b, o.n)
        if self.n != o.n:
            raise ValueError("product of different radicals is not a Surd")
        return Surd(self.a * o.a + self.b * o.b * self.n, self.a * o.b + self.b * o.a, self.n)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Surd:
        out = Surd(1)
        for _ in range(k):
            out = out * self
        return out

    def sign(self) -> int:
        return _sign1(self.a, self.b, self.n)

    def cmp(self, other) -> int:
        """Exact sign of self - other (the two may carry different radicals)."""
        o = self._coerce(other)
        return sign_radicals(self.a - o.a, self.b, self.n, -o.b, o.n)

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __le__(self, other):
        return self.cmp(other) <= 0

    def __gt__(self, other):
        return self.cmp(other) > 0

    def __ge__(self, other):
        return self.cmp(other) >= 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.cmp(o) == 0

    def __hash__(self):
        return hash((self.a, self.b, self.n))

    def enclose(self, precision: int = 128):
        with ivprec(precision):
            out = iv.mpf(self.a.numerator) / self.a.denominator
            if self.b:
                out += iv.mpf(self.b.numerator) / self.b.denominator * iv.sqrt(self.n)
            return out

    def floor_sqrt_bounds(self) -> tuple[Fraction, Fraction]:
        """Cheap rational lower/upper bounds (used for box sizing, not for proofs)."""
        if not self.b:
            return self.a, self.a
        r = isqrt(self.n)
        lo, hi = (r, r + 1) if self.b > 0 else (r + 1, r)
        return self.a + self.b * lo, self.a + self.b * hi

    def __float__(self):
        return float(self.a) + float(self.b) * self.n ** 0.5

    def __repr__(self):
        if not self.b:
            return f"Surd({self.a})"
        return f"Surd({self.a} + {self.b}*sqrt({self.n}))"

    def __str__(self):
        if not self.b:
            return str(self.a)
        return f"{self.a}+{self.b}*sqrt({self.n})" if self.a else f"{self.b}*sqrt({self.n})"
