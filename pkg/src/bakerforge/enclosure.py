"""Interval and complex-ball enclosures.

Real enclosures are ``mpmath.iv`` intervals; this module adds the handful of
helpers the rest of the package needs on top of them: exact endpoint access,
tri-state comparisons, precision escalation, and a rational complex ball used
for the exponential values.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import mpmath
from mpmath import iv, mp

DEFAULT_PREC = 128
PREC_CAP = 4096

__all__ = [
    "DEFAULT_PREC",
    "PREC_CAP",
    "Indeterminate",
    "ivprec",
    "to_iv",
    "lo",
    "hi",
    "le",
    "lt",
    "iv_max",
    "iv_min",
    "decide",
    "iv_json",
    "iv_str",
    "ComplexBall",
    "sqrt_upper",
]


@contextmanager
def ivprec(bits: int):
    """Temporarily set the working precision of ``mpmath.iv``."""
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


class Indeterminate(ArithmeticError):
    """A comparison could not be decided up to the precision cap."""


def to_iv(x, precision: int = DEFAULT_PREC):
    if isinstance(x, iv.mpf):
        return x
    with ivprec(precision):
        if isinstance(x, Fraction):
            return iv.mpf(x.numerator) / x.denominator
        if isinstance(x, (list, tuple)):
            return iv.mpf([lo(to_iv(x[0], precision)), hi(to_iv(x[1], precision))])
        return iv.mpf(x)


def lo(x) -> mpmath.mpf:
    """Lower endpoint as an exact mpf (no rounding to the global precision)."""
    return mp.make_mpf(to_iv(x)._mpi_[0])


def hi(x) -> mpmath.mpf:
    return mp.make_mpf(to_iv(x)._mpi_[1])


def le(a, b) -> bool | None:
    """True if a <= b on the whole enclosures, False if a > b certainly, else None."""
    a, b = to_iv(a), to_iv(b)
    if hi(a) <= lo(b):
        return True
    if lo(a) > hi(b):
        return False
    return None


def lt(a, b) -> bool | None:
    a, b = to_iv(a), to_iv(b)
    if hi(a) < lo(b):
        return True
    if lo(a) >= hi(b):
        return False
    return None


def iv_max(*xs):
    xs = [to_iv(x) for x in xs]
    a = max(lo(x) for x in xs)
    b = max(hi(x) for x in xs)
    return iv.mpf([a, b])


def iv_min(*xs):
    xs = [to_iv(x) for x in xs]
    return iv.mpf([min(lo(x) for x in xs), min(hi(x) for x in xs)])


def decide(predicate, precision: int = DEFAULT_PREC, cap: int = PREC_CAP) -> bool:
    """Evaluate ``predicate(prec) -> bool | None`` at doubling precision until decided.

    Raises :class:`Indeterminate` when the cap is reached without a decision.
    """
    p = precision
    while True:
        with ivprec(p):
            out = predicate(p)
        if out is not None:
            return bool(out)
        if p >= cap:
            raise Indeterminate(f"undecided at {cap} bits")
        p = min(2 * p, cap)


def iv_str(x, digits: int = 20) -> str:
    x = to_iv(x)
    return f"[{mpmath.nstr(lo(x), digits)}, {mpmath.nstr(hi(x), digits)}]"


def iv_json(x, digits: int = 20) -> list[str]:
    x = to_iv(x)
    return [mpmath.nstr(lo(x), digits), mpmath.nstr(hi(x), digits)]


def sqrt_upper(x: Fraction, bits: int = 64) -> Fraction:
    """A rational upper bound for sqrt(x), tight to about 2**-bits relative."""
    if x <= 0:
        return Fraction(0)
    scale = 1 << (2 * bits)
    n = x.numerator * scale
    d = x.denominator
    r = isqrt(n // d) + 1
    return Fraction(r, 1 << bits)


def _round_dyadic(x: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Round x to a dyadic with ``bits`` fractional bits; returns (value, error bound)."""
    scale = Fraction(2) ** bits
    v = round(x * scale) / scale
    return v, abs(x - v)


@dataclass(frozen=True)
class ComplexBall:
    """Closed disk {z : |z - (re + i*im)| <= rad} with rational centre and radius."""

    re: Fraction
    im: Fraction
    rad: Fraction

    @classmethod
    def exact(cls, re, im=0) -> ComplexBall:
        return cls(Fraction(re), Fraction(im), Fraction(0))

    @classmethod
    def of_element(cls, elt, bits: int) -> ComplexBall:
        """Ball around the complex value of a field element re + im*sqrt(-D)."""
        D = elt.field.D
        if not elt.im:
            return cls(elt.re, Fraction(0), Fraction(0))
        r = isqrt(D)
        if r * r == D:
            return cls(elt.re, elt.im * r, Fraction(0))
        # sqrt(D) in [s, s + 2**-bits]
        s = Fraction(isqrt(D << (2 * bits)), 1 << bits)
        mid = s + Fraction(1, 1 << (bits + 1))
        return cls(elt.re, elt.im * mid, abs(elt.im) * Fraction(1, 1 << (bits + 1)))

    def __add__(self, other: ComplexBall) -> ComplexBall:
        return ComplexBall(self.re + other.re, self.im + other.im, self.rad + other.rad)

    def __sub__(self, other: ComplexBall) -> ComplexBall:
        return ComplexBall(self.re - other.re, self.im - other.im, self.rad + other.rad)

    def abs_mid_upper(self) -> Fraction:
        return sqrt_upper(self.re * self.re + self.im * self.im)

    def __mul__(self, other: ComplexBall) -> ComplexBall:
        re = self.re * other.re - self.im * other.im
        im = self.re * other.im + self.im * other.re
        rad = (
            self.abs_mid_upper() * other.rad
            + other.abs_mid_upper() * self.rad
            + self.rad * other.rad
        )
        return ComplexBall(re, im, rad)

    def rounded(self, bits: int) -> ComplexBall:
        """Shrink the centre to a dyadic with ``bits`` significant bits, widening the radius."""
        mag = max(abs(self.re), abs(self.im), Fraction(1))
        shift = bits - int(mag).bit_length()
        re, e1 = _round_dyadic(self.re, shift)
        im, e2 = _round_dyadic(self.im, shift)
        rad = self.rad + e1 + e2
        # keep the radius itself a short dyadic, rounded up
        rscale = Fraction(2) ** shift
        rad = Fraction(-((-rad * rscale).__floor__())) / rscale if rad else rad
        return ComplexBall(re, im, rad)

    def abs_enclosure(self, precision: int = DEFAULT_PREC):
        """Interval containing |z| for every z in the ball."""
        with ivprec(precision):
            n = self.re * self.re + self.im * self.im
            m = iv.sqrt(iv.mpf(n.numerator) / n.denominator)
            r = iv.mpf(self.rad.numerator) / self.rad.denominator
            low = lo(m - r)
            return iv.mpf([max(low, mpmath.mpf(0)), hi(m + r)])

    def contains_zero(self) -> bool:
        return self.re * self.re + self.im * self.im <= self.rad * self.rad

    def overlaps(self, other: ComplexBall) -> bool:
        dr, di = self.re - other.re, self.im - other.im
        r = self.rad + other.rad
        return dr * dr + di * di <= r * r

    def distance_upper(self, other: ComplexBall, bits: int = 64) -> Fraction:
        dr, di = self.re - other.re, self.im - other.im
        return sqrt_upper(dr * dr + di * di, bits)

    def to_json(self, digits: int = 30) -> dict:
        def s(x: Fraction) -> str:
            return mpmath.nstr(mpmath.mpf(x.numerator) / x.denominator, digits) if x else "0"

        with mp.workprec(max(64, digits * 4)):
            return {"mid_re": s(self.re), "mid_im": s(self.im), "rad": s(self.rad)}
