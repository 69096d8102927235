"""Exact arithmetic in Z, in the ring of integers of Q(sqrt(-D)), and in the field itself.

Three value types live here:

* :class:`FieldSpec`   -- the base field, either Q or Q(sqrt(-D)) with D squarefree.
* :class:`QuadInt`     -- an algebraic integer a + b*w in the integral basis of the field.
* :class:`FieldElement` -- an arbitrary field element re + im*sqrt(-D) with rational coordinates.

For D = 3 (mod 4) the integral basis is w = (1 + sqrt(-D))/2, otherwise w = sqrt(-D).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from mpmath import iv

from .enclosure import ivprec

__all__ = [
    "FieldSpec",
    "QuadInt",
    "FieldElement",
    "AlphaPoint",
    "RATIONALS",
    "qi_arith",
    "qi_abs",
    "alpha_normalize",
    "parse_field",
    "parse_element",
    "parse_alpha",
    "parse_alpha_list",
]


def _squarefree(n: int) -> bool:
    if n < 1:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Q (``D == 0``) or the imaginary quadratic field Q(sqrt(-D))."""

    D: int = 0

    def __post_init__(self):
        if self.D != 0 and not _squarefree(self.D):
            raise ValueError(f"D must be a positive squarefree integer, got {self.D}")

    @property
    def is_rational(self) -> bool:
        return self.D == 0

    @property
    def kind(self) -> str:
        return "rationals" if self.is_rational else "imaginary_quadratic"

    @property
    def residue(self) -> int | None:
        return None if self.is_rational else self.D % 4

    @property
    def basis(self) -> str:
        return "half_integer" if self.residue == 3 else "1_and_sqrt"

    @property
    def half(self) -> bool:
        return self.residue == 3

    @cached_property
    def units(self) -> tuple[QuadInt, ...]:
        one = QuadInt(self, 1, 0)
        if self.D == 1:
            gens = [one, QuadInt(self, 0, 1)]
            return tuple(gens + [-g for g in gens])
        if self.D == 3:
            w = QuadInt(self, 0, 1)
            w2 = w * w
            return (one, w, w2, -one, -w, -w2)
        return (one, -one)

    def __str__(self) -> str:
        return "Q" if self.is_rational else f"Q(sqrt(-{self.D}))"

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if not self.is_rational:
            out.update(D=self.D, residue=self.residue, basis=self.basis)
        return out


RATIONALS = FieldSpec(0)


def _check_same(x, y):
    if x.field != y.field:
        raise ValueError(f"field mismatch: {x.field} vs {y.field}")


class QuadInt:
    """An element a + b*w of the ring of integers (b == 0 over Q)."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field: FieldSpec, a: int, b: int = 0):
        if field.is_rational and b != 0:
            raise ValueError("rational integers have b == 0")
        self.field = field
        self.a = int(a)
        self.b = int(b)

    @classmethod
    def from_json(cls, field: FieldSpec, obj) -> QuadInt:
        if isinstance(obj, (int, str)):
            return cls(field, int(obj))
        basis = obj.get("basis")
        if basis is not None and basis != field.basis and not field.is_rational:
            raise ValueError(f"basis {basis!r} does not match {field}")
        return cls(field, int(obj["a"]), int(obj.get("b", 0)))

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "basis": self.field.basis}

    def _coerce(self, other) -> QuadInt:
        if isinstance(other, QuadInt):
            _check_same(self, other)
            return other
        if isinstance(other, int):
            return QuadInt(self.field, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadInt(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadInt(self.field, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadInt(self.field, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a1, b1, a2, b2 = self.a, self.b, o.a, o.b
        D = self.field.D
        if self.field.half:
            # w^2 = w - (1 + D)/4
            q = (1 + D) // 4
            return QuadInt(self.field, a1 * a2 - q * b1 * b2, a1 * b2 + a2 * b1 + b1 * b2)
        return QuadInt(self.field, a1 * a2 - D * b1 * b2, a1 * b2 + a2 * b1)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers leave the ring")
        out = QuadInt(self.field, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadInt):
            return self.field == other.field and self.a == other.a and self.b == other.b
        if isinstance(other, FieldElement):
            return self.to_element() == other
        return NotImplemented

    def __hash__(self):
        return hash((self.field.D, self.a, self.b))

    def __bool__(self):
        return bool(self.a or self.b)

    def norm(self) -> int:
        """|z|^2, always a nonnegative rational integer."""
        D = self.field.D
        if self.field.half:
            return self.a * self.a + self.a * self.b + self.b * self.b * ((1 + D) // 4)
        return self.a * self.a + D * self.b * self.b

    def conjugate(self) -> QuadInt:
        if self.field.half:
            return QuadInt(self.field, self.a + self.b, -self.b)
        return QuadInt(self.field, self.a, -self.b)

    def to_element(self) -> FieldElement:
        if self.field.half:
            return FieldElement(self.field, Fraction(2 * self.a + self.b, 2), Fraction(self.b, 2))
        return FieldElement(self.field, Fraction(self.a), Fraction(self.b))

    def coords(self) -> tuple[int, int]:
        return (self.a, self.b)

    def __repr__(self):
        return f"QuadInt({self.field.D}, {self.a}, {self.b})"

    def __str__(self):
        return str(self.to_element())


class FieldElement:
    """re + im*sqrt(-D) with rational coordinates (im == 0 over Q)."""

    __slots__ = ("field", "re", "im")

    def __init__(self, field: FieldSpec, re=0, im=0):
        self.field = field
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)
        if field.is_rational and self.im:
            raise ValueError("rational field elements have im == 0")

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                _check_same(self, other)
            return other
        if isinstance(other, QuadInt):
            _check_same(self, other)
            return other.to_element()
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, -self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, self.re * other, self.im * other)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.im and not o.im:
            return FieldElement(self.field, self.re * o.re)
        D = self.field.D
        return FieldElement(
            self.field,
            self.re * o.re - D * self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        n = self.norm()
        if not n:
            raise ZeroDivisionError("inverse of zero")
        return FieldElement(self.field, self.re / n, -self.im / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, self.re / other, self.im / other)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = FieldElement(self.field, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return not self.im and self.re == other
        if isinstance(other, QuadInt):
            other = other.to_element()
        if isinstance(other, FieldElement):
            return self.field == other.field and self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.field.D, self.re, self.im))

    def __bool__(self):
        return bool(self.re or self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.field.D * self.im * self.im

    def conjugate(self) -> FieldElement:
        return FieldElement(self.field, self.re, -self.im)

    def is_integral(self) -> bool:
        re_, im_ = self.re, self.im
        if self.field.half:
            r2, i2 = 2 * re_, 2 * im_
            return (
                r2.denominator == 1
                and i2.denominator == 1
                and (r2.numerator - i2.numerator) % 2 == 0
            )
        return re_.denominator == 1 and im_.denominator == 1

    def to_quadint(self) -> QuadInt:
        if not self.is_integral():
            raise ValueError(f"{self} is not an algebraic integer of {self.field}")
        if self.field.half:
            b = int(2 * self.im)
            return QuadInt(self.field, int(self.re - self.im), b)
        return QuadInt(self.field, int(self.re), int(self.im))

    def denominator(self) -> int:
        """Smallest positive integer y with y*self integral."""
        if self.field.half:
            y0 = math.lcm((2 * self.re).denominator, (2 * self.im).denominator)
            return y0 if (self * y0).is_integral() else 2 * y0
        return math.lcm(self.re.denominator, self.im.denominator)

    def __repr__(self):
        return f"FieldElement({self.field.D}, {self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        unit = "i" if self.field.D == 1 else f"sqrt(-{self.field.D})"
        sign = "+" if self.im > 0 else "-"
        mag = abs(self.im)
        coef = "" if mag == 1 else f"{mag}*"
        head = f"{self.re}{sign}" if self.re else ("-" if sign == "-" else "")
        return f"{head}{coef}{unit}"


def qi_arith(lhs: QuadInt, rhs: QuadInt, op: str) -> QuadInt:
    """Exact ring operation ``op`` in {"add", "sub", "mul"}; raises on basis mismatch."""
    if lhs.field.basis != rhs.field.basis or lhs.field != rhs.field:
        raise ValueError("basis mismatch")
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    raise ValueError(f"unknown op {op!r}")


def qi_abs(z: QuadInt | FieldElement, precision: int = 128):
    """Interval enclosure of |z| = sqrt(norm(z))."""
    if precision < 8:
        raise ValueError("precision must be at least 8 bits")
    n = z.norm()
    with ivprec(precision):
        if isinstance(n, Fraction):
            return iv.sqrt(iv.mpf(n.numerator) / n.denominator)
        return iv.sqrt(iv.mpf(n))


@dataclass(frozen=True)
class AlphaPoint:
    """alpha = x/y with y the minimal positive integer making y*alpha integral."""

    x: QuadInt
    y: int

    def __post_init__(self):
        if self.y < 1:
            raise ValueError("denominator must be positive")

    @property
    def field(self) -> FieldSpec:
        return self.x.field

    @cached_property
    def value(self) -> FieldElement:
        return self.x.to_element() / self.y

    def to_json(self) -> dict:
        return {**self.x.to_json(), "y": self.y}

    @classmethod
    def from_json(cls, field: FieldSpec, obj) -> AlphaPoint:
        return alpha_normalize(QuadInt.from_json(field, obj), int(obj.get("y", 1)))

    def __str__(self):
        return str(self.value)


def alpha_normalize(num, den: int = 1) -> AlphaPoint:
    """Reduce num/den to (x, y) with y minimal; ``num`` is a QuadInt or FieldElement."""
    if den < 1:
        raise ValueError("denominator must be positive")
    elt = num.to_element() if isinstance(num, QuadInt) else num
    value = elt / den
    y = value.denominator()
    return AlphaPoint((value * y).to_quadint(), y)


# -- parsing -----------------------------------------------------------------

_FIELD_RE = re.compile(
    r"^Q(?:\((?:sqrt\s*,?\s*\(?\s*-\s*(?P<d1>\d+)\s*\)?|i|sqrt\s*\(\s*-\s*(?P<d2>\d+)\s*\))\))?$"
)


def parse_field(text: str) -> FieldSpec:
    """Parse ``Q``, ``Q(i)``, ``Q(sqrt,-1)`` or ``Q(sqrt(-3))``."""
    t = text.strip().replace(" ", "")
    m = _FIELD_RE.match(t)
    if not m:
        raise ValueError(f"cannot parse field spec {text!r}")
    d = m.group("d1") or m.group("d2")
    if d is None:
        return FieldSpec(1) if t == "Q(i)" else RATIONALS
    return FieldSpec(int(d))


_TERM_RE = re.compile(r"([+-]?)(\d*)\*?(sqrt\(-\d+\)|i|w|s)?")


def parse_element(field: FieldSpec, text: str) -> FieldElement:
    """Parse an element such as ``3``, ``1+i``, ``2-3w``, ``-s`` or ``1+2*sqrt(-7)``.

    ``i`` needs D = 1, ``w`` is the half-integer generator (D = 3 mod 4) and
    ``s`` / ``sqrt(-D)`` stands for sqrt(-D).
    """
    t = text.replace(" ", "")
    if t.startswith("(") and t.endswith(")"):
        t = t[1:-1]
    if not t:
        raise ValueError("empty element")
    total = FieldElement(field)
    pos = 0
    while pos < len(t):
        m = _TERM_RE.match(t, pos)
        if not m or m.end() == pos or (not m.group(2) and not m.group(3)):
            raise ValueError(f"cannot parse element {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef = int(m.group(2)) if m.group(2) else 1
        unit = m.group(3)
        if unit is None:
            term = FieldElement(field, coef)
        else:
            if field.is_rational:
                raise ValueError(f"{text!r} is not rational")
            if unit == "i" and field.D != 1:
                raise ValueError("'i' is only meaningful in Q(i)")
            if unit == "w":
                if not field.half:
                    raise ValueError("'w' needs D = 3 (mod 4)")
                term = QuadInt(field, 0, coef).to_element()
            else:
                if unit.startswith("sqrt") and int(unit[6:-1]) != field.D:
                    raise ValueError(f"{unit} does not belong to {field}")
                term = FieldElement(field, 0, coef)
        total = total + term * sign
        pos = m.end()
    return total


def parse_alpha(field: FieldSpec, text: str) -> AlphaPoint:
    """Parse ``num`` or ``num/den``; the whole numerator is divided, so ``1+i/3`` is (1+i)/3."""
    t = text.strip()
    if "/" in t:
        num, den = t.rsplit("/", 1)
        return alpha_normalize(parse_element(field, num), int(den))
    return alpha_normalize(parse_element(field, t), 1)


def parse_alpha_list(field: FieldSpec, text: str) -> list[AlphaPoint]:
    return [parse_alpha(field, tok) for tok in text.split(",") if tok.strip()]
