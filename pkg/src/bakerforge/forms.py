"""Numerical linear forms L_kj = B_k0 e^{alpha_j} + B_kj from a Pade system.

B_kj = g1^L A_{s(k),j}(1) are exact ring integers. Each remainder is enclosed
twice: once through a certified ball for e^{alpha_j} (Taylor series with an
explicit tail bound) and once by summing the remainder series
g1^L R_{s(k),j}(1) directly with its own tail bound. The two balls must
overlap; the direct one is kept as the reported enclosure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from mpmath import iv

from . import poly
from .enclosure import DEFAULT_PREC, PREC_CAP, ComplexBall, hi, iv_json, ivprec, le, sqrt_upper
from .field import FieldElement, QuadInt
from .invariants import BaseConstants
from .pade import DerivedFamily, PadeSystem

__all__ = [
    "NumericalForms",
    "exp_ball",
    "evaluate_forms",
    "check_raw_bounds",
    "check_qr_bounds",
    "q_of_L",
    "minus_r_of_l",
    "residual_sequence",
]


def _elt(b) -> FieldElement:
    return b.to_element() if isinstance(b, QuadInt) else b


def _abs_upper(elt: FieldElement) -> Fraction:
    return sqrt_upper(elt.norm())


def _tail_exp(amax: Fraction, n0: int) -> Fraction | None:
    """Upper bound for sum_{n >= n0} amax^n / n!, or None if the geometric bound does not apply yet."""
    if amax >= n0 + 1:
        return None
    lead = amax**n0 / math.factorial(n0)
    return lead / (1 - amax / (n0 + 1))


def _exp_taylor(b: ComplexBall, guard: int) -> ComplexBall:
    """e^b for |b| <= 1/2: Taylor sum with the tail bound added to the radius."""
    bmax = b.abs_mid_upper() + b.rad
    target = Fraction(1, 2**guard)
    s = ComplexBall.exact(1)
    t = ComplexBall.exact(1)
    n = 0
    while True:
        n += 1
        t = (t * b * ComplexBall.exact(Fraction(1, n))).rounded(guard)
        s = s + t
        tail = _tail_exp(bmax, n + 1)
        if tail is not None and tail <= target:
            return ComplexBall(s.re, s.im, s.rad + tail).rounded(guard)


def exp_ball(alpha: FieldElement, bits: int) -> ComplexBall:
    """Ball around e^alpha with radius at most 2^-bits |e^alpha|.

    The argument is halved r times to |alpha| / 2^r <= 1/2 and the Taylor value
    is squared back, so no cancellation between large terms occurs. Guard bits
    cover the squarings and the scale e^{+-|alpha|}; they grow until the
    relative radius is certified.
    """
    amax = _abs_upper(alpha)
    r = 0
    while amax > Fraction(1, 2) * 2**r:
        r += 1
    extra = 40 + 2 * r + math.ceil(2 * amax)
    while True:
        guard = bits + extra
        a = ComplexBall.of_element(alpha * Fraction(1, 2**r), guard)
        e = _exp_taylor(a, guard)
        for _ in range(r):
            e = (e * e).rounded(guard)
        # |e^alpha| >= |mid| - rad
        n = e.re * e.re + e.im * e.im
        low = sqrt_upper(n, guard) - Fraction(1, 2**guard) - e.rad
        if low > 0 and e.rad <= low * Fraction(1, 2**bits):
            return e
        extra *= 2


@dataclass
class NumericalForms:
    B: list[list[QuadInt | FieldElement]]  # FieldElement only where integrality fails
    Lrem: list[list[ComplexBall]]  # Lrem[k][j-1]
    via_exp: list[list[ComplexBall]]
    precision: int
    det: FieldElement
    selected: tuple[int, ...]
    checks: dict
    flags: list[str] = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "precision": self.precision,
            "selected": list(self.selected),
            "B": [[b.to_json() if isinstance(b, QuadInt) else str(b) for b in row] for row in self.B],
            "L": [[x.to_json() for x in row] for row in self.Lrem],
            "det_B": str(self.det),
            "checks": self.checks,
            "flags": self.flags,
        }


def _direct_remainder(row, j: int, alpha_j: FieldElement, scale: int, bits: int) -> ComplexBall:
    """g1^L R_{s,j}(1) by exact partial summation of its Taylor coefficients plus a tail bound."""
    field = alpha_j.field
    A0, Aj = row[0], row[j]
    amax = _abs_upper(alpha_j)
    coeff_abs = [_abs_upper(x) for x in A0]
    target = Fraction(1, 2 ** (bits + 8))
    nmax = max(len(A0), len(Aj)) + 8
    while True:
        tail = Fraction(0)
        ok = True
        for h, ah in enumerate(coeff_abs):
            if not ah:
                continue
            t = _tail_exp(amax, nmax + 1 - h)
            if t is None:
                ok = False
                break
            tail += ah * t
        if ok and tail * scale <= target:
            break
        nmax += 8
    # sum_{N<=nmax} [A0 e^{alpha t}]_N = sum_h A0[h] E_{nmax-h}, E_n the exp partial sums
    partial = []
    acc = FieldElement(field, 0, 0)
    for x in poly.exp_powers(alpha_j, nmax):
        acc = acc + x
        partial.append(acc)
    total = FieldElement(field, 0, 0)
    for h, a in enumerate(A0):
        if a and h <= nmax:
            total = total + a * partial[nmax - h]
    for x in Aj[: nmax + 1]:
        total = total + x
    ball = ComplexBall.of_element(total * scale, bits + 32)
    return ComplexBall(ball.re, ball.im, ball.rad + tail * scale).rounded(bits + 32)


def _residual(b1: ComplexBall, b2: ComplexBall, bits: int) -> Fraction:
    return b1.distance_upper(b2, bits + 32) + b1.rad + b2.rad


def evaluate_forms(sys: PadeSystem, family: DerivedFamily, precision: int = DEFAULT_PREC, cap: int = PREC_CAP) -> NumericalForms:
    if family.selected is None:
        raise ValueError("no index selection available")
    alpha = sys.alpha
    field = alpha.field
    m = alpha.m
    L = sys.params.L
    scale = sys.g.g1**L
    flags = []
    B = []
    non_integral = []
    for k in family.selected:
        row = []
        for j in range(m + 1):
            v = family.values[k][j] * scale
            if v.is_integral():
                row.append(v.to_quadint())
            else:
                # g1^L clears alpha_j^n only for n <= L; rows past k = nu_j can carry alpha_j^{L+k}
                non_integral.append([k, j])
                row.append(v)
        B.append(row)
    integral = not non_integral
    if not integral:
        flags.append(f"B_kj not integral at (k, j) = {non_integral}")
    det = poly.det_field([[_elt(b) for b in row] for row in B], field)

    def compute(bits):
        exps = [exp_ball(alpha.values[j], bits) for j in range(1, m + 1)]
        direct, via = [], []
        for idx, k in enumerate(family.selected):
            row_poly = family.polys[k]
            d_row, v_row = [], []
            for j in range(1, m + 1):
                b0 = ComplexBall.of_element(_elt(B[idx][0]), bits + 32)
                bj = ComplexBall.of_element(_elt(B[idx][j]), bits + 32)
                v_row.append((b0 * exps[j - 1] + bj).rounded(bits + 32))
                d_row.append(_direct_remainder(row_poly, j, alpha.values[j], scale, bits))
            direct.append(d_row)
            via.append(v_row)
        return direct, via

    # with B_k0 = 0 the form is the exact integer B_kj and may legitimately vanish;
    # otherwise it is nonzero (e^alpha_j is transcendental) and worth separating from 0
    def unresolved(direct):
        return [
            (idx, j)
            for idx, row in enumerate(direct)
            for j, x in enumerate(row, start=1)
            if B[idx][0].norm() and x.contains_zero()
        ]

    bits = precision
    while True:
        direct, via = compute(bits)
        if not unresolved(direct) or bits >= cap:
            break
        bits = min(2 * bits, cap)
    if unresolved(direct):
        flags.append(f"some remainder not separated from 0 at {bits} bits")
    if bits != precision:
        flags.append(f"precision raised to {bits} bits")
    overlap = all(d.overlaps(v) for dr, vr in zip(direct, via) for d, v in zip(dr, vr))
    checks = {"integral": integral, "det_nonzero": bool(det), "routes_agree": overlap}
    return NumericalForms(B, direct, via, bits, det, family.selected, checks, flags)


def residual_sequence(sys: PadeSystem, family: DerivedFamily, levels=(64, 128, 256)) -> list[Fraction]:
    """max over (k, j) of |route1 - route2| + radii, at each precision level."""
    out = []
    for bits in levels:
        f = evaluate_forms(sys, family, bits, cap=bits)
        out.append(max(_residual(d, v, bits) for dr, vr in zip(f.Lrem, f.via_exp) for d, v in zip(dr, vr)))
    return out


def _max_c(sys: PadeSystem):
    return iv.sqrt(iv.mpf(sys.max_c_norm))


def check_raw_bounds(sys: PadeSystem, family: DerivedFamily, forms: NumericalForms, precision: int = DEFAULT_PREC) -> dict:
    """|B_k0| <= e g1^L L! max|c_h|; |L_kj| <= g1^L (1+|a_j|)^V e^{1+|a_j|} L!/V! max|c_h| with V = L+nu_j+1-s(k); s(k) <= cap."""
    L = sys.params.L
    m = sys.alpha.m
    g1L = sys.g.g1**L
    den_ok, rem_ok = [], []
    clamped = False
    with ivprec(precision):
        mc = _max_c(sys)
        fL = math.factorial(L)
        for idx, k in enumerate(forms.selected):
            n0 = Fraction(forms.B[idx][0].norm())
            b0 = iv.sqrt(iv.mpf(n0.numerator) / n0.denominator)
            r = le(b0, iv.e * g1L * fL * mc)
            den_ok.append(True if r is None else r)
            for j in range(1, m + 1):
                V = L + sys.params.nu[j - 1] + 1 - k
                if V < 0:
                    clamped = True
                    V = 0
                aj = iv.sqrt(iv.mpf(sys.alpha.values[j].norm().numerator) / sys.alpha.values[j].norm().denominator)
                bound = g1L * (1 + aj) ** V * iv.exp(1 + aj) * fL / math.factorial(V) * mc
                upper = hi(forms.Lrem[idx][j - 1].abs_enclosure(precision))
                r = le(iv.mpf(upper), bound)
                rem_ok.append(True if r is None else r)
    cap_ok = all(k <= family.cap for k in forms.selected)
    out = {
        "denominator_bound": all(den_ok),
        "remainder_bound": all(rem_ok),
        "index_cap": cap_ok,
        "cap": family.cap,
        "max_c_norm": sys.max_c_norm,
        "coefficient_bound": iv_json(sys.bound),
        "coefficient_bound_met": sys.bound_met,
        "negative_V_clamped": clamped,
    }
    out["all"] = out["denominator_bound"] and out["remainder_bound"] and cap_ok
    return out


def q_of_L(L: int, base: BaseConstants):
    """q(L) = L log L + b0 L sqrt(log L) + b1 L (a = 1)."""
    with ivprec(base.precision):
        lL = iv.log(L)
        return L * lL + base.b0 * L * iv.sqrt(lL) + base.b1 * L


def minus_r_of_l(L: int, l_j: int, base: BaseConstants):
    """-r_j = -l_j log L + e0 L sqrt(log L) + e1 L (c = 1, d = 0)."""
    with ivprec(base.precision):
        lL = iv.log(L)
        return -l_j * lL + base.e0 * L * iv.sqrt(lL) + base.e1 * L


def check_qr_bounds(sys: PadeSystem, forms: NumericalForms, base: BaseConstants, log_gamma) -> dict:
    """Informative: |B_k0| <= e^{q(L)}, |L_kj| <= e^{-r_j}, and whether L >= exp(gamma log gamma / 2)."""
    L = sys.params.L
    p = base.precision
    q = q_of_L(L, base)
    with ivprec(p):
        den = []
        for row in forms.B:
            n = Fraction(row[0].norm())
            den.append(le(iv.log(iv.mpf(n.numerator) / n.denominator) / 2, q) if n else True)
        rem = []
        for row in forms.Lrem:
            for j, ball in enumerate(row, start=1):
                mr = minus_r_of_l(L, sys.params.l[j - 1], base)
                up = hi(ball.abs_enclosure(p))
                rem.append(le(iv.log(iv.mpf(up)), mr) if up > 0 else True)
        lg = log_gamma
        # log L >= gamma log gamma / 2  <=>  log log L >= log gamma + log log gamma - log 2
        hyp = le(lg + iv.log(lg) - iv.log(2), iv.log(iv.log(L))) if L > 1 else False
    return {
        "q": iv_json(q),
        "denominator_within_q": den,
        "remainder_within_r": rem,
        "hypothesis_met": bool(hyp),
    }
