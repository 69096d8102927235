"""Invariants of an alpha-vector and the explicit constants built from them.

The four size invariants are kept exact (``g1`` an integer, ``g2, g3, g4`` as
:class:`~bakerforge.surd.Surd`), so the chain of inequalities between them is
decided without rounding. Everything downstream (logs, square roots, the
threshold H0) is an ``mpmath.iv`` enclosure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import iv

from .enclosure import DEFAULT_PREC, Indeterminate, decide, hi, iv_json, iv_max, ivprec, le, lo, lt
from .field import AlphaPoint, FieldElement, FieldSpec, alpha_normalize, parse_alpha_list, parse_field
from .siegel import siegel_constants
from .surd import Surd

__all__ = [
    "AlphaVector",
    "GTuple",
    "BaseConstants",
    "ThmConstants",
    "GammaH0",
    "S2Result",
    "compute_g",
    "compute_base_constants",
    "compute_theorem_constants",
    "compute_gamma_H0",
    "verify_e1_inequality",
    "solve_S2",
    "invariants_report",
]


class InvariantViolation(ArithmeticError):
    pass


@dataclass(frozen=True)
class AlphaVector:
    """alpha_0 = 0, alpha_1, ..., alpha_m: distinct points of the field, m >= 2."""

    field: FieldSpec
    points: tuple[AlphaPoint, ...]

    def __post_init__(self):
        pts = self.points
        if len(pts) < 3:
            raise ValueError(f"need m >= 2, i.e. at least 3 points; got {len(pts)}")
        if any(p.field != self.field for p in pts):
            raise ValueError("point field mismatch")
        if pts[0].value:
            raise ValueError("alpha_0 must be 0")
        vals = [p.value for p in pts]
        if len(set(vals)) != len(vals):
            raise ValueError("alpha points must be pairwise distinct")

    @property
    def m(self) -> int:
        return len(self.points) - 1

    @property
    def values(self) -> list[FieldElement]:
        return [p.value for p in self.points]

    @classmethod
    def from_values(cls, field: FieldSpec, values) -> AlphaVector:
        pts = []
        for v in values:
            if isinstance(v, AlphaPoint):
                pts.append(v)
            elif isinstance(v, FieldElement):
                pts.append(alpha_normalize(v))
            else:
                pts.append(alpha_normalize(FieldElement(field, Fraction(v))))
        return cls(field, tuple(pts))

    @classmethod
    def parse(cls, alpha_text: str, field_text: str = "Q") -> AlphaVector:
        field = parse_field(field_text)
        return cls(field, tuple(parse_alpha_list(field, alpha_text)))

    def to_json(self) -> dict:
        return {"field": self.field.to_json(), "points": [p.to_json() for p in self.points]}


# -- g invariants --------------------------------------------------------------


def _abs_surd(norm) -> Surd:
    return Surd.sqrt(Fraction(norm))


@dataclass(frozen=True)
class GTuple:
    g1: int
    g2: Surd
    g3: Surd
    g4: Surd
    m: int

    def enclose(self, precision: int = DEFAULT_PREC):
        return self.g2.enclose(precision), self.g3.enclose(precision), self.g4.enclose(precision)

    def chain(self) -> dict[str, bool]:
        """The inequalities 2 <= g2, max{g4, 1+g3} <= g2 <= g1(1+g3) <= 2 g1 max{1,g3}, g1 <= g2^m."""
        g1, g2, g3, g4 = self.g1, self.g2, self.g3, self.g4
        one_g3 = g3 + 1
        return {
            "2<=g2": g2 >= 2,
            "g4<=g2": g4 <= g2,
            "1+g3<=g2": one_g3 <= g2,
            "g2<=g1(1+g3)": g2 <= one_g3 * g1,
            "g1(1+g3)<=2g1max(1,g3)": one_g3 * g1 <= (g3 if g3 >= 1 else Surd(1)) * (2 * g1),
            "g1<=g2^m": g2 ** self.m >= g1,
        }

    def to_json(self, precision: int = DEFAULT_PREC) -> dict:
        g2, g3, g4 = self.enclose(precision)
        return {
            "g1": self.g1,
            "g2": iv_json(g2),
            "g3": iv_json(g3),
            "g4": iv_json(g4),
            "g2_exact": str(self.g2),
            "g3_exact": str(self.g3),
            "g4_exact": str(self.g4),
        }


def compute_g(alpha: AlphaVector) -> GTuple:
    """g1 = lcm y_j, g2 = max(|x_j| + y_j), g3 = max |alpha_j|, g4 = max_{j>=1}(1 + y_j/|x_j|)."""
    pts = alpha.points
    g1 = math.lcm(*(p.y for p in pts))
    g2 = max((_abs_surd(p.x.norm()) + p.y for p in pts), key=_SurdKey)
    g3 = max((_abs_surd(p.value.norm()) for p in pts), key=_SurdKey)
    # 1 + y/|x| = 1 + y*sqrt(N)/N
    g4 = max((Surd(1) + _abs_surd(p.x.norm()) * Fraction(p.y, p.x.norm()) for p in pts[1:]), key=_SurdKey)
    g = GTuple(g1, g2, g3, g4, alpha.m)
    bad = [k for k, ok in g.chain().items() if not ok]
    if bad:
        raise InvariantViolation(f"g-invariant chain violated: {bad}")
    return g


class _SurdKey:
    __slots__ = ("s",)

    def __init__(self, s: Surd):
        self.s = s

    def __lt__(self, other):
        return self.s < other.s

    def __gt__(self, other):
        return self.s > other.s


# -- base and theorem constants -----------------------------------------------


@dataclass(frozen=True)
class BaseConstants:
    b0: object
    e0: object
    b1: object
    e1: object
    precision: int

    def to_json(self) -> dict:
        return {k: iv_json(getattr(self, k)) for k in ("b0", "e0", "b1", "e1")}


def compute_base_constants(g: GTuple, precision: int = DEFAULT_PREC) -> BaseConstants:
    with ivprec(precision):
        g2, g3, g4 = g.enclose(precision)
        lg2, lg4 = iv.log(g2), iv.log(g4)
        r = iv.sqrt(lg2)
        tail = lg4 / (2 * r)
        b0 = r + tail
        e0 = 3 * r + tail
        lg1 = iv.log(iv.mpf(g.g1))
        b1 = iv_max(0, lg1 - lg2 - lg4)
        e1 = iv_max(0, lg1 + 2 * iv.log(1 + g3) + 2 * iv.log(2) + 1 - lg2 - lg4)
        return BaseConstants(b0, e0, b1, e1, precision)


@dataclass(frozen=True)
class ThmConstants:
    capA: object
    capB: object
    capC: object
    capD: object
    capE: object
    m: int

    def to_json(self) -> dict:
        return {k: iv_json(getattr(self, k)) for k in ("capA", "capB", "capC", "capD", "capE")}


def compute_theorem_constants(base: BaseConstants, m: int) -> ThmConstants:
    with ivprec(base.precision):
        b0, e0, b1, e1 = base.b0, base.e0, base.b1, base.e1
        return ThmConstants(
            capA=b0 + e0 * m,
            capB=1 + b0 + b1 + e1 * m,
            capC=iv.mpf(m),
            capD=b0 * m + e0 * m * m,
            capE=(1 + b0 + b1) * m + (2 * e0 + e1) * m * m,
            m=m,
        )


# -- gamma and the threshold H0 --------------------------------------------------


@dataclass(frozen=True)
class GammaH0:
    """log(gamma) and log(H0); ``loglog_H0`` is log(log H0) computed directly."""

    log_gamma: object
    log_H0: object
    loglog_H0: object
    mode: str
    branch: str

    def to_json(self) -> dict:
        return {
            "log_gamma": iv_json(self.log_gamma),
            "log_H0": iv_json(self.log_H0),
            "loglog_H0": iv_json(self.loglog_H0),
            "mode": self.mode,
            "branch": self.branch,
        }


def compute_gamma_H0(
    base: BaseConstants,
    m: int,
    field: FieldSpec,
    mode: str = "exponential",
    L0=None,
) -> GammaH0:
    """Threshold H0 in log scale.

    ``exponential``: log gamma = (3 m e0)^2 and
    H0 = max{exp(gamma log gamma / 2), 2 log(s/t)}; the second branch only exists when s > t.

    ``axiomatic``: gamma = max{S2, 1} with S2 from :func:`solve_S2`, f = 2 and
    H0 = max{m, L0, exp(gamma log gamma / 2), exp(e/2)}; ``L0`` defaults to the
    exponential-mode threshold (the length from which the coefficient estimates hold).
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    p = base.precision
    with ivprec(p):
        log_gamma = (3 * m * base.e0) ** 2
        if mode == "exponential":
            lg = log_gamma
        elif mode == "axiomatic":
            s2 = solve_S2(base, m, precision=p)
            lg = iv_max(0, s2.log_S2)
        else:
            raise ValueError(f"unknown mode {mode!r}")
        # log(gamma log gamma / 2) = log gamma + log log gamma - log 2
        if hi(lg) > 0:
            ll_main = lg + iv.log(iv_max(lg, iv.mpf(2) ** -p)) - iv.log(2)
            main = iv.exp(ll_main)
        else:
            ll_main = None
            main = iv.mpf(0)
        candidates = [("gamma", main, ll_main)]
        sc = siegel_constants(field, precision=p)
        if not field.is_rational and lo(sc.s) > hi(sc.t):
            v = iv.log(2 * iv.log(sc.s / sc.t))
            candidates.append(("siegel", v, iv.log(v) if lo(v) > 0 else None))
        if mode == "axiomatic":
            candidates.append(("m", iv.log(m), None))
            if L0 is None:
                L0 = compute_gamma_H0(base, m, field, "exponential").log_H0
            candidates.append(("L0", L0, iv.log(L0) if lo(L0) > 0 else None))
            candidates.append(("e/f", iv.e / 2, iv.log(iv.e / 2)))
        name, log_H0, ll = max(candidates, key=lambda c: float(hi(c[1])))
        log_H0 = iv_max(*(c[1] for c in candidates))
        if ll is None:
            ll = iv.log(log_H0) if lo(log_H0) > 0 else iv.mpf([-iv.inf, iv.inf])
        return GammaH0(log_gamma if mode == "exponential" else lg, log_H0, ll, mode, name)


# -- checks ---------------------------------------------------------------------


def _recompute(g: GTuple, m: int, fn):
    """Predicate for :func:`decide`: rebuild the constants at the requested precision."""

    def pred(p):
        return fn(compute_base_constants(g, p))

    return pred


def verify_e1_inequality(base: BaseConstants, m: int, g: GTuple | None = None) -> dict:
    """25 m e1 <= (3 m e0)^2, decided on enclosures (escalating precision when ``g`` is given)."""

    def check(b):
        with ivprec(b.precision):
            return le(25 * m * b.e1, (3 * m * b.e0) ** 2)

    out = check(base)
    if out is None and g is not None:
        try:
            out = decide(_recompute(g, m, check), base.precision * 2)
        except Indeterminate:
            out = None
    with ivprec(base.precision):
        lhs, rhs = 25 * m * base.e1, (3 * m * base.e0) ** 2
    return {"holds": out, "lhs": iv_json(lhs), "rhs": iv_json(rhs)}


@dataclass(frozen=True)
class S2Result:
    """log S2 enclosed in [lo, hi] with f(lo) > 1 > f(hi) certified."""

    log_S2: object
    gamma_ok: bool | None
    iterations: int
    converged: bool

    def to_json(self) -> dict:
        return {
            "log_S2": iv_json(self.log_S2),
            "log_gamma_ge_log_S2": self.gamma_ok,
            "iterations": self.iterations,
            "converged": self.converged,
        }


def s2_function(base: BaseConstants, m: int, u):
    """f as a function of u = log S; f(u) = 1 exactly at u = log S2, decreasing in u."""
    e0, e1 = base.e0, base.e1
    r = iv.sqrt(u)
    s_inv = iv.exp(-u)
    return 2 * (e0 * m / r + e1 * m / u + s_inv * (e0 * m * m / r + (2 * e0 * m * m + e1 * m * m) / u))


class NoSignChange(ArithmeticError):
    pass


def solve_S2(base: BaseConstants, m: int, tol: float = 1e-12, precision: int | None = None, max_iter: int = 400) -> S2Result:
    """The largest root of S log S = 2(e0 m S sqrt(log S) + e1 m S + e0 m^2 sqrt(log S) + 2 e0 m^2 + e1 m^2).

    Dividing by S log S gives f(S) = 1 with f strictly decreasing for S > 1, so
    the root is bracketed and bisected in u = log S. The bracket ends are
    certified on enclosures: f(lo) > 1 and f(hi) < 1.
    """
    p = precision or base.precision
    with ivprec(p):
        one = iv.mpf(1)

        def f_gt1(u):
            return lt(one, s2_function(base, m, iv.mpf(u)))

        def f_lt1(u):
            return lt(s2_function(base, m, iv.mpf(u)), one)

        lo_u, hi_u = iv.mpf(1), iv.mpf(1)
        lo_u = lo(lo_u)
        hi_u = hi(hi_u)
        n = 0
        while f_gt1(lo_u) is not True:
            lo_u /= 2
            n += 1
            if n > 200:
                raise NoSignChange("no point with f > 1 found below log S = 1")
        while f_lt1(hi_u) is not True:
            hi_u *= 2
            n += 1
            if n > 400:
                raise NoSignChange("no point with f < 1 found")
        it = 0
        converged = False
        while it < max_iter:
            if hi_u - lo_u <= tol * hi_u:
                converged = True
                break
            mid = (lo_u + hi_u) / 2
            if f_gt1(mid) is True:
                lo_u = mid
            elif f_lt1(mid) is True:
                hi_u = mid
            else:
                break
            it += 1
        log_S2 = iv.mpf([lo_u, hi_u])
        gamma_ok = le(log_S2, (3 * m * base.e0) ** 2)
        return S2Result(log_S2, gamma_ok, it, converged)


def invariants_report(alpha: AlphaVector, precision: int = DEFAULT_PREC) -> dict:
    g = compute_g(alpha)
    base = compute_base_constants(g, precision)
    thm = compute_theorem_constants(base, alpha.m)
    gh = compute_gamma_H0(base, alpha.m, alpha.field)
    e1 = verify_e1_inequality(base, alpha.m, g)
    s2 = solve_S2(base, alpha.m)
    return {
        "alpha": [str(v) for v in alpha.values],
        "field": alpha.field.to_json(),
        "m": alpha.m,
        "g": g.to_json(precision),
        "g_chain": g.chain(),
        "base": base.to_json(),
        "theorem": thm.to_json(),
        "gamma_H0": gh.to_json(),
        "e1_inequality": e1,
        "S2": s2.to_json(),
        "provenance": {
            "g": "g1=lcm(y_j); g2=max(|x_j|+y_j); g3=max|alpha_j|; g4=max_{j>=1}(1+y_j/|x_j|)",
            "base": "b0=sqrt(log g2)+log g4/(2 sqrt(log g2)); e0=3 sqrt(log g2)+log g4/(2 sqrt(log g2)); "
            "b1=max(0,log g1-log g2-log g4); e1=max(0,log g1+2log(1+g3)+2log2+1-log g2-log g4)",
            "theorem": "A=b0+e0 m; B=1+b0+b1+e1 m; C=m; D=b0 m+e0 m^2; E=(1+b0+b1)m+(2e0+e1)m^2",
            "gamma_H0": "log gamma=(3 m e0)^2; H0=max(exp(gamma log gamma/2), 2 log(s/t))",
            "e1_inequality": "25 m e1 <= (3 m e0)^2",
            "S2": "S log S = 2(e0 m S sqrt(log S)+e1 m S+e0 m^2 sqrt(log S)+2 e0 m^2+e1 m^2)",
        },
    }
