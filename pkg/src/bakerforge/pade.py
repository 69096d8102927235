"""Type-II Hermite-Pade approximations to (1, e^{alpha_1 t}, ..., e^{alpha_m t}).

A common polynomial A_00(t) = sum_h c_h L!/h! t^h is found by solving the
homogeneous system that kills the Taylor coefficients L+1 .. L+nu_j of
A_00(t) e^{alpha_j t}; the tails are A_0j = -[A_00 e^{alpha_j t}]_L. The family
A_{k+1,j} = A'_{k,j} - alpha_j A_{k,j} supplies further forms, from which m+1
rows with nonzero determinant at t = 1 are selected.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from mpmath import iv

from . import poly
from .enclosure import DEFAULT_PREC, hi, iv_json, iv_max, ivprec, le, lo
from .field import AlphaPoint, FieldElement, FieldSpec, QuadInt
from .invariants import AlphaVector, GTuple, compute_g
from .siegel import LinearSystem, SiegelSolution, siegel_bound, siegel_constants, solve_small_system, verify_solution
from .surd import Surd

log = logging.getLogger(__name__)

__all__ = [
    "PadeParams",
    "PadeSystem",
    "DerivedFamily",
    "NuChoice",
    "choose_nu",
    "build_coefficient_system",
    "construct_pade",
    "pade_from_json",
    "derive_family",
    "select_indices",
    "determinant_factorization",
    "coefficient_bound",
]


@dataclass(frozen=True)
class PadeParams:
    l: tuple[int, ...]
    nu: tuple[int, ...]

    def __post_init__(self):
        if len(self.l) != len(self.nu):
            raise ValueError("l and nu must have the same length")
        if len(self.l) < 2:
            raise ValueError("need m >= 2")
        for lj, nj in zip(self.l, self.nu):
            if not 1 <= nj <= lj:
                raise ValueError(f"need 1 <= nu_j <= l_j, got nu={nj}, l={lj}")
        if self.M > self.L:
            raise ValueError("need M <= L")

    @property
    def m(self) -> int:
        return len(self.l)

    @property
    def L(self) -> int:
        return sum(self.l)

    @property
    def M(self) -> int:
        return sum(self.nu)

    @property
    def index_cap(self) -> int:
        m = self.m
        return self.L - self.M + m * (m + 1) // 2

    def to_json(self) -> dict:
        return {"l": list(self.l), "nu": list(self.nu), "L": self.L, "M": self.M}


# -- choosing nu ---------------------------------------------------------------


@dataclass
class NuChoice:
    nu: tuple[int, ...]
    clamped: list[int]
    checks: dict


def _floor_ratio(l_j: int, g2: Surd, L: int, precision: int) -> int:
    """floor(l_j (1 - sqrt(log g2 / log L))), exact at integer boundaries."""
    with ivprec(precision):
        x = l_j * (1 - iv.sqrt(iv.log(g2.enclose(precision)) / iv.log(L)))
        a, b = math.floor(lo(x)), math.floor(hi(x))
    if a == b:
        return a
    # x straddles the integer b: x == b  <=>  log g2 = r^2 log L with r = 1 - b/l_j
    r = 1 - Fraction(b, l_j)
    if r >= 0:
        r2 = r * r
        if g2 ** r2.denominator == Surd(L) ** r2.numerator:
            return b
    return _floor_ratio(l_j, g2, L, precision * 2) if precision < 4096 else a


def choose_nu(l, g2: Surd, precision: int = DEFAULT_PREC) -> NuChoice:
    """nu_j = floor(l_j (1 - sqrt(log g2 / log L))) clamped below at 1.

    Requires g2 <= L. The side inequalities between M, L and g2 are checked on
    enclosures and reported (a tie within the enclosure is reported as "tie").
    """
    l = tuple(int(x) for x in l)
    L = sum(l)
    m = len(l)
    if g2 > L:
        raise ValueError(f"g2 = {float(g2):.6g} exceeds L = {L}")
    raw = [_floor_ratio(lj, g2, L, precision) for lj in l]
    clamped = [j for j, v in enumerate(raw) if v < 1]
    nu = tuple(max(1, v) for v in raw)
    M = sum(nu)
    with ivprec(precision):
        lg2, lL = iv.log(g2.enclose(precision)), iv.log(L)
        x = L * (1 - iv.sqrt(lg2 / lL))

        def rel(a, b):
            r = le(a, b)
            return "tie" if r is None else r

        # strict lower bound L x - m < M
        lt_low = le(M, x - m)
        checks = {
            "lower": True if lt_low is False else ("tie" if lt_low is None else False),
            "upper": rel(M, x),
        }
        if M < L:
            checks["M/(L-M)"] = rel(iv.mpf(M) / (L - M), iv.sqrt(lL / lg2) - 1)
            checks["M^2/2/(L-M)"] = rel(
                iv.mpf(M) ** 2 / 2 / (L - M),
                L * iv.sqrt(lL / lg2) / 2 - L + L * iv.sqrt(lg2 / lL) / 2,
            )
    return NuChoice(nu, clamped, checks)


# -- the coefficient system ----------------------------------------------------


def build_coefficient_system(alpha: AlphaVector, params: PadeParams) -> LinearSystem:
    """Rows sum_h binom(L+i, h) x_j^{L-h} y_j^h c_h = 0 for i = 1..nu_j, j = 1..m."""
    L = params.L
    field = alpha.field
    rows = []
    for j, nu_j in enumerate(params.nu, start=1):
        p = alpha.points[j]
        xp = [QuadInt(field, 1)]
        for _ in range(L):
            xp.append(xp[-1] * p.x)
        for i in range(1, nu_j + 1):
            rows.append(tuple(xp[L - h] * (math.comb(L + i, h) * p.y**h) for h in range(L + 1)))
    return LinearSystem(field, tuple(rows))


def row_sum_check(alpha: AlphaVector, params: PadeParams, sys: LinearSystem, g: GTuple, precision: int = DEFAULT_PREC) -> dict:
    """Each row sum against (|x_j|+y_j)^L (1+y_j/|x_j|)^i and the product against g2^{ML} g4^{M^2/2}."""
    sums = sys.row_sums(precision)
    L, M = params.L, params.M
    ok_rows = []
    with ivprec(precision):
        k = 0
        for j, nu_j in enumerate(params.nu, start=1):
            p = alpha.points[j]
            ax = iv.sqrt(iv.mpf(p.x.norm()))
            for i in range(1, nu_j + 1):
                ok_rows.append(le(sums[k], (ax + p.y) ** L * (1 + p.y / ax) ** i))
                k += 1
        log_prod = sum((iv.log(s) for s in sums), iv.mpf(0))
        g2, _, g4 = g.enclose(precision)
        cap = M * L * iv.log(g2) + iv.mpf(M) ** 2 / 2 * iv.log(g4)
        return {"rows": ok_rows, "product": le(log_prod, cap), "log_product": iv_json(log_prod), "log_cap": iv_json(cap)}


def coefficient_bound(alpha: AlphaVector, params: PadeParams, g: GTuple, precision: int = DEFAULT_PREC):
    """max{2c sqrt(D), s t^{M/(L+1-M)} (g2^{ML} g4^{M^2/2})^{1/(L+1-M)}} for max |c_h|."""
    L, M = params.L, params.M
    sc = siegel_constants(alpha.field, precision=precision)
    with ivprec(precision):
        g2, _, g4 = g.enclose(precision)
        n = L + 1 - M
        main = sc.s * sc.t ** (iv.mpf(M) / n) * iv.exp((M * L * iv.log(g2) + iv.mpf(M) ** 2 / 2 * iv.log(g4)) / n)
        if alpha.field.is_rational:
            return main
        return iv_max(2 * sc.c * iv.sqrt(alpha.field.D), main)


# -- construction --------------------------------------------------------------


@dataclass
class PadeSystem:
    params: PadeParams
    alpha: AlphaVector
    c: list[QuadInt]
    A0: list  # A_00 and A_0j as exact polynomials
    bound: object
    bound_met: bool
    solution: SiegelSolution
    g: GTuple
    orders: list[int | None]
    checks: dict
    flags: list[str] = dc_field(default_factory=list)

    @property
    def field(self):
        return self.alpha.field

    @property
    def max_c_norm(self) -> int:
        return max(x.norm() for x in self.c)

    def to_json(self) -> dict:
        def pj(p):
            return [[str(x.re), str(x.im)] for x in p]

        return {
            "alpha": [str(v) for v in self.alpha.values],
            "alpha_points": [pt.to_json() for pt in self.alpha.points],
            "field": self.field.to_json(),
            "params": self.params.to_json(),
            "c": [x.to_json() for x in self.c],
            "A0": [pj(p) for p in self.A0],
            "coefficient_bound": iv_json(self.bound),
            "bound_met": self.bound_met,
            "max_c_norm": self.max_c_norm,
            "solver": self.solution.to_json(),
            "remainder_orders": self.orders,
            "checks": self.checks,
            "flags": self.flags,
        }


def _remainder_order(A00, Aj, alpha_j, start: int, limit: int):
    """Exact order at t = 0 of A00 e^{alpha_j t} + Aj, scanning up to ``limit``."""
    field = alpha_j.field
    ser = poly.times_exp(A00, alpha_j, limit)
    for N in range(limit + 1):
        c = ser[N] + (Aj[N] if N < len(Aj) else poly.zero(field))
        if c:
            return N
    return None


def construct_pade(
    alpha: AlphaVector,
    l,
    strategy: str = "exhaustive",
    nu=None,
    precision: int = DEFAULT_PREC,
    node_limit: int = 2_000_000,
) -> PadeSystem:
    field = alpha.field
    l = tuple(int(x) for x in l)
    if len(l) != alpha.m:
        raise ValueError(f"need {alpha.m} lengths, got {len(l)}")
    g = compute_g(alpha)
    flags = []
    checks = {}
    if nu is None:
        try:
            choice = choose_nu(l, g.g2, precision)
            nu = choice.nu
            checks["nu"] = choice.checks
            if choice.clamped:
                flags.append(f"nu clamped to 1 at positions {choice.clamped}")
        except ValueError as exc:
            nu = (1,) * len(l)
            flags.append(f"nu formula not applicable ({exc}); using nu = 1")
    params = PadeParams(l, tuple(nu))
    sys = build_coefficient_system(alpha, params)
    checks["row_sums"] = row_sum_check(alpha, params, sys, g, precision)
    sol = solve_small_system(sys, siegel_constants(field, precision=precision), strategy, precision, node_limit)
    return _assemble(alpha, params, g, sol, checks, flags, precision)


def _assemble(alpha, params, g, sol, checks, flags, precision) -> PadeSystem:
    """Build A_00 and the tails from the coefficient vector ``sol.z`` and check them."""
    field = alpha.field
    L = params.L
    c = sol.z
    bound = coefficient_bound(alpha, params, g, precision)
    with ivprec(precision):
        r = le(iv.mpf(max(x.norm() for x in c)), bound * bound)
    bound_met = True if r is None else r
    if not bound_met:
        flags.append("coefficient bound not met")

    A00 = [x.to_element() * (math.factorial(L) // math.factorial(h)) for h, x in enumerate(c)]
    A00 = poly.trim(A00)
    A0 = [A00]
    orders = []
    for j in range(1, alpha.m + 1):
        aj = alpha.values[j]
        trunc = poly.times_exp(A00, aj, L)
        Aj = poly.trim([-x for x in trunc])
        A0.append(Aj)
        orders.append(_remainder_order(A00, Aj, aj, L + 1, L + params.nu[j - 1] + 40))

    g1L = g.g1**L
    checks["order"] = [o is not None and o >= L + params.nu[j] + 1 for j, o in enumerate(orders)]
    checks["integral"] = all((x * g1L).is_integral() for p in A0[1:] for x in p)
    checks["A00_integral"] = all(x.is_integral() for x in A00)
    checks["nonzero"] = [bool(p) for p in A0]
    checks["A00_at_0"] = (A00[0] if A00 else poly.zero(field)) == c[0].to_element() * math.factorial(L)
    checks["degrees"] = [poly.degree(p) for p in A0]
    if not all(checks["nonzero"]):
        flags.append("some A_0j is the zero polynomial")
    return PadeSystem(params, alpha, c, A0, bound, bound_met, sol, g, orders, checks, flags)


def pade_from_json(obj: dict, precision: int = DEFAULT_PREC) -> PadeSystem:
    """Rebuild a system written by :meth:`PadeSystem.to_json`; the stored c must solve the linear system."""
    field = FieldSpec(int(obj["field"].get("D", 0)))
    alpha = AlphaVector(field, tuple(AlphaPoint.from_json(field, p) for p in obj["alpha_points"]))
    params = PadeParams(tuple(obj["params"]["l"]), tuple(obj["params"]["nu"]))
    c = [QuadInt.from_json(field, x) for x in obj["c"]]
    lin = build_coefficient_system(alpha, params)
    if not verify_solution(lin, c):
        raise ValueError("stored coefficients do not solve the coefficient system")
    g = compute_g(alpha)
    consts = siegel_constants(field, precision=precision)
    solver = obj.get("solver", {})
    sol = SiegelSolution(c, max(x.norm() for x in c), siegel_bound(lin, consts, precision), bool(solver.get("bound_met", True)), "loaded")
    checks = {"row_sums": row_sum_check(alpha, params, lin, g, precision)}
    return _assemble(alpha, params, g, sol, checks, list(obj.get("flags", [])), precision)


# -- the derived family ---------------------------------------------------------


@dataclass
class DerivedFamily:
    polys: list  # polys[k][j] = A_{k,j}
    values: list  # values[k][j] = A_{k,j}(1)
    selected: tuple[int, ...] | None
    b: int | None
    cap: int
    checks: dict

    def to_json(self) -> dict:
        return {
            "k_max": len(self.values) - 1,
            "values": [[str(v) for v in row] for row in self.values],
            "selected": list(self.selected) if self.selected else None,
            "b": self.b,
            "cap": self.cap,
            "checks": self.checks,
        }


def derive_family(sys: PadeSystem, k_max: int | None = None) -> DerivedFamily:
    """A_{k+1,j} = A'_{k,j} - alpha_j A_{k,j} for k < k_max, with the degree/order bookkeeping checked."""
    alpha = sys.alpha
    field = alpha.field
    m = alpha.m
    cap = sys.params.index_cap
    if k_max is None:
        k_max = cap
    if k_max < m:
        raise ValueError("k_max must be >= m")
    alphas = alpha.values
    rows = [list(sys.A0)]
    for _ in range(k_max):
        prev = rows[-1]
        rows.append([poly.add(poly.deriv(prev[j]), poly.scale(prev[j], -alphas[j]), field) for j in range(m + 1)])
    deg0 = [poly.degree(p) for p in sys.A0]
    deg_ok, ord_ok = True, True
    one = FieldElement(field, 1, 0)
    for k, row in enumerate(rows):
        want = deg0[0] - k if deg0[0] - k >= 0 else -1
        if poly.degree(row[0]) != want:
            deg_ok = False
        for j in range(1, m + 1):
            if poly.degree(row[j]) != deg0[j]:
                deg_ok = False
            o0 = sys.orders[j - 1]
            if o0 is None or k > o0:
                continue
            ser = poly.times_exp(row[0], alphas[j], o0 - k)
            coeffs = [ser[N] + (row[j][N] if N < len(row[j]) else poly.zero(field)) for N in range(o0 - k + 1)]
            if any(coeffs[:-1]) or not coeffs[-1]:
                ord_ok = False
    values = [[poly.evaluate(p, one, field) for p in row] for row in rows]
    selected = select_indices(values, m, cap)
    b = (max(selected) - m) if selected else None
    checks = {"degrees": deg_ok, "orders": ord_ok, "selected_within_cap": bool(selected) and max(selected) <= cap}
    return DerivedFamily(rows, values, selected, b, cap, checks)


def select_indices(values, m: int, cap: int) -> tuple[int, ...] | None:
    """Greedy scan k = 0..cap keeping rows that raise the exact rank; None if rank m+1 is not reached."""
    chosen: list[int] = []
    for k in range(min(cap, len(values) - 1) + 1):
        trial = [values[i] for i in chosen] + [values[k]]
        if poly.rank_field(trial) == len(trial):
            chosen.append(k)
            if len(chosen) == m + 1:
                return tuple(chosen)
    return None


def selected_determinant(family: DerivedFamily, field) -> FieldElement:
    rows = [family.values[k] for k in family.selected]
    return poly.det_field(rows, field)


def vandermonde_factor(alpha: AlphaVector) -> FieldElement:
    """det[alpha_j^k]_{k,j=1..m} = prod alpha_j * prod_{i<j} (alpha_j - alpha_i)."""
    vals = alpha.values[1:]
    out = FieldElement(alpha.field, 1, 0)
    for i, a in enumerate(vals):
        out = out * a
        for b in vals[i + 1 :]:
            out = out * (b - a)
    return out


def determinant_factorization(sys: PadeSystem, family: DerivedFamily) -> dict:
    """Delta(t) = det[A_{k,j}(t)]_{k,j=0..m} = t^{mL+M-m(m-1)/2} h(t) with deg h <= L-M+m(m-1)/2."""
    m = sys.alpha.m
    L, M = sys.params.L, sys.params.M
    field = sys.field
    delta = poly.determinant([family.polys[k] for k in range(m + 1)], field)
    low = m * L + M - m * (m - 1) // 2
    o = poly.order(delta)
    d = poly.degree(delta)
    out = {
        "nonzero": bool(delta),
        "order": o,
        "degree": d,
        "order_bound": low,
        "order_ok": o is not None and o >= low,
        "h_degree_ok": o is not None and d - low <= L - M + m * (m - 1) // 2,
    }
    # leading coefficient when every A_0j has full degree L
    if all(poly.degree(p) == L for p in sys.A0):
        lead = sys.A0[0][-1]
        for p in sys.A0[1:]:
            lead = lead * p[-1]
        van = poly.det_field(
            [[(-a) ** k for a in sys.alpha.values[1:]] for k in range(1, m + 1)], field
        )
        out["leading_ok"] = d == (m + 1) * L and delta[-1] == lead * van
    return out
