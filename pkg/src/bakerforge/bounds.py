"""Explicit lower bounds for |beta_0 + beta_1 e^{alpha_1} + ... + beta_m e^{alpha_m}|.

Everything is kept in log scale: the thresholds H0, H0-hat and M0 are towers
like exp(exp(441)), so they are carried as log H0 (itself an enclosure of a
huge number) and reported as log log H0.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from mpmath import iv

from .enclosure import DEFAULT_PREC, PREC_CAP, ComplexBall, hi, iv_json, iv_max, ivprec, le, lo, lt, to_iv
from .field import FieldElement, FieldSpec, QuadInt
from .forms import exp_ball
from .invariants import (
    AlphaVector,
    compute_base_constants,
    compute_g,
    compute_gamma_H0,
    compute_theorem_constants,
)
from .nestedlog import xi_epsilon
from .siegel import siegel_constants
from .surd import Surd

__all__ = [
    "HSpec",
    "BoundReport",
    "theorem_bound",
    "corollary22_bound",
    "corollary23_Ahat",
    "corollary24_Bhat",
    "compare_prior",
    "dominance_corpus",
    "example_presets",
    "gaussian_disk_points",
    "empirical_check",
]

F_EXPONENT = 2  # f = 2 / (c - d m) with c = 1, d = 0


def _c(text: str):
    return iv.mpf(text)


def _q(x):
    """Interval around a rational."""
    x = Fraction(x)
    return iv.mpf(x.numerator) / x.denominator


def _ok(v) -> bool:
    """A tri-state comparison counts as passed only when certified."""
    return v is True


# -- H -------------------------------------------------------------------------


@dataclass(frozen=True)
class HSpec:
    """The height parameter, held as log H.

    ``theorem_H``: H = prod(2 m H_i); ``hat_H``: H = prod(H_i).
    """

    log_H_i: tuple
    mode: str
    log_H: object

    @classmethod
    def from_heights(cls, heights, m: int, mode: str = "theorem_H", precision: int = DEFAULT_PREC) -> HSpec:
        if len(heights) != m:
            raise ValueError(f"need {m} heights, got {len(heights)}")
        with ivprec(precision):
            logs = []
            for h in heights:
                h = to_iv(h, precision)
                if lo(h) <= 0:
                    raise ValueError("heights must be positive")
                logs.append(iv.log(h))
            return cls.from_log_heights(logs, m, mode, precision)

    @classmethod
    def from_log_heights(cls, log_heights, m: int, mode: str = "theorem_H", precision: int = DEFAULT_PREC) -> HSpec:
        if mode not in ("theorem_H", "hat_H"):
            raise ValueError(f"unknown H mode {mode!r}")
        with ivprec(precision):
            logs = tuple(to_iv(x, precision) for x in log_heights)
            total = iv.mpf(0)
            for x in logs:
                total += x
            if mode == "theorem_H":
                total += m * iv.log(2 * m)
            return cls(logs, mode, total)

    @classmethod
    def from_log_H(cls, log_H, mode: str = "theorem_H", precision: int = DEFAULT_PREC) -> HSpec:
        """H given directly by log H (the individual H_i are then unknown)."""
        with ivprec(precision):
            return cls((), mode, to_iv(log_H, precision))

    def to_json(self) -> dict:
        return {"mode": self.mode, "log_H": iv_json(self.log_H), "log_H_i": [iv_json(x) for x in self.log_H_i]}


@dataclass
class BoundReport:
    log_lower_bound: object
    epsilon: object
    hypothesis_met: bool
    components: dict
    provenance: dict
    checks: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "log_lower_bound": iv_json(self.log_lower_bound),
            "epsilon": iv_json(self.epsilon),
            "hypothesis_met": self.hypothesis_met,
            "components": self.components,
            "provenance": self.provenance,
            "checks": self.checks,
        }


def _constants(alpha: AlphaVector, precision: int):
    g = compute_g(alpha)
    base = compute_base_constants(g, precision)
    thm = compute_theorem_constants(base, alpha.m)
    gh = compute_gamma_H0(base, alpha.m, alpha.field)
    return g, base, thm, gh


def _hyp(log_H, log_H0) -> bool:
    r = le(log_H0, log_H)
    return bool(r)


# -- Theorem and Corollary 2.2 shape ---------------------------------------------


def theorem_bound(alpha: AlphaVector, h: HSpec, precision: int = DEFAULT_PREC, _cache=None) -> BoundReport:
    """log of 1 / (2 e^E H^{1+eps(H)}) with eps(H) = xi(z(2 log H), H)."""
    if h.mode != "theorem_H":
        raise ValueError("theorem_bound needs H = prod(2 m H_i)")
    g, base, thm, gh = _cache or _constants(alpha, precision)
    with ivprec(precision):
        log_H = h.log_H
        eps, z = xi_epsilon(thm, F_EXPONENT, log_H, precision)
        log_bound = -iv.log(2) - thm.capE - (1 + eps) * log_H
        identity = log_bound + iv.log(2) + thm.capE + (1 + eps) * log_H
        hyp = _hyp(log_H, gh.log_H0)
        comps = {**thm.to_json(), "z": z.to_json(), "log_H": iv_json(log_H), "log_H0": iv_json(gh.log_H0)}
        if lo(log_H) > 1:
            comps["eps_sqrt_loglogH"] = iv_json(eps * iv.sqrt(iv.log(log_H)))
        checks = {"log_identity": bool(lo(identity) <= 0 <= hi(identity))}
    return BoundReport(
        log_bound,
        eps,
        hyp,
        comps,
        {
            "bound": "|beta_0 + sum beta_j e^{alpha_j}| > 1 / (2 e^E H^{1+eps(H)})",
            "eps": "eps(H) = A sqrt(2 z/log H) + B z/log H + C log z/log H + D sqrt(log z)/log H, z = z(2 log H)",
            "H": "H = prod(2 m H_i) >= H0",
        },
        checks,
    )


def corollary22_bound(alpha: AlphaVector, h: HSpec, precision: int = DEFAULT_PREC) -> BoundReport:
    """The weaker closed form obtained from z(2 log H) < 2 rho log H / log log H."""
    cache = _constants(alpha, precision)
    g, base, thm, gh = cache
    thm_rep = theorem_bound(alpha, h, precision, cache)
    with ivprec(precision):
        rho = _c("1.024")
        log_H = h.log_H
        lam = iv.log(log_H)
        A, B, C, D, E = thm.capA, thm.capB, thm.capC, thm.capD, thm.capE
        d_term = D / log_H * iv.sqrt(iv.log(2 * rho * log_H / lam))
        expo = 1 + 2 * A * iv.sqrt(rho) / iv.sqrt(lam) + 2 * B * rho / lam + d_term
        log_bound = -iv.log(2) - E - C * iv.log(2 * rho) + C * (iv.log(lam) - iv.log(log_H)) - expo * log_H
        hyp = thm_rep.hypothesis_met
        weaker = le(log_bound, thm_rep.log_lower_bound) if hyp else None
        eps_equiv = expo - 1
    return BoundReport(
        log_bound,
        eps_equiv,
        hyp,
        {
            **thm.to_json(),
            "rho": "1.024",
            "C_exponent": int(alpha.m),
            "D_term": iv_json(d_term),
            "theorem_log_bound": iv_json(thm_rep.log_lower_bound),
        },
        {
            "bound": "(log log H / log H)^C / (2 e^E (2 rho)^C) * H^{-1 - 2A sqrt(rho)/sqrt(log log H) - 2B rho/log log H - D sqrt(log(2 rho log H / log log H))/log H}",
            "rho": "z(2 log H) < 2 rho log H / log log H for H >= H0, rho = 1.024",
        },
        {"weaker_than_theorem": weaker},
    )


# -- Corollary 2.3: A-hat ----------------------------------------------------------


def _ahat_formula(g, m: int, case: str, precision: int):
    with ivprec(precision):
        g2, g3, g4 = g.enclose(precision)
        sm = iv.sqrt(m)
        val = 1 + (_c("3.036") + _c("7.084") * m) * iv.sqrt(iv.log(g2)) + _c("0.633") * sm
        if case == "a":
            val += _c("0.580") * sm * iv.sqrt(iv.log(1 + g3))
        else:
            val += (_c("0.290") + _c("0.410") * sm) * iv.sqrt(iv.log(g.g1 * (1 + g3)))
        return val


def corollary23_Ahat(alpha: AlphaVector, precision: int = DEFAULT_PREC) -> dict:
    """A-hat with the case split at g1 <= g2 g4, and log H0-hat = log H0 - m log(2m).

    Three values are reported, all evaluated at the threshold where they are largest:
    ``formula`` (the closed case a / case b expression), ``chain`` (the intermediate
    estimate built from z(2 log H) < 2 rho log H / log log H plus the conversion
    from H to H-hat) and ``exact`` (the same conversion applied to eps(H0) itself).
    """
    m = alpha.m
    g, base, thm, gh = _constants(alpha, precision)
    case = "a" if Surd(g.g1) <= g.g2 * g.g4 else "b"
    formula = _ahat_formula(g, m, case, precision)
    with ivprec(precision):
        rho = _c("1.024")
        log_H0 = gh.log_H0
        log_hat_H0 = log_H0 - m * iv.log(2 * m)
        lam_H = iv.log(log_H0)
        lam_hat = iv.log(log_hat_H0)
        A, B, C, D, E = thm.capA, thm.capB, thm.capC, thm.capD, thm.capE
        # eps(H) sqrt(log log H) <= 2 sqrt(rho) A + 2 rho B / sqrt(lam) + C lam^{3/2} / log H + D lam / log H
        weak = 2 * iv.sqrt(rho) * A + 2 * rho * B / iv.sqrt(lam_H) + C * lam_H ** _c("1.5") / log_H0 + D * lam_H / log_H0
        eps_weak = weak / iv.sqrt(lam_H)
        eps_exact, _ = xi_epsilon(thm, F_EXPONENT, log_H0, precision)
        lt2 = iv.log(2)

        def convert(eps):
            # 2 e^E H^{1+eps} = Hhat^{1 + eps + (log 2 + E + m(1+eps) log 2m) / log Hhat}
            extra = (lt2 + E + m * (1 + eps) * iv.log(2 * m)) / log_hat_H0
            return (eps + extra) * iv.sqrt(lam_hat)

        chain = convert(eps_weak)
        exact = convert(eps_exact)
        lg = gh.log_gamma
        # log Hhat0 <= lg e^lg / 2. On the gamma branch log H0 = lg e^lg / 2 exactly and
        # log Hhat0 is smaller by m log(2m) > 0, a gap no enclosure of e^lg resolves.
        if gh.branch == "gamma":
            side = True
        else:
            side = le(lam_hat, lg + iv.log(lg) - lt2)
        premise = True
        if not alpha.field.is_rational:
            sc = siegel_constants(alpha.field, precision=precision)
            if lo(sc.s) > hi(sc.t):
                # 2 log(2 log(s/t)) <= lg e^lg, compared in log scale
                premise = le(iv.log(2 * iv.log(2 * iv.log(sc.s / sc.t))), lg + iv.log(lg))
        return {
            "case": case,
            "g1_le_g2g4": case == "a",
            "formula": formula,
            "chain": chain,
            "exact": exact,
            "log_hat_H0": log_hat_H0,
            "loglog_hat_H0": lam_hat,
            "loglog_H0": lam_H,
            "side_condition": side,
            "side_condition_premise": premise,
            "H0_branch": gh.branch,
            "constants": thm.to_json(),
            "provenance": {
                "case_a": "1+(3.036+7.084m)sqrt(log g2)+0.633 sqrt(m)+0.580 sqrt(m) sqrt(log(1+g3)), g1<=g2 g4",
                "case_b": "1+(3.036+7.084m)sqrt(log g2)+0.633 sqrt(m)+(0.290+0.410 sqrt(m)) sqrt(log(g1(1+g3))), g1>g2 g4",
                "hat_H0": "log Hhat0 = log H0 - m log(2m)",
                "side": "log Hhat0 <= (3 m e0)^2 exp((3 m e0)^2) / 2",
            },
        }


def _ahat_json(rep: dict) -> dict:
    out = {}
    for k, v in rep.items():
        if k in ("formula", "chain", "exact", "log_hat_H0", "loglog_hat_H0", "loglog_H0"):
            out[k] = iv_json(v)
        else:
            out[k] = v
    return out


# -- Corollary 2.4: B-hat over Q -----------------------------------------------------


def _g1_g3_rational(values: list[Fraction]) -> tuple[int, Fraction]:
    return math.lcm(*(v.denominator for v in values)), max(abs(v) for v in values)


def corollary24_Bhat(gamma, precision: int = DEFAULT_PREC, ahat_eta=None) -> dict:
    """B-hat = 1 + m A-hat(eta), eta = gamma - gamma_0, and the cap c_m m^2 sqrt(log(g1(1+g3))).

    ``gamma`` is a sequence of distinct rationals (gamma_0 arbitrary). A-hat(eta)
    is the smaller of the case formula and the chain value unless ``ahat_eta``
    supplies another certified upper bound (an example's closed form).
    """
    gam = [Fraction(x) for x in gamma]
    m = len(gam) - 1
    if m < 2:
        raise ValueError("need m >= 2")
    if len(set(gam)) != len(gam):
        raise ValueError("gamma must be distinct")
    Q = FieldSpec(0)
    eta = AlphaVector.from_values(Q, [v - gam[0] for v in gam])
    rep = corollary23_Ahat(eta, precision)
    g1, g3 = _g1_g3_rational(gam)
    g_eta = compute_g(eta)
    with ivprec(precision):
        best = rep["formula"] if hi(rep["formula"]) <= hi(rep["chain"]) else rep["chain"]
        ahat = best if ahat_eta is None else to_iv(ahat_eta, precision)
        bhat = 1 + m * ahat
        lam = iv.log(_q(g1 * (1 + g3)))
        c_m = 13 if m == 2 else 12
        cap = c_m * m * m * iv.sqrt(lam)
        cap_ok = le(bhat, cap)
        prod = g1 * (1 + g3)
        if m == 2:
            m2_case = 1 if prod == 2 else (2 if prod == 3 else 3)
        else:
            m2_case = None
        mean_value = None
        if prod >= 3:
            lhs = iv.sqrt(iv.log(_q(g1 * (1 + 2 * g3))))
            mean_value = le(lhs, iv.sqrt(lam) + _c("0.331"))
        # g1(eta) <= g1(gamma), g3(eta) <= 2 g3(gamma), g4(eta) <= 1 + g1(gamma)
        shift_ok = g_eta.g1 <= g1 and g_eta.g3 <= Surd(2 * g3) and g_eta.g4 <= Surd(1 + g1)
        base_eta = compute_base_constants(g_eta, precision)
        e0_sq = le(base_eta.e0**2, _c("21.25") * lam)
        ll_M0_formula = iv.log(96 * m * m * lam) + 192 * m * m * lam
        ll_M0 = rep["loglog_hat_H0"]
        return {
            "m": m,
            "gamma": [str(v) for v in gam],
            "eta": [str(v) for v in eta.values],
            "Ahat_eta": iv_json(ahat),
            "Ahat_eta_source": "supplied" if ahat_eta is not None else ("formula" if best is rep["formula"] else "chain"),
            "Ahat_eta_report": _ahat_json(rep),
            "Bhat": bhat,
            "Bhat_chain": 1 + m * rep["chain"],
            "Bhat_formula": 1 + m * rep["formula"],
            "cap": cap,
            "c_m": c_m,
            "cap_ok": cap_ok,
            "cap_asserted": m >= 3 and prod >= 3 or m == 2,
            "m2_case": m2_case,
            "mean_value_ok": mean_value,
            "shift_bounds_ok": shift_ok,
            "e0_eta_sq_le_21.25_log": e0_sq,
            "loglog_M0": ll_M0,
            "loglog_M0_general": ll_M0_formula,
            "provenance": {
                "Bhat": "Bhat(gamma) = 1 + m Ahat(eta), eta = gamma - gamma_0",
                "cap": "Bhat <= c_m m^2 sqrt(log(g1(1+g3))), c_2 = 13, c_m = 12 (m >= 3)",
                "M0": "log M0 = log Hhat0(eta); general form 96 m^2 L exp(192 m^2 L), L = log(g1(1+g3))",
            },
        }


def _bhat_json(rep: dict) -> dict:
    out = {}
    for k, v in rep.items():
        if k in ("Bhat", "Bhat_chain", "Bhat_formula", "cap", "loglog_M0", "loglog_M0_general"):
            out[k] = iv_json(v)
        else:
            out[k] = v
    return out


# -- prior work ----------------------------------------------------------------------


def _rational_values(alpha: AlphaVector) -> list[Fraction]:
    if not alpha.field.is_rational:
        raise ValueError("prior-work formulas are stated over Q only")
    return [v.re for v in alpha.values]


def compare_prior(alpha: AlphaVector, precision: int = DEFAULT_PREC, ahat=None, bhat=None) -> dict:
    """Sankilampi and Mahler terms next to ours, and the AKT <= SA dominance chain."""
    vals = _rational_values(alpha)
    m = alpha.m
    g1, g3 = _g1_g3_rational(vals)
    g3t = max(Fraction(1), g3)
    with ivprec(precision):
        lam_sa = iv.log(_q(2 * g1 * g3t))
        lam = iv.log(_q(g1 * (1 + g3)))
        lm = iv.log(2 * m)
        a_sa = 16 * m * m + m * lm + 39 * m + 12 + (8 + iv.mpf(4) / m + iv.mpf(1) / (3 * m * m)) * lam_sa
        ll_sa = (16 * m * m + 36 * m + m * lm + 8 * lam_sa) ** 2
        sm = iv.sqrt(m)
        a_akt = sm + (4 + sm + 8 * m) * iv.sqrt(lam_sa)
        ll_akt = iv.log(56 * m * m * lam_sa) + 111 * m * m * lam_sa
        b_ma = 12 * (m + 1) ** 3 * iv.sqrt(lam)
        # stated with log(g1 + g3) in the prefactor and log(g1(1 + g3)) in the exponent
        ll_ma = iv.log(16 * (m + 1) ** 4 * iv.log(_q(g1 + g3))) + 16 * (m + 1) ** 4 * lam
        # AKT < m + 13 m sqrt(L) <= 13 m^2 + m + 13 L / 4 < SA
        s1 = m + 13 * m * iv.sqrt(lam_sa)
        s2 = 13 * m * m + m + 13 * lam_sa / 4
        chain = {
            "akt<m+13m_sqrtL": _ok(lt(a_akt, s1)),
            "m_sqrtL<=m^2+L/4": _ok(le(m * iv.sqrt(lam_sa), m * m + lam_sa / 4)),
            "13m^2+m+13L/4<sa": _ok(lt(s2, a_sa)),
        }
        cor23 = corollary23_Ahat(alpha, precision)
        ours = cor23["formula"] if ahat is None else to_iv(ahat, precision)
        dominance = _ok(le(a_akt, a_sa))
        out = {
            "m": m,
            "g1": g1,
            "g3": str(g3),
            "sankilampi": {"Ahat": iv_json(a_sa), "loglog_hat_H0": iv_json(ll_sa)},
            "akt_comparison_form": {"Ahat": iv_json(a_akt), "loglog_hat_H0": iv_json(ll_akt)},
            "akt": {
                "Ahat": iv_json(ours),
                "Ahat_chain": iv_json(cor23["chain"]),
                "loglog_hat_H0": iv_json(cor23["loglog_hat_H0"]),
            },
            "mahler": {"Bhat": iv_json(b_ma), "loglog_M0": iv_json(ll_ma)},
            "dominance": {
                "akt_le_sa": dominance,
                "akt_formula_le_sa": _ok(le(ours, a_sa)),
                "am_gm_chain": chain,
            },
            "_values": {
                "a_sa": a_sa,
                "ll_sa": ll_sa,
                "a_akt": a_akt,
                "ll_akt": ll_akt,
                "b_ma": b_ma,
                "ll_ma": ll_ma,
            },
            "provenance": {
                "sankilampi_Ahat": "16m^2+m log(2m)+39m+12+(8+4/m+1/(3m^2)) log(2 g1 g3~)",
                "sankilampi_H0": "log Hhat0 = exp((16m^2+36m+m log(2m)+8 log(2 g1 g3~))^2)",
                "akt_Ahat": "sqrt(m)+(4+sqrt(m)+8m) sqrt(log(2 g1 g3~))",
                "akt_H0": "log Hhat0 = 56 m^2 log(2 g1 g3~) exp(111 m^2 log(2 g1 g3~))",
                "mahler_Bhat": "12 (m+1)^3 sqrt(log(g1(1+g3)))",
                "mahler_M0": "log M0 = 16 (m+1)^4 log(g1+g3) exp(16 (m+1)^4 log(g1(1+g3)))",
            },
        }
        if bhat is not None:
            out["akt"]["Bhat"] = iv_json(bhat)
            out["dominance"]["akt_B_le_mahler"] = _ok(le(bhat, b_ma))
        return out


def public(rep: dict) -> dict:
    """Drop the raw enclosures kept for internal reuse."""
    return {k: v for k, v in rep.items() if not k.startswith("_")}


def random_rational_alpha(rng: random.Random, m_range=(2, 5), bound: int = 9) -> AlphaVector:
    Q = FieldSpec(0)
    while True:
        m = rng.randint(*m_range)
        vals = {Fraction(0)}
        while len(vals) < m + 1:
            vals.add(Fraction(rng.randint(-bound, bound), rng.randint(1, bound)))
        rest = sorted(vals - {Fraction(0)})
        rng.shuffle(rest)
        return AlphaVector.from_values(Q, [Fraction(0)] + rest)


def dominance_corpus(n: int = 200, seed: int = 0, precision: int = 64) -> dict:
    """Check AKT <= SA (and the chain behind it) on n random rational alpha-vectors."""
    rng = random.Random(seed)
    failures = []
    for i in range(n):
        a = random_rational_alpha(rng)
        vals = _rational_values(a)
        m = a.m
        g1, g3 = _g1_g3_rational(vals)
        g3t = max(Fraction(1), g3)
        with ivprec(precision):
            lam_sa = iv.log(_q(2 * g1 * g3t))
            sm = iv.sqrt(m)
            a_sa = 16 * m * m + m * iv.log(2 * m) + 39 * m + 12 + (8 + iv.mpf(4) / m + iv.mpf(1) / (3 * m * m)) * lam_sa
            a_akt = sm + (4 + sm + 8 * m) * iv.sqrt(lam_sa)
            ok = _ok(le(a_akt, a_sa))
        if not ok:
            failures.append([str(v) for v in vals])
    return {"samples": n, "seed": seed, "failures": failures, "all_dominated": not failures}


# -- presets -------------------------------------------------------------------------


def _within(v, target, tol) -> bool:
    return bool(lo(v) >= target - tol and hi(v) <= target + tol)


def _preset_integers(m: int, precision: int) -> dict:
    Q = FieldSpec(0)
    alpha = AlphaVector.from_values(Q, range(m + 1))
    cor23 = corollary23_Ahat(alpha, precision)
    with ivprec(precision):
        rho = _c("1.024")
        lm1 = iv.log(m + 1)
        slm = iv.sqrt(lm1)
        closed = 1 + _c("0.670") * m + (_c("2.252") + _c("6.072") * m) * slm
        # the same expression before the tail terms are rounded up into the leading 1
        eps_term = _c("0.962") + _c("0.670") * m + (_c("2.252") + _c("6.072") * m) * slm
        closed_B = 1 + m + _c("0.670") * m * m + (_c("2.252") * m + _c("6.072") * m * m) * slm
        ll_closed = iv.log(_c("40.5") * m * m * lm1 + _c("9.850")) + 81 * m * m * lm1 + _c("19.699") * m * m
        # where the decimal coefficients come from: 2 sqrt(rho)(3m+1) from A, 2 rho/9 from the B term
        coeffs = {
            "6.072": iv_json(6 * iv.sqrt(rho)),
            "2.252": iv_json(2 * iv.sqrt(rho) + 2 * rho / 9),
        }
        if m == 2:
            coeffs["0.670"] = iv_json(iv.sqrt(rho) * iv.log(2) / iv.sqrt(iv.log(3)))
    cor24 = corollary24_Bhat(list(range(m + 1)), precision, ahat_eta=closed)
    prior = compare_prior(alpha, precision, ahat=closed, bhat=cor24["Bhat"])
    pv = prior["_values"]
    headline = {
        "Ahat": iv_json(closed),
        "loglog_hat_H0": iv_json(cor23["loglog_hat_H0"]),
        "Ahat_SA": iv_json(pv["a_sa"]),
        "loglog_hat_H0_SA": iv_json(pv["ll_sa"]),
        "Bhat": iv_json(cor24["Bhat"]),
        "loglog_M0": iv_json(cor24["loglog_M0"]),
        "Bhat_MA": iv_json(pv["b_ma"]),
        "loglog_M0_MA": iv_json(pv["ll_ma"]),
    }
    checks = {}
    if m == 2:
        checks = {
            "Ahat<=18": _ok(le(closed, 18)),
            "loglog_hat_H0=441+-2": _within(cor23["loglog_hat_H0"], 441, 2),
            "Ahat_SA<=175": _ok(le(pv["a_sa"], 175)),
            "loglog_hat_H0_SA=23442+-5%": _within(pv["ll_sa"], 23442, 0.05 * 23442),
            "Bhat<=36": _ok(le(cor24["Bhat"], 36)),
            "loglog_M0=441+-2": _within(cor24["loglog_M0"], 441, 2),
            "Bhat_MA=340+-2": _within(pv["b_ma"], 340, 2),
            "loglog_M0_MA=1432+-2": _within(pv["ll_ma"], 1432, 2),
        }
    with ivprec(precision):
        informative = {
            "Ahat_chain_le_18": _ok(le(cor23["chain"], 18)),
            "Bhat_chain_le_36": _ok(le(cor24["Bhat_chain"], 36)),
            "Ahat_general_formula": iv_json(cor23["formula"]),
            "eps_term_closed_form": iv_json(eps_term),
            "eps_term_le_18": _ok(le(eps_term, 18)),
            "loglog_hat_H0_closed_form": iv_json(ll_closed),
            "Bhat_closed_form": iv_json(closed_B),
        }
    return {
        "preset": "integers",
        "alpha": [str(v) for v in alpha.values],
        "m": m,
        "headline": headline,
        "checks": checks,
        "informative": informative,
        "coefficients": coeffs,
        "corollary23": _ahat_json(cor23),
        "corollary24": _bhat_json(cor24),
        "comparison": public(prior),
        "provenance": {
            "Ahat": "1+0.670m+(2.252+6.072m) sqrt(log(m+1))",
            "Hhat0": "log Hhat0 = (40.5 m^2 log(m+1)+9.850) exp(81 m^2 log(m+1)+19.699 m^2)",
            "Bhat": "1+m+0.670m^2+(2.252m+6.072m^2) sqrt(log(m+1))",
        },
    }


def _preset_harmonic(m: int, precision: int) -> dict:
    Q = FieldSpec(0)
    alpha = AlphaVector.from_values(Q, [Fraction(0)] + [Fraction(1, j) for j in range(1, m + 1)])
    g = compute_g(alpha)
    cor23 = corollary23_Ahat(alpha, precision)
    with ivprec(precision):
        lm1 = iv.log(m + 1)
        slm = iv.sqrt(lm1)
        rosser = le(iv.log(g.g1), _c("1.030883") * m)
        closed = 1 + _c("0.036") * m + (_c("3.036") + _c("7.084") * m) * slm
        ll_closed = iv.log(_c("55.125") * m * m * lm1) + _c("110.25") * m * m * lm1
        sa_closed = 16 * m * m + m * iv.log(m) + _c("47.941") * m + _c("23.285")
        leading = _c("7.1") * m * m * slm
    cor24 = corollary24_Bhat([Fraction(0)] + [Fraction(1, j) for j in range(1, m + 1)], precision)
    prior = compare_prior(alpha, precision)
    with ivprec(precision):
        share = leading / cor24["Bhat"]
        return {
            "preset": "harmonic",
            "alpha": [str(v) for v in alpha.values],
            "m": m,
            "g1": g.g1,
            "checks": {
                "g1<=exp(1.030883m)": _ok(rosser),
                "leading_term_dominates": _ok(le(iv.mpf("0.5"), share)),
            },
            "informative": {
                "formula<=closed_form": _ok(le(cor23["formula"], closed)),
                "loglog_hat_H0<=closed_form": _ok(le(cor23["loglog_hat_H0"], ll_closed)),
                "sa_formula<=sa_closed_form": _ok(le(prior["_values"]["a_sa"], sa_closed)),
            },
            "Ahat_formula": iv_json(cor23["formula"]),
            "Ahat_closed_form": iv_json(closed),
            "loglog_hat_H0": iv_json(cor23["loglog_hat_H0"]),
            "loglog_hat_H0_closed_form": iv_json(ll_closed),
            "Bhat": iv_json(cor24["Bhat"]),
            "Bhat_leading_term": iv_json(leading),
            "corollary23": _ahat_json(cor23),
            "corollary24": _bhat_json(cor24),
            "comparison": public(prior),
            "provenance": {
                "Ahat": "1+0.036m+(3.036+7.084m) sqrt(log(m+1))",
                "Hhat0": "log Hhat0 <= 55.125 m^2 log(m+1) exp(110.25 m^2 log(m+1))",
                "rosser": "lcm(1..m) <= exp(1.030883 m)",
                "Bhat": "leading term 7.1 m^2 sqrt(log(m+1))",
            },
        }


def parse_radius_squared(text) -> Fraction:
    """``sqrt(2)`` -> 2, ``1.5`` -> 9/4."""
    t = str(text).strip().replace(" ", "")
    if t.startswith("sqrt(") and t.endswith(")"):
        return Fraction(t[5:-1])
    return Fraction(t) ** 2


def gaussian_disk_points(r2: Fraction) -> list[tuple[int, int]]:
    """All a + bi with a^2 + b^2 <= r2: 0 first, then by norm, real part, imaginary part."""
    R = math.isqrt(int(r2)) + 1
    pts = [(a, b) for a in range(-R, R + 1) for b in range(-R, R + 1) if a * a + b * b <= r2]
    pts.sort(key=lambda p: (p[0] ** 2 + p[1] ** 2, p[0], p[1]))
    return pts


def _preset_gaussian_disk(r2: Fraction, precision: int) -> dict:
    if r2 < 2:
        raise ValueError("gaussian_disk needs r >= sqrt(2)")
    F = FieldSpec(1)
    pts = gaussian_disk_points(r2)
    alpha = AlphaVector.from_values(F, [FieldElement(F, a, b) for a, b in pts])
    m = alpha.m
    g = compute_g(alpha)
    cor23 = corollary23_Ahat(alpha, precision)
    with ivprec(precision):
        rho = _c("1.024")
        g2, g3, g4 = g.enclose(precision)
        s2 = 1 / iv.sqrt(2)
        low = iv.pi * (g3 - s2) ** 2
        high = iv.pi * (g3 + s2) ** 2
        sandwich = _ok(le(low, m + 1)) and _ok(le(iv.mpf(m + 1), high))
        lm1 = iv.log(m + 1)
        slm = iv.sqrt(lm1)
        closed = 1 + (_c("1.596") + _c("4.294") * m) * slm
        ll_closed = iv.log(m * m * (_c("20.25") * lm1 + _c("9.604"))) + m * m * (_c("40.5") * lm1 + _c("19.207"))
        # log g2 <= log(m+1)/2 turns the integer-case coefficients into themselves over sqrt(2)
        c_lin = 6 * iv.sqrt(rho) / iv.sqrt(2)
        c_const = (2 * iv.sqrt(rho) + 2 * rho / 9) / iv.sqrt(2)
        coeff_ok = _within(c_lin, 4.294, 0.01) and _within(c_const, 1.596, 0.01)
        g2_ok = _ok(le(g2, iv.sqrt(m + 1))) if m + 1 >= 9 else None
        return {
            "preset": "gaussian_disk",
            "r_squared": str(r2),
            "points": [str(v) for v in alpha.values],
            "count": m + 1,
            "m": m,
            "checks": {
                "count_matches_enumeration": len(pts) == m + 1,
                "sandwich": sandwich,
                "coefficients_within_0.01": coeff_ok,
                "g1=1": g.g1 == 1,
                "g4=2": g.g4 == Surd(2),
                "g2<=sqrt(m+1)": g2_ok,
            },
            "coefficients": {"4.294": iv_json(c_lin), "1.596": iv_json(c_const)},
            "sandwich": {"low": iv_json(low), "high": iv_json(high)},
            "Ahat_formula": iv_json(cor23["formula"]),
            "Ahat_chain": iv_json(cor23["chain"]),
            "Ahat_closed_form": iv_json(closed),
            "loglog_hat_H0": iv_json(cor23["loglog_hat_H0"]),
            "loglog_hat_H0_closed_form": iv_json(ll_closed),
            "corollary23": _ahat_json(cor23),
            "provenance": {
                "Ahat": "1+(1.596+4.294m) sqrt(log(m+1))",
                "Hhat0": "log Hhat0 = m^2 (20.25 log(m+1)+9.604) exp(m^2 (40.5 log(m+1)+19.207))",
                "count": "pi (g3 - 1/sqrt 2)^2 <= m+1 <= pi (g3 + 1/sqrt 2)^2",
            },
        }


def example_presets(name: str, m: int | None = None, r=None, precision: int = DEFAULT_PREC) -> dict:
    if name == "integers":
        if m is None or m < 2:
            raise ValueError("integers preset needs m >= 2")
        return _preset_integers(m, precision)
    if name == "harmonic":
        if m is None or m < 2:
            raise ValueError("harmonic preset needs m >= 2")
        return _preset_harmonic(m, precision)
    if name == "gaussian_disk":
        return _preset_gaussian_disk(parse_radius_squared(r if r is not None else "sqrt(2)"), precision)
    raise ValueError(f"unknown preset {name!r}")


# -- empirical sanity table ------------------------------------------------------------


def _ring_elements(field: FieldSpec, box: int) -> list[QuadInt]:
    """All ring integers with |beta| <= box."""
    out = []
    if field.is_rational:
        return [QuadInt(field, a) for a in range(-box, box + 1)]
    R = 2 * box + 2
    for a in range(-R, R + 1):
        for b in range(-R, R + 1):
            q = QuadInt(field, a, b)
            if q.norm() <= box * box:
                out.append(q)
    return out


def empirical_check(values, beta_box: int, precision: int = DEFAULT_PREC, max_candidates: int = 10**4) -> dict:
    """|sum beta_i e^{alpha_i}| over every beta in the box, next to the theorem's bound.

    ``values`` are alpha_0 = 0, alpha_1, ... as field elements (m = 1 is allowed;
    the bound is then not available). A row is a violation only when the
    hypothesis H >= H0 holds and the value lies below the bound.
    """
    vals = list(values)
    if len(vals) < 2:
        raise ValueError("need at least alpha_0 and alpha_1")
    if vals[0]:
        raise ValueError("alpha_0 must be 0")
    if len(set(vals)) != len(vals):
        raise ValueError("alpha points must be pairwise distinct")
    field = vals[0].field
    m = len(vals) - 1
    ring = _ring_elements(field, beta_box)
    n_cand = len(ring) ** (m + 1) - 1
    if n_cand > max_candidates:
        raise ValueError(f"{n_cand} candidates exceed the limit {max_candidates}")
    alpha = AlphaVector.from_values(field, vals) if m >= 2 else None
    cache = _constants(alpha, precision) if alpha is not None else None
    exps: dict[int, list[ComplexBall]] = {}

    def balls(bits):
        if bits not in exps:
            exps[bits] = [ComplexBall.exact(1)] + [exp_ball(v, bits) for v in vals[1:]]
        return exps[bits]

    rows = []
    flagged = 0
    violations = 0
    for beta in itertools.product(ring, repeat=m + 1):
        if all(b.norm() == 0 for b in beta):
            continue
        bits = precision
        while True:
            es = balls(bits)
            s = ComplexBall.exact(0)
            for b, e in zip(beta, es):
                if b.norm():
                    s = s + ComplexBall.of_element(b.to_element(), bits + 32) * e
            if not s.contains_zero() or bits >= PREC_CAP:
                break
            bits = min(2 * bits, PREC_CAP)
        row = {"beta": [str(b.to_element()) for b in beta], "value": s.to_json(20), "separated": not s.contains_zero()}
        if s.contains_zero():
            flagged += 1
        with ivprec(precision):
            absv = s.abs_enclosure(precision)
            if alpha is not None:
                logs = [iv.log(iv_max(1, iv.sqrt(iv.mpf(b.norm())))) for b in beta[1:]]
                h = HSpec.from_log_heights(logs, m, "theorem_H", precision)
                rep = theorem_bound(alpha, h, precision, cache)
                row["log_bound"] = iv_json(rep.log_lower_bound)
                row["hypothesis_met"] = rep.hypothesis_met
                if lo(absv) > 0:
                    row["log_value"] = iv_json(iv.log(absv))
                    below = lt(iv.log(absv), rep.log_lower_bound)
                    if rep.hypothesis_met and below is not False:
                        violations += 1
                        row["violation"] = True
            elif lo(absv) > 0:
                row["log_value"] = iv_json(iv.log(absv))
        rows.append(row)
    return {
        "alpha": [str(v) for v in vals],
        "beta_box": beta_box,
        "candidates": n_cand,
        "rows": rows,
        "all_nonzero": flagged == 0,
        "flagged": flagged,
        "violations": violations,
        "any_hypothesis_met": any(r.get("hypothesis_met") for r in rows),
    }
