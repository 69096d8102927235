"""The inverse z(y) of y = z log z and the error term built from it.

For y > e the iterates z_0 = y, z_n = y / log z_{n-1} alternate around z(y)
(odd ones below, even ones above), which gives a certified starting bracket.
Inside it a Newton step is run in ordinary multiprecision and the result is
then certified by checking the sign of z log z - y at both ends of a tiny
interval; bisection takes over if that check does not go through.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import iv, mp

from .enclosure import DEFAULT_PREC, hi, iv_json, ivprec, le, lo, lt, to_iv

__all__ = [
    "ZResult",
    "z_inverse",
    "z_iterates",
    "xi_epsilon",
    "epsilon_upper_chain",
    "RHO",
]

RHO = mpmath.mpf("1.024")


@dataclass(frozen=True)
class ZResult:
    z: object
    converged: bool
    iterations: int

    def to_json(self) -> dict:
        return {"z": iv_json(self.z), "converged": self.converged, "iterations": self.iterations}


def _g_sign(z, y, precision):
    """Certified sign of z log z - y for a point z (mpf) and interval y; None if unresolved."""
    with ivprec(precision):
        zi = iv.mpf(z)
        v = zi * iv.log(zi) - y
        if lo(v) > 0:
            return 1
        if hi(v) < 0:
            return -1
        return None


def _z_point(y_point, tol, precision, max_iter):
    """Enclosure [a, b] of z(y) for a point y (given as an exact mpf)."""
    y = iv.mpf(y_point)
    with ivprec(precision):
        if y_point > 3:
            its = z_iterates(y, 2, precision)
            a, b = lo(its[1]), hi(its[2])
        else:
            # near y = e the iterate bracket degenerates; z log z is increasing on [1, inf)
            a, b = mp.mpf(1), mp.mpf(3)
    with mp.workprec(precision + 20):
        # Newton from above converges monotonically since z log z is convex.
        z = mp.mpf(b)
        n = 0
        for n in range(1, max_iter + 1):
            step = (z * mp.log(z) - y_point) / (mp.log(z) + 1)
            z -= step
            if abs(step) <= z * mp.mpf(2) ** (-precision + 4):
                break
        eps = max(z * tol / 4, z * mp.mpf(2) ** (-precision + 8))
        lo_c, hi_c = z - eps, z + eps
    if _g_sign(lo_c, y, precision) == -1 and _g_sign(hi_c, y, precision) == 1:
        return lo_c, hi_c, True, n
    # fallback: certified bisection inside the iterate bracket
    it = 0
    while it < max_iter:
        with mp.workprec(precision):
            if b - a <= tol * b:
                return a, b, True, n + it
            mid = (a + b) / 2
        s = _g_sign(mid, y, precision)
        if s == 1:
            b = mid
        elif s == -1:
            a = mid
        else:
            return a, b, False, n + it
        it += 1
    return a, b, False, n + it


def z_inverse(y, tol: float = 1e-15, max_iter: int = 200, precision: int = DEFAULT_PREC) -> ZResult:
    """Enclosure of z(y) with z log z = y, for an enclosure y > e.

    Monotonicity of z lets an interval y be handled endpoint by endpoint.
    ``converged`` is False when the width target ``tol`` (relative) was not met;
    the returned interval is still a valid enclosure.
    """
    if not 0 < tol < 1:
        raise ValueError("tol must lie in (0, 1)")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    with ivprec(precision):
        y = to_iv(y, precision)
        if hi(y) < lo(iv.e):
            raise ValueError("z_inverse needs y >= e")
    ylo, yhi = lo(y), hi(y)
    a, _, c1, n1 = _z_point(ylo, tol, precision, max_iter)
    if ylo == yhi:
        b, c2, n2 = _, c1, 0
    else:
        _, b, c2, n2 = _z_point(yhi, tol, precision, max_iter)
    with ivprec(precision):
        return ZResult(iv.mpf([a, b]), c1 and c2, n1 + n2)


def z_iterates(y, n: int, precision: int = DEFAULT_PREC) -> list:
    """z_0 = y, z_k = y / log z_{k-1}, k = 1..n, as enclosures."""
    with ivprec(precision):
        y = to_iv(y, precision)
        out = [y]
        for _ in range(n):
            out.append(y / iv.log(out[-1]))
        return out


def xi_epsilon(consts, f, log_H, precision: int = DEFAULT_PREC, z: ZResult | None = None):
    """eps(H) = A sqrt(f q) + B q + C log z / log H + D sqrt(log z) / log H with z = z(f log H), q = z / log H.

    ``consts`` is anything with ``capA .. capD`` (a :class:`ThmConstants`).
    Returns (eps enclosure, ZResult).
    """
    with ivprec(precision):
        log_H = to_iv(log_H, precision)
        f = to_iv(f, precision)
        y = f * log_H
        if lo(y) <= mp.e:
            raise ValueError("xi_epsilon needs f log H > e")
        if z is None:
            z = z_inverse(y, precision=precision)
        zz = z.z
        lz = iv.log(zz)
        # q = z / log H evaluated as exp(log z - log log H): stable for huge log H
        q = iv.exp(lz - iv.log(log_H))
        A, B, C, D = consts.capA, consts.capB, consts.capC, consts.capD
        eps = A * iv.sqrt(f * q) + B * q + C * lz / log_H + D * iv.sqrt(lz) / log_H
        return eps, z


def epsilon_upper_chain(log_H, log_gamma=None, precision: int = DEFAULT_PREC) -> dict:
    """The three successive upper bounds for z(2 log H).

    z2 = 2 log H / log(2 log H / log(2 log H)); the middle bound
    2 (log X / (log X - log log X)) (1 - log 2 / log(2 log H)) log H / log log H
    with X = gamma log gamma; the weak bound 2 rho log H / log log H, rho = 1.024.
    The middle inequalities are only asserted when log H >= (gamma log gamma)/2;
    a tie at the threshold counts as met.
    """
    with ivprec(precision):
        log_H = to_iv(log_H, precision)
        y = 2 * log_H
        z = z_inverse(y, precision=precision).z
        z2 = y / iv.log(y / iv.log(y))
        llH = iv.log(log_H)
        rho = iv.mpf("1.024")
        weak = 2 * rho * log_H / llH
        out = {
            "z": iv_json(z),
            "z2": iv_json(z2),
            "weak": iv_json(weak),
            "two_rho": iv_json(2 * rho),
            "z_lt_z2": lt(z, z2),
            "middle": None,
            "z2_le_middle": None,
            "middle_lt_weak": None,
            "hypothesis_met": None,
        }
        if log_gamma is not None:
            lg = to_iv(log_gamma, precision)
            logX = lg + iv.log(lg)  # log(gamma log gamma)
            coef = logX / (logX - iv.log(logX))
            middle = 2 * coef * (1 - iv.log(2) / iv.log(y)) * log_H / llH
            # log H >= gamma log gamma / 2  <=>  log log H >= log X - log 2
            hyp = le(logX - iv.log(2), llH)
            if hyp is None:
                hyp = True  # threshold tie: the endpoints agree to working precision
            out["middle"] = iv_json(middle)
            out["hypothesis_met"] = hyp
            if hyp:
                r1 = le(z2, middle)
                out["z2_le_middle"] = True if r1 is None else r1
                out["middle_lt_weak"] = lt(middle, weak)
        return out
