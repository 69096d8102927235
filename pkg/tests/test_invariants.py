import math
import random

import pytest
from mpmath import iv, mp

from bakerforge.corpus import random_alpha
from bakerforge.enclosure import hi, lo
from bakerforge.field import FieldSpec
from bakerforge.invariants import (
    AlphaVector,
    BaseConstants,
    compute_base_constants,
    compute_g,
    compute_gamma_H0,
    compute_theorem_constants,
    s2_function,
    solve_S2,
    verify_e1_inequality,
)


def bisect(F, a, b, n=200):
    a, b = mp.mpf(a), mp.mpf(b)
    fa = F(a)
    for _ in range(n):
        c = (a + b) / 2
        fc = F(c)
        if (fc > 0) == (fa > 0):
            a, fa = c, fc
        else:
            b = c
    return (a + b) / 2


def contains(x, value, slack=1e-25):
    return lo(x) - slack <= value <= hi(x) + slack


@pytest.mark.parametrize("m", [2, 3, 5])
def test_g_for_consecutive_integers(m):
    g = compute_g(AlphaVector.parse(",".join(map(str, range(m + 1)))))
    assert g.g1 == 1 and g.g2 == m + 1 and g.g3 == m and g.g4 == 2


@pytest.mark.parametrize("m", [2, 3, 4])
def test_g_for_harmonic_points(m):
    text = "0,1," + ",".join(f"1/{k}" for k in range(2, m + 1))
    g = compute_g(AlphaVector.parse(text))
    assert g.g1 == math.lcm(*range(1, m + 1))
    assert g.g2 == m + 1 and g.g3 == 1 and g.g4 == 1 + m


def test_too_few_points_rejected():
    with pytest.raises(ValueError):
        AlphaVector.parse("0,1")


def test_nonzero_first_point_rejected():
    with pytest.raises(ValueError):
        AlphaVector.parse("1,2,3")


@pytest.mark.parametrize("m", [2, 3, 6])
def test_base_constants_consecutive_integers(m):
    base = compute_base_constants(compute_g(AlphaVector.parse(",".join(map(str, range(m + 1))))))
    mp.dps = 40
    r = mp.sqrt(mp.log(m + 1))
    assert contains(base.b0, r + mp.log(2) / (2 * r))
    assert contains(base.b1, 0)
    assert contains(base.e1, mp.log(2) + mp.log(m + 1) + 1)
    thm = compute_theorem_constants(base, m)
    assert contains(thm.capA, (3 * m + 1) * r + (m + 1) * mp.log(2) / (2 * r))
    assert contains(thm.capC, m)


def test_e1_for_harmonic_three():
    base = compute_base_constants(compute_g(AlphaVector.parse("0,1,1/2,1/3")))
    mp.dps = 40
    want = 1 + mp.log(6)
    assert contains(base.e1, want)
    assert abs(float(want) - 2.7918) < 1e-4


def test_zero_base_constants_propagate():
    z = iv.mpf(0)
    thm = compute_theorem_constants(BaseConstants(z, z, z, z, 64), 3)
    assert (thm.capA.a, thm.capB.a, thm.capC.a, thm.capD.a, thm.capE.a) == (0, 1, 3, 0, 3)


def test_log_H0_exponent_consecutive_integers():
    # log Hhat0 = (40.5 m^2 log(m+1) + 9.850) exp(81 m^2 log(m+1) + 19.699 m^2) up to rounding of the decimals
    m = 2
    base = compute_base_constants(compute_g(AlphaVector.parse("0,1,2")))
    gh = compute_gamma_H0(base, m, FieldSpec(0))
    mp.dps = 30
    lm = mp.log(m + 1)
    closed = mp.log(mp.mpf("40.5") * m * m * lm + mp.mpf("9.850")) + 81 * m * m * lm + mp.mpf("19.699") * m * m
    assert abs(float(mp.mpf(gh.loglog_H0.a)) - float(closed)) < 0.5
    assert abs(float(mp.mpf(gh.loglog_H0.a)) - 441) <= 2
    assert gh.branch == "gamma"


def test_rational_field_has_no_second_branch():
    base = compute_base_constants(compute_g(AlphaVector.parse("0,1,2")))
    gh = compute_gamma_H0(base, 2, FieldSpec(0))
    assert gh.branch == "gamma"


@pytest.mark.parametrize("text", ["0,1,2", "0,1,2,3", "0,1,2,3,4,5,6", "0,1,1/2", "0,1,1/2,1/3", "0,1,1/2,1/3,1/4,1/5,1/6"])
def test_e1_inequality_examples(text):
    a = AlphaVector.parse(text)
    g = compute_g(a)
    assert verify_e1_inequality(compute_base_constants(g), a.m, g)["holds"] is True


def test_S2_consecutive_integers():
    base = compute_base_constants(compute_g(AlphaVector.parse("0,1,2")))
    r = solve_S2(base, 2)
    assert r.converged and r.gamma_ok is True
    # independent oracle: the root of S log S = rhs(S) by mpmath bisection on the original equation
    e0, e1 = float(mp.mpf(base.e0.a)), float(mp.mpf(base.e1.a))

    def F(u):
        S = mp.e**u
        return S * u - 2 * (e0 * 2 * S * mp.sqrt(u) + e1 * 2 * S + e0 * 4 * mp.sqrt(u) + 2 * e0 * 4 + e1 * 4)

    root = bisect(F, 1, 1000)
    assert abs(root - mp.mpf(r.log_S2.a)) < 1e-8 * root
    assert lo(s2_function(base, 2, 2 * r.log_S2)) < 1


def test_S2_synthetic():
    # e0 = 1, e1 = 0, m = 2: S log S = 2 (2 S sqrt(log S) + 4 sqrt(log S) + 8)
    one, zero = iv.mpf(1), iv.mpf(0)
    r = solve_S2(BaseConstants(zero, one, zero, zero, 128), 2)
    mp.dps = 40

    def F(u):
        S = mp.e**u
        return S * u - (4 * S * mp.sqrt(u) + 8 * mp.sqrt(u) + 16)

    u = mp.mpf(r.log_S2.a)
    assert lo(r.log_S2) <= bisect(F, 1, 100) <= hi(r.log_S2)
    assert abs(F(u)) <= 1e-9 * mp.e**u * u


def test_random_alphas_satisfy_chain():
    rng = random.Random(7)
    for _ in range(100):
        a = random_alpha(rng)
        g = compute_g(a)
        assert all(g.chain().values())
        # g2 against a float evaluation of the definition
        g2 = max(abs(complex(float(p.x.to_element().re), float(p.x.to_element().im) * math.sqrt(a.field.D))) + p.y for p in a.points)
        assert abs(float(g.g2) - g2) < 1e-9 * g2
