from fractions import Fraction

from hypothesis import given, settings, strategies as st
from mpmath import mp

from bakerforge.enclosure import hi, lo
from bakerforge.field import FieldElement, FieldSpec
from bakerforge.forms import (
    check_qr_bounds,
    check_raw_bounds,
    evaluate_forms,
    exp_ball,
    q_of_L,
    residual_sequence,
)
from bakerforge.invariants import AlphaVector, compute_base_constants, compute_g, compute_gamma_H0
from bakerforge.pade import PadeParams, construct_pade, derive_family


def build(alpha, field, l):
    a = AlphaVector.parse(alpha, field)
    s = construct_pade(a, l)
    return s, derive_family(s)


def ball_contains(ball, z: complex | mp.mpc) -> bool:
    d = abs(mp.mpc(mp.mpf(ball.re.numerator) / ball.re.denominator, mp.mpf(ball.im.numerator) / ball.im.denominator) - z)
    return d <= mp.mpf(ball.rad.numerator) / ball.rad.denominator


def field_to_mpc(x: FieldElement):
    root = mp.sqrt(x.field.D) if x.field.D else 0
    return mp.mpc(mp.mpf(x.re.numerator) / x.re.denominator, mp.mpf(x.im.numerator) / x.im.denominator * root)


@settings(max_examples=100, deadline=None)
@given(st.integers(-40, 40), st.integers(1, 9), st.integers(-40, 40), st.sampled_from([0, 1, 2, 3, 7]))
def test_exp_ball_encloses_mp_exp(p, q, r, D):
    F = FieldSpec(D)
    x = FieldElement(F, Fraction(p, q), 0 if D == 0 else Fraction(r, q))
    b = exp_ball(x, 96)
    with mp.workprec(400):
        z = mp.exp(field_to_mpc(x))
        assert ball_contains(b, z)
        assert mp.mpf(b.rad.numerator) / b.rad.denominator <= abs(z) * mp.mpf(2) ** -90


def test_integers_three_three():
    s, fam = build("0,1,2", "Q", (3, 3))
    f = evaluate_forms(s, fam, 128)
    assert len(f.B) == 3 and all(len(r) == 3 for r in f.B)
    assert all(b.b == 0 for r in f.B for b in r)
    assert all(f.checks.values())
    assert s.g.g1 ** s.params.L == 1


def test_gaussian_multiples_of_i():
    s, fam = build("0,i,2*i", "Q(i)", (2, 2))
    f = evaluate_forms(s, fam, 128)
    assert f.checks["integral"] and f.checks["det_nonzero"] and f.checks["routes_agree"]


def test_identity_residual_against_mp():
    s, fam = build("0,1,2", "Q", (3, 3))
    f = evaluate_forms(s, fam, 128)
    with mp.workprec(400):
        for idx, row in enumerate(f.B):
            for j in (1, 2):
                want = row[0].a * mp.exp(j) + row[j].a
                assert ball_contains(f.Lrem[idx][j - 1], want)
                assert ball_contains(f.via_exp[idx][j - 1], want)


def test_index_cap_seven():
    assert PadeParams((3, 3), (1, 1)).index_cap == 7


def test_residual_halves_when_precision_doubles():
    for alpha, field in [("0,1,2", "Q"), ("0,i,1+i", "Q(i)"), ("0,w,1", "Q(sqrt(-3))")]:
        s, fam = build(alpha, field, (3, 3))
        r = residual_sequence(s, fam, (64, 128, 256))
        assert r[1] * 2 <= r[0] and r[2] * 2 <= r[1]


def test_raw_bounds_on_small_instances():
    for alpha, field in [("0,1,2", "Q"), ("0,1/2,1/3", "Q"), ("0,i,1+i", "Q(i)"), ("0,w,1", "Q(sqrt(-3))")]:
        for l in [(1, 1), (2, 3), (3, 3)]:
            s, fam = build(alpha, field, l)
            f = evaluate_forms(s, fam, 128)
            out = check_raw_bounds(s, fam, f, 128)
            assert out["all"], (alpha, l, out)


def test_q_of_L_at_sixteen():
    base = compute_base_constants(compute_g(AlphaVector.parse("0,1,-1")))
    q = q_of_L(16, base)
    mp.dps = 40
    b0 = mp.sqrt(mp.log(2)) + mp.log(2) / (2 * mp.sqrt(mp.log(2)))
    want = 16 * mp.log(16) + b0 * 16 * mp.sqrt(mp.log(16))
    assert lo(q) - 1e-25 <= want <= hi(q) + 1e-25


def test_qr_hypothesis_never_met_at_desk_scale():
    s, fam = build("0,1,2", "Q", (3, 3))
    f = evaluate_forms(s, fam, 128)
    base = compute_base_constants(s.g)
    gh = compute_gamma_H0(base, 2, s.field)
    out = check_qr_bounds(s, f, base, gh.log_gamma)
    assert out["hypothesis_met"] is False
    assert all(v in (True, False, None) for v in out["denominator_within_q"])


def test_recursion_matches_truncation_up_to_nu():
    from bakerforge import poly

    for alpha, l in [("0,1/2,1/3", (2, 3)), ("0,1,2", (3, 3)), ("0,i,1+i", (2, 2))]:
        field = "Q(i)" if "i" in alpha else "Q"
        s, fam = build(alpha, field, l)
        L = s.params.L
        for j in (1, 2):
            a = s.alpha.values[j]
            for k in range(s.params.nu[j - 1] + 1):
                trunc = poly.trim([-x for x in poly.times_exp(fam.polys[k][0], a, L)])
                assert trunc == poly.trim(list(fam.polys[k][j]))


def test_fractional_points_report_non_integral_rows():
    s, fam = build("0,1/2,1/3", "Q", (1, 1))
    f = evaluate_forms(s, fam, 128)
    assert f.checks["integral"] is False
    assert any("not integral" in x for x in f.flags)
    # rows k <= nu_j stay integral
    assert all(isinstance(b, type(f.B[0][0])) for b in f.B[0])
    assert f.checks["routes_agree"] and f.checks["det_nonzero"]
    assert check_raw_bounds(s, fam, f, 128)["all"]
