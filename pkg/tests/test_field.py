from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf

from bakerforge.field import (
    FieldElement,
    FieldSpec,
    QuadInt,
    alpha_normalize,
    parse_alpha_list,
    parse_element,
    parse_field,
    qi_abs,
    qi_arith,
)

FIELDS = [FieldSpec(0), FieldSpec(1), FieldSpec(2), FieldSpec(3), FieldSpec(7)]
ints = st.integers(-50, 50)


def complex_value(q: QuadInt) -> complex:
    # independent evaluation through the embedding into C
    D = q.field.D
    if D == 0:
        return complex(q.a)
    root = complex(0, D**0.5)
    w = (1 + root) / 2 if q.field.half else root
    return q.a + q.b * w


def quad(field, a, b):
    return QuadInt(field, a, 0 if field.is_rational else b)


def test_additive_cancellation():
    F = FieldSpec(1)
    assert QuadInt(F, 1, 1) + QuadInt(F, 2, -1) == QuadInt(F, 3)


def test_zero_annihilates():
    F = FieldSpec(1)
    assert not QuadInt(F, 0) * QuadInt(F, 7, -3)


def test_omega_squared():
    F = FieldSpec(3)
    w = QuadInt(F, 0, 1)
    assert w * w == w - 1


def test_basis_mismatch_rejected():
    with pytest.raises(ValueError):
        qi_arith(QuadInt(FieldSpec(1), 1), QuadInt(FieldSpec(3), 1), "add")


def test_abs_values():
    F1, Q = FieldSpec(1), FieldSpec(0)
    r = qi_abs(QuadInt(F1, 1, 1), 64)
    with mp.workprec(200):
        assert r.a.a <= mp.sqrt(2) <= r.b.b
    assert r.b - r.a < mpf(2) ** -50
    assert abs(float(r.a.a) - 1.41421356) < 1e-8
    z = qi_abs(QuadInt(F1, 0))
    assert z.a == 0 and z.b == 0
    t = qi_abs(QuadInt(Q, -3))
    assert t.a == 3 and t.b == 3


def test_normalize_examples():
    Q, F3 = FieldSpec(0), FieldSpec(3)
    p = alpha_normalize(QuadInt(Q, 2), 4)
    assert (p.x, p.y) == (QuadInt(Q, 1), 2)
    p = alpha_normalize(QuadInt(Q, 0), 7)
    assert (p.x, p.y) == (QuadInt(Q, 0), 1)
    # 1 + sqrt(-3) = 2w - 0 in the half-integer basis, so (1+sqrt(-3))/2 = w
    num = parse_element(F3, "1+sqrt(-3)")
    p = alpha_normalize(num, 2)
    assert (p.x, p.y) == (QuadInt(F3, 0, 1), 1)


def test_parse_field_forms():
    assert parse_field("Q").D == 0
    assert parse_field("Q(i)").D == 1
    assert parse_field("Q(sqrt,-1)").D == 1
    assert parse_field("Q(sqrt(-3))").D == 3
    with pytest.raises(ValueError):
        parse_field("Q(sqrt(-4))")
    with pytest.raises(ValueError):
        parse_field("R")


def test_parse_alpha_list_fractions():
    pts = parse_alpha_list(FieldSpec(0), "0,1,1/2,1/3")
    assert [p.y for p in pts] == [1, 1, 2, 3]
    assert pts[3].value == FieldElement(FieldSpec(0), Fraction(1, 3))


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(FIELDS), ints, ints, ints, ints)
def test_ring_ops_match_complex_embedding(field, a, b, c, d):
    x, y = quad(field, a, b), quad(field, c, d)
    for got, want in [
        (x + y, complex_value(x) + complex_value(y)),
        (x - y, complex_value(x) - complex_value(y)),
        (x * y, complex_value(x) * complex_value(y)),
    ]:
        assert abs(complex_value(got) - want) < 1e-6


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(FIELDS), ints, ints, ints, ints)
def test_norm_is_multiplicative(field, a, b, c, d):
    x, y = quad(field, a, b), quad(field, c, d)
    assert (x * y).norm() == x.norm() * y.norm()
    assert x.norm() == round(abs(complex_value(x)) ** 2)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(FIELDS), ints, ints, st.integers(1, 30))
def test_normalized_denominator_is_minimal(field, a, b, den):
    num = quad(field, a, b)
    p = alpha_normalize(num, den)
    assert p.value * den == num.to_element()
    assert (p.value * p.y).is_integral()
    assert all(not (p.value * y).is_integral() for y in range(1, p.y))


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(FIELDS[1:]), ints, ints)
def test_field_inverse(field, a, b):
    x = FieldElement(field, Fraction(a, 3), Fraction(b, 5))
    if x:
        assert x * x.inverse() == FieldElement(field, 1)
