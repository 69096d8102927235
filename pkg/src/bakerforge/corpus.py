"""Seeded random inputs shared by the self-test and the test suite."""

from __future__ import annotations

import math
import random

from .field import FieldSpec, QuadInt, alpha_normalize
from .invariants import AlphaVector
from .siegel import LinearSystem

INVARIANT_FIELDS = (0, 1, 2, 3, 7)
SIEGEL_FIELDS = (0, 1, 3)


def random_alpha(rng: random.Random, D: int | None = None, m_range=(2, 5), bound: int = 9) -> AlphaVector:
    """alpha_0 = 0 and m distinct nonzero points with numerator coordinates in [-bound, bound], denominators <= bound."""
    if D is None:
        D = rng.choice(INVARIANT_FIELDS)
    field = FieldSpec(D)
    m = rng.randint(*m_range)
    pts = [alpha_normalize(QuadInt(field, 0))]
    seen = {pts[0].value}
    while len(pts) < m + 1:
        a = rng.randint(-bound, bound)
        b = 0 if field.is_rational else rng.randint(-bound, bound)
        if a == 0 and b == 0:
            continue
        p = alpha_normalize(QuadInt(field, a, b), rng.randint(1, bound))
        if p.value in seen:
            continue
        seen.add(p.value)
        pts.append(p)
    return AlphaVector(field, tuple(pts))


def random_linear_system(rng: random.Random, D: int | None = None, max_N: int = 4, coeff: int = 3) -> LinearSystem:
    """M < N <= max_N forms with coordinates in [-coeff, coeff], no zero row."""
    if D is None:
        D = rng.choice(SIEGEL_FIELDS)
    field = FieldSpec(D)
    N = rng.randint(2, max_N)
    M = rng.randint(1, N - 1)
    rows = []
    while len(rows) < M:
        row = []
        for _ in range(N):
            a = rng.randint(-coeff, coeff)
            b = 0 if field.is_rational else rng.randint(-coeff, coeff)
            row.append(QuadInt(field, a, b))
        if any(row):
            rows.append(tuple(row))
    return LinearSystem(field, tuple(rows))


def random_y(rng: random.Random) -> float:
    """log-uniform in (e, 1e9)."""
    return math.exp(rng.uniform(1.0, math.log(1e9)))
