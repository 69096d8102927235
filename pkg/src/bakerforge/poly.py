"""Dense univariate polynomials with exact field coefficients (lowest degree first)."""

from __future__ import annotations

from itertools import permutations

from .field import FieldElement, FieldSpec

Poly = list  # list[FieldElement], trailing zeros trimmed


def zero(field: FieldSpec) -> FieldElement:
    return FieldElement(field, 0, 0)


def trim(p: Poly) -> Poly:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def degree(p: Poly) -> int:
    """Degree; -1 for the zero polynomial."""
    return len(trim(p)) - 1


def order(p: Poly) -> int | None:
    """Index of the lowest nonzero coefficient; None for the zero polynomial."""
    for i, c in enumerate(p):
        if c:
            return i
    return None


def add(p: Poly, q: Poly, field: FieldSpec) -> Poly:
    n = max(len(p), len(q))
    z = zero(field)
    return trim([(p[i] if i < len(p) else z) + (q[i] if i < len(q) else z) for i in range(n)])


def scale(p: Poly, c) -> Poly:
    return trim([c * x for x in p])


def mul(p: Poly, q: Poly, field: FieldSpec) -> Poly:
    if not p or not q:
        return []
    out = [zero(field)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] = out[i + j] + a * b
    return trim(out)


def deriv(p: Poly) -> Poly:
    return trim([p[i] * i for i in range(1, len(p))])


def evaluate(p: Poly, x, field: FieldSpec) -> FieldElement:
    acc = zero(field)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def exp_powers(alpha: FieldElement, n: int) -> list[FieldElement]:
    """alpha^k / k! for k = 0..n."""
    out = [FieldElement(alpha.field, 1, 0)]
    for k in range(1, n + 1):
        out.append(out[-1] * alpha / k)
    return out


def times_exp(p: Poly, alpha: FieldElement, n: int, powers=None) -> list[FieldElement]:
    """Taylor coefficients 0..n of p(t) * exp(alpha t)."""
    field = alpha.field
    powers = powers or exp_powers(alpha, n)
    out = []
    for N in range(n + 1):
        s = zero(field)
        for h in range(min(N, len(p) - 1) + 1):
            if p[h]:
                s = s + p[h] * powers[N - h]
        out.append(s)
    return out


def determinant(matrix: list[list[Poly]], field: FieldSpec) -> Poly:
    """Determinant of a small square matrix of polynomials by Leibniz expansion."""
    n = len(matrix)
    total: Poly = []
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term: Poly = [FieldElement(field, 1, 0)]
        for i in range(n):
            term = mul(term, matrix[i][perm[i]], field)
            if not term:
                break
        if term:
            total = add(total, scale(term, -1) if inv % 2 else term, field)
    return total


def det_field(rows: list[list[FieldElement]], field: FieldSpec) -> FieldElement:
    """Exact determinant of a square matrix over the field (Gaussian elimination)."""
    a = [list(r) for r in rows]
    n = len(a)
    det = FieldElement(field, 1, 0)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return zero(field)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det = det * a[c][c]
        inv = a[c][c].inverse()
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def rank_field(rows: list[list[FieldElement]]) -> int:
    a = [list(r) for r in rows]
    if not a:
        return 0
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][c].inverse()
        for i in range(r + 1, len(a)):
            if a[i][c]:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return r
