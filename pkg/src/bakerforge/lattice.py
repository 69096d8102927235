"""Integer lattice utilities: exact kernels, LLL under a quadratic form, short-vector enumeration.

Everything is exact (Python integers and Fractions) except the enumeration pruning,
which uses floating Gram-Schmidt data with a safety margin; every vector it yields
is re-checked exactly by the caller.
"""

from __future__ import annotations

from fractions import Fraction
from math import floor, ceil, sqrt

__all__ = ["integer_kernel", "lll_reduce", "enumerate_short", "EnumerationBudgetExceeded", "rank"]


class EnumerationBudgetExceeded(RuntimeError):
    pass


def rank(rows: list[list[int]]) -> int:
    """Rank over Q by fraction-free elimination."""
    mat = [list(r) for r in rows if any(r)]
    if not mat:
        return 0
    ncols = len(mat[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        p = mat[r][c]
        for i in range(r + 1, len(mat)):
            f = mat[i][c]
            if f:
                mat[i] = [p * x - f * y for x, y in zip(mat[i], mat[r])]
        r += 1
        if r == len(mat):
            break
    return r


def integer_kernel(rows: list[list[int]], n: int) -> list[list[int]]:
    """A Z-basis of {v in Z^n : rows . v = 0}.

    Unimodular row reduction of [rows^T | I_n]: once the left block is in echelon
    form, the right halves of its zero rows span the kernel lattice.
    """
    r = len(rows)
    work = [[rows[i][k] for i in range(r)] + [int(k == j) for j in range(n)] for k in range(n)]
    top = 0
    for c in range(r):
        while True:
            nz = [i for i in range(top, n) if work[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(work[i][c]))
            work[top], work[piv] = work[piv], work[top]
            p = work[top][c]
            done = True
            for i in range(top + 1, n):
                if work[i][c]:
                    q = work[i][c] // p
                    work[i] = [x - q * y for x, y in zip(work[i], work[top])]
                    if work[i][c]:
                        done = False
            if done:
                top += 1
                break
        if top == n:
            break
    return [row[r:] for row in work[top:] if not any(row[:r])]


def _dot(u, v, W):
    """u^T W v for a block-diagonal form W given as a list of (size, matrix) blocks."""
    s = 0
    k = 0
    for size, blk in W:
        if size == 1:
            s += blk * u[k] * v[k]
        else:
            a, b, c = blk  # [[a, b], [b, c]]
            s += a * u[k] * v[k] + b * (u[k] * v[k + 1] + u[k + 1] * v[k]) + c * u[k + 1] * v[k + 1]
        k += size
    return s


def lll_reduce(basis: list[list[int]], W, delta: Fraction = Fraction(99, 100)) -> list[list[int]]:
    """LLL-reduce ``basis`` with respect to the positive definite form ``W``.

    Exact rational Gram-Schmidt with incremental updates on swaps.
    """
    b = [list(v) for v in basis]
    n = len(b)
    if n <= 1:
        return b
    G = [[Fraction(_dot(b[i], b[j], W)) for j in range(n)] for i in range(n)]
    mu = [[Fraction(0)] * n for _ in range(n)]
    B = [Fraction(0)] * n

    def gso_row(i):
        for j in range(i):
            s = G[i][j]
            for k in range(j):
                s -= mu[j][k] * mu[i][k] * B[k]
            mu[i][j] = s / B[j]
        s = G[i][i]
        for k in range(i):
            s -= mu[i][k] * mu[i][k] * B[k]
        B[i] = s

    def gram_update_row(i):
        for j in range(n):
            G[i][j] = G[j][i] = Fraction(_dot(b[i], b[j], W))

    gso_row(0)
    k = 1
    computed = 1
    while k < n:
        if k >= computed:
            gso_row(k)
            computed = k + 1
        # size reduction
        changed = False
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                for l in range(j):
                    mu[k][l] -= q * mu[j][l]
                mu[k][j] -= q
                changed = True
        if changed:
            gram_update_row(k)
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
            continue
        b[k], b[k - 1] = b[k - 1], b[k]
        G[k], G[k - 1] = G[k - 1], G[k]
        for row in G:
            row[k], row[k - 1] = row[k - 1], row[k]
        # recompute GSO from k-1 up to what was known
        for i in range(k - 1, computed):
            gso_row(i)
        k = max(k - 1, 1)
    return b


def _gso_float(basis, W):
    n = len(basis)
    G = [[Fraction(_dot(basis[i], basis[j], W)) for j in range(n)] for i in range(n)]
    mu = [[Fraction(0)] * n for _ in range(n)]
    B = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            s = G[i][j]
            for k in range(j):
                s -= mu[j][k] * mu[i][k] * B[k]
            mu[i][j] = s / B[j]
        s = G[i][i]
        for k in range(i):
            s -= mu[i][k] * mu[i][k] * B[k]
        B[i] = s
    return [[float(x) for x in row] for row in mu], [float(x) for x in B]


def enumerate_short(basis, W, radius_sq, visit, node_limit: int = 2_000_000):
    """Call ``visit(v)`` for every nonzero lattice vector with v^T W v <= radius_sq.

    ``radius_sq`` may be a callable returning the current radius (it may shrink
    while enumerating). Vectors v and -v are both visited. Raises
    :class:`EnumerationBudgetExceeded` once more than ``node_limit`` tree nodes
    have been expanded.
    """
    n = len(basis)
    if n == 0:
        return
    mu, B = _gso_float(basis, W)
    radius = radius_sq if callable(radius_sq) else (lambda: radius_sq)
    x = [0] * n
    dim = len(basis[0])
    nodes = 0
    slack = 1.0 + 1e-9

    def rec(i, partial):
        nonlocal nodes
        nodes += 1
        if nodes > node_limit:
            raise EnumerationBudgetExceeded(f"more than {node_limit} enumeration nodes")
        R = float(radius()) * slack + 1e-9
        c = -sum(x[j] * mu[j][i] for j in range(i + 1, n))
        rem = R - partial
        if rem < 0:
            return
        w = sqrt(rem / B[i])
        for xi in range(ceil(c - w - 1e-12), floor(c + w + 1e-12) + 1):
            d = (xi - c) ** 2 * B[i]
            if partial + d > float(radius()) * slack + 1e-9:
                continue
            x[i] = xi
            if i == 0:
                if any(x):
                    v = [0] * dim
                    for k in range(n):
                        if x[k]:
                            xk = x[k]
                            bk = basis[k]
                            for t in range(dim):
                                v[t] += xk * bk[t]
                    visit(v)
            else:
                rec(i - 1, partial + d)
        x[i] = 0

    rec(n - 1, 0.0)
