"""Small nonzero solutions of homogeneous linear systems over Z or an imaginary quadratic ring.

The existence bound is the explicit Siegel-lemma bound
``max{2c*sqrt(D), s * t**(M/(N-M)) * (A_1 ... A_M)**(1/(N-M))}`` with
``A_p = sum_n |a_pn|``; over Q only the second branch is present and s = t = 1.
Solutions are found constructively and then checked against the bound.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from mpmath import iv

from .enclosure import DEFAULT_PREC, iv_json, iv_max, ivprec, le
from .field import FieldSpec, QuadInt, qi_abs
from .lattice import EnumerationBudgetExceeded, enumerate_short, integer_kernel, lll_reduce, rank

log = logging.getLogger(__name__)

__all__ = [
    "SiegelConstants",
    "LinearSystem",
    "SiegelSolution",
    "siegel_constants",
    "siegel_bound",
    "solve_small_system",
    "verify_solution",
    "minimal_solution_bruteforce",
]


@dataclass(frozen=True)
class SiegelConstants:
    field: FieldSpec
    s: object
    t: object
    c: object | None
    asymptotic: bool = False
    note: str = ""

    def to_json(self) -> dict:
        return {
            "s": iv_json(self.s),
            "t": iv_json(self.t),
            "c": None if self.c is None else iv_json(self.c),
            "asymptotic": self.asymptotic,
            "note": self.note,
        }


def siegel_constants(field: FieldSpec, asymptotic: bool = False, precision: int = DEFAULT_PREC) -> SiegelConstants:
    """s, t, c for ``field``.

    The two s values of the explicit table are not labelled by residue class; they are
    assigned in the order of the c column (first row D = 1, 2 mod 4, second D = 3 mod 4).
    """
    with ivprec(precision):
        if field.is_rational:
            return SiegelConstants(field, iv.mpf(1), iv.mpf(1), None, asymptotic)
        D = field.D
        d4 = iv.sqrt(iv.sqrt(iv.mpf(D)))
        spi = iv.sqrt(iv.pi)
        if field.half:
            c = iv.mpf(2)
            s = (iv.sqrt(2) if asymptotic else iv.mpf(2)) * d4 / spi
        else:
            c = 2 * iv.sqrt(2)
            s = (iv.mpf(2) if asymptotic else 2 * iv.sqrt(2)) * d4 / spi
        t = iv.mpf(1) if asymptotic else iv.mpf(5) / (2 * iv.sqrt(2))
        note = "s rows assigned in c-column order (D=1,2 mod 4 first, then D=3 mod 4)"
        return SiegelConstants(field, s, t, c, asymptotic, note)


@dataclass(frozen=True)
class LinearSystem:
    """M homogeneous forms in N unknowns with coefficients in the ring of integers."""

    field: FieldSpec
    coeffs: tuple[tuple[QuadInt, ...], ...]

    def __post_init__(self):
        rows = self.coeffs
        if not rows:
            raise ValueError("empty system")
        n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise ValueError("ragged coefficient matrix")
        if not len(rows) < n:
            raise ValueError(f"need M < N, got M={len(rows)}, N={n}")
        for r in rows:
            if not any(r):
                raise ValueError("all-zero row (trivial linear form)")
            for a in r:
                if a.field != self.field:
                    raise ValueError("coefficient field mismatch")

    @classmethod
    def from_ints(cls, field: FieldSpec, rows) -> LinearSystem:
        def conv(a):
            if isinstance(a, QuadInt):
                return a
            if isinstance(a, (tuple, list)):
                return QuadInt(field, *a)
            return QuadInt(field, a)

        return cls(field, tuple(tuple(conv(a) for a in row) for row in rows))

    @classmethod
    def from_json(cls, field: FieldSpec, obj) -> LinearSystem:
        rows = obj["rows"] if isinstance(obj, dict) else obj
        return cls(field, tuple(tuple(QuadInt.from_json(field, a) for a in row) for row in rows))

    def to_json(self) -> dict:
        return {"field": self.field.to_json(), "rows": [[a.to_json() for a in r] for r in self.coeffs]}

    @property
    def M(self) -> int:
        return len(self.coeffs)

    @property
    def N(self) -> int:
        return len(self.coeffs[0])

    def row_sums(self, precision: int = DEFAULT_PREC) -> list:
        with ivprec(precision):
            return [sum((qi_abs(a, precision) for a in row), iv.mpf(0)) for row in self.coeffs]

    def evaluate(self, z) -> list[QuadInt]:
        return [sum((a * x for a, x in zip(row, z)), QuadInt(self.field, 0)) for row in self.coeffs]

    def integer_rows(self) -> list[list[int]]:
        """The system as integer equations in the real coordinates (a_n, b_n) of the unknowns."""
        f = self.field
        out = []
        for row in self.coeffs:
            if f.is_rational:
                out.append([a.a for a in row])
                continue
            # a * (u + v w) = a*u + (a*w)*v ; split into the two coordinates
            r0, r1 = [], []
            w = QuadInt(f, 0, 1)
            for a in row:
                aw = a * w
                r0 += [a.a, aw.a]
                r1 += [a.b, aw.b]
            out += [r0, r1]
        return out


def siegel_bound(sys: LinearSystem, consts: SiegelConstants, precision: int = DEFAULT_PREC):
    """Enclosure of the explicit bound for max |z_n| of some nonzero solution."""
    M, N = sys.M, sys.N
    with ivprec(precision):
        prod = iv.mpf(1)
        for a in sys.row_sums(precision):
            prod *= a
        e = iv.mpf(1) / (N - M)
        main = consts.s * consts.t ** (iv.mpf(M) / (N - M)) * prod ** e
        if sys.field.is_rational:
            return main
        return iv_max(2 * consts.c * iv.sqrt(sys.field.D), main)


def verify_solution(sys: LinearSystem, z) -> bool:
    """True iff z is nonzero and every form vanishes exactly."""
    if len(z) != sys.N:
        raise ValueError("dimension mismatch")
    if not any(z):
        return False
    return not any(sys.evaluate(z))


@dataclass
class SiegelSolution:
    z: list[QuadInt]
    max_norm: int
    bound: object
    bound_met: bool
    strategy: str
    notes: list[str] = dc_field(default_factory=list)

    @property
    def max_abs(self):
        return iv.sqrt(iv.mpf(self.max_norm))

    def to_json(self) -> dict:
        return {
            "z": [x.to_json() for x in self.z],
            "max_norm": self.max_norm,
            "max_abs": iv_json(self.max_abs),
            "bound": iv_json(self.bound),
            "bound_met": self.bound_met,
            "strategy": self.strategy,
            "notes": self.notes,
        }


# -- helpers -----------------------------------------------------------------


def _form(field: FieldSpec, N: int):
    if field.is_rational:
        return [(1, 1)] * N
    if field.half:
        q = Fraction(1 + field.D, 4)
        return [(2, (Fraction(1), Fraction(1, 2), q))] * N
    return [(2, (Fraction(1), Fraction(0), Fraction(field.D)))] * N


def _to_quads(field: FieldSpec, v: list[int]) -> list[QuadInt]:
    if field.is_rational:
        return [QuadInt(field, x) for x in v]
    return [QuadInt(field, v[2 * i], v[2 * i + 1]) for i in range(len(v) // 2)]


def _max_norm(z: list[QuadInt]) -> int:
    return max(x.norm() for x in z)


def _canonical_key(z: list[QuadInt]):
    """Unit-normalised coordinate tuple; among unit multiples the lexicographically largest."""
    units = z[0].field.units
    best = None
    for u in units:
        t = tuple(c for x in z for c in (u * x).coords())
        if best is None or t > best[0]:
            best = (t, u)
    return best


def _canonical(z: list[QuadInt]) -> tuple[tuple, list[QuadInt]]:
    t, u = _canonical_key(z)
    return t, [u * x for x in z]


def _bound_sq_ok(max_norm: int, bound) -> bool:
    """max |z|^2 <= bound^2, allowing an exact tie to count as met."""
    with ivprec(256):
        r = le(iv.mpf(max_norm), bound * bound)
    if r is None:
        return True
    return r


def kernel_basis(sys: LinearSystem) -> list[list[int]]:
    rows = sys.integer_rows()
    dim = sys.N if sys.field.is_rational else 2 * sys.N
    kb = integer_kernel(rows, dim)
    expected = dim - rank(rows)
    if len(kb) != expected:
        raise AssertionError(f"kernel rank {len(kb)} != {expected}")
    return lll_reduce(kb, _form(sys.field, sys.N))


def solve_small_system(
    sys: LinearSystem,
    consts: SiegelConstants,
    strategy: str = "exhaustive",
    precision: int = DEFAULT_PREC,
    node_limit: int = 2_000_000,
) -> SiegelSolution:
    """A nonzero solution; ``exhaustive`` returns one of minimal max-modulus.

    ``exhaustive`` enumerates the whole kernel lattice inside the ball that any
    better solution must lie in, so its answer is the true minimum of max |z_n|
    (ties broken by the unit-normalised lexicographic order). ``kernel_reduce``
    takes the best vector of an LLL-reduced kernel basis and checks it against
    the bound, escalating to enumeration when the bound is missed. ``auto`` tries
    enumeration within ``node_limit`` and otherwise keeps the reduced vector.
    """
    if strategy not in ("exhaustive", "kernel_reduce", "auto"):
        raise ValueError(f"unknown strategy {strategy!r}")
    bound = siegel_bound(sys, consts, precision)
    field = sys.field
    basis = kernel_basis(sys)
    W = _form(field, sys.N)
    notes = []

    best = None
    for v in basis:
        z = _to_quads(field, v)
        key = (_max_norm(z), _canonical_key(z)[0])
        if best is None or key < best[0]:
            best = (key, z)

    if strategy == "kernel_reduce":
        if _bound_sq_ok(best[0][0], bound):
            _, z = _canonical(best[1])
            return SiegelSolution(z, best[0][0], bound, True, "kernel_reduce")
        notes.append("reduced basis missed the bound; enumerating")

    state = {"best": best}
    N = sys.N

    def radius():
        return N * state["best"][0][0]

    def visit(v):
        z = _to_quads(field, v)
        mn = _max_norm(z)
        if mn > state["best"][0][0]:
            return
        key = (mn, _canonical_key(z)[0])
        if key < state["best"][0]:
            state["best"] = (key, z)

    used = "exhaustive" if strategy != "kernel_reduce" else "kernel_reduce+exhaustive"
    try:
        enumerate_short(basis, W, radius, visit, node_limit=node_limit)
    except EnumerationBudgetExceeded:
        if strategy == "exhaustive":
            notes.append("enumeration budget exceeded; result may not be minimal")
        used = "kernel_reduce" if strategy == "auto" else used + "(truncated)"
        log.info("enumeration budget exceeded for %dx%d system", sys.M, sys.N)
    best = state["best"]
    _, z = _canonical(best[1])
    assert verify_solution(sys, z)
    return SiegelSolution(z, best[0][0], bound, _bound_sq_ok(best[0][0], bound), used, notes)


def _ring_points(field: FieldSpec, max_norm: int) -> list[QuadInt]:
    """All ring elements with norm <= max_norm (brute force over a coordinate box)."""
    from math import isqrt

    pts = []
    if field.is_rational:
        r = isqrt(max_norm)
        return [QuadInt(field, a) for a in range(-r, r + 1)]
    r = isqrt(4 * max_norm) + 2
    for a in range(-r - 1, r + 2):
        for b in range(-r - 1, r + 2):
            q = QuadInt(field, a, b)
            if q.norm() <= max_norm:
                pts.append(q)
    return pts


def minimal_solution_bruteforce(sys: LinearSystem, max_norm: int, limit: int = 10**6):
    """Brute-force oracle: every nonzero solution with max |z_n|^2 <= max_norm.

    Independent of the lattice machinery; used to confirm minimality. Returns
    ``None`` when the box has more than ``limit`` candidates.
    """
    from itertools import product

    pts = _ring_points(sys.field, max_norm)
    if len(pts) ** sys.N > limit:
        return None
    out = []
    for z in product(pts, repeat=sys.N):
        if any(z) and not any(sys.evaluate(z)):
            out.append(list(z))
    return out
