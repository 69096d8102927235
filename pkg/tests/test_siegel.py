import random

from hypothesis import given, settings, strategies as st
from mpmath import mp

from bakerforge.corpus import random_linear_system
from bakerforge.enclosure import hi, lo
from bakerforge.field import FieldSpec, QuadInt
from bakerforge.lattice import integer_kernel, lll_reduce, rank
from bakerforge.siegel import (
    LinearSystem,
    minimal_solution_bruteforce,
    siegel_bound,
    siegel_constants,
    solve_small_system,
    verify_solution,
)

Q, G, E = FieldSpec(0), FieldSpec(1), FieldSpec(3)


def encloses(x, v, slack=1e-25):
    return lo(x) - slack <= v <= hi(x) + slack


def solve(sys, strategy="exhaustive"):
    return solve_small_system(sys, siegel_constants(sys.field), strategy)


def test_bound_rational():
    sys = LinearSystem.from_ints(Q, [[3, 5]])
    assert encloses(siegel_bound(sys, siegel_constants(Q)), 8)


def test_bound_gaussian_both_branches():
    sys = LinearSystem.from_ints(G, [[1, 1, 2]])
    mp.dps = 30
    first = 2 * 2 * mp.sqrt(2)
    second = (2 * mp.sqrt(2) / mp.sqrt(mp.pi)) * mp.sqrt(5 / (2 * mp.sqrt(2))) * 2
    assert first > second
    b = siegel_bound(sys, siegel_constants(G))
    assert encloses(b, first)
    assert abs(float(first) - 5.657) < 1e-3


def test_bound_eisenstein_exponent_one():
    sys = LinearSystem.from_ints(E, [[1, 1]])
    c = siegel_constants(E)
    mp.dps = 30
    main = mp.mpf(c.s.a) * mp.mpf(c.t.a) * 2
    b = siegel_bound(sys, c)
    assert encloses(b, max(main, 2 * 2 * mp.sqrt(3)), 1e-15)


def test_identity_form():
    sol = solve(LinearSystem.from_ints(Q, [[1, -1]]))
    assert sol.max_norm == 1 and sol.z in ([QuadInt(Q, 1), QuadInt(Q, 1)], [QuadInt(Q, -1), QuadInt(Q, -1)])


def test_three_five():
    sys = LinearSystem.from_ints(Q, [[3, 5]])
    sol = solve(sys)
    assert sol.max_norm == 25 and sol.bound_met
    assert {tuple(x.a for x in sol.z)} <= {(5, -3), (-5, 3)}
    # brute force over |z| <= 8
    sols = minimal_solution_bruteforce(sys, 64)
    assert min(max(x.norm() for x in z) for z in sols) == 25


def test_gaussian_unit_solution():
    sys = LinearSystem.from_ints(G, [[1, (0, 1)]])
    sol = solve(sys)
    assert sol.max_norm == 1 and sol.bound_met
    assert verify_solution(sys, sol.z)


def test_verify_solution():
    sys = LinearSystem.from_ints(Q, [[3, 5]])
    assert verify_solution(sys, [QuadInt(Q, 5), QuadInt(Q, -3)])
    assert not verify_solution(sys, [QuadInt(Q, 0), QuadInt(Q, 0)])
    assert not verify_solution(sys, [QuadInt(Q, 1), QuadInt(Q, 1)])


def test_rejects_square_and_zero_rows():
    import pytest

    with pytest.raises(ValueError):
        LinearSystem.from_ints(Q, [[1, 2], [3, 4]])
    with pytest.raises(ValueError):
        LinearSystem.from_ints(Q, [[0, 0, 0]])


def test_solver_is_deterministic():
    rng = random.Random(11)
    for _ in range(10):
        sys = random_linear_system(rng)
        assert solve(sys).z == solve(sys).z


def test_exhaustive_matches_bruteforce_oracle():
    rng = random.Random(5)
    checked = 0
    while checked < 30:
        sys = random_linear_system(rng)
        sol = solve(sys)
        assert verify_solution(sys, sol.z) and sol.bound_met
        below = minimal_solution_bruteforce(sys, sol.max_norm - 1, limit=2 * 10**5)
        if below is None:
            continue
        assert below == []
        at = minimal_solution_bruteforce(sys, sol.max_norm, limit=2 * 10**5)
        assert sol.z in at
        checked += 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([0, 1, 3]))
def test_kernel_reduce_gives_valid_solution(seed, D):
    sys = random_linear_system(random.Random(seed), D)
    sol = solve(sys, "kernel_reduce")
    assert verify_solution(sys, sol.z)
    assert sol.bound_met
    ex = solve(sys)
    assert ex.max_norm <= sol.max_norm


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=4, max_size=4), min_size=1, max_size=3))
def test_integer_kernel_and_lll(rows):
    n = 4
    k = integer_kernel(rows, n)
    assert len(k) == n - rank(rows)
    red = lll_reduce(k, [(1, 1)] * n) if k else []
    for v in red:
        assert any(v)
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)
    if red:
        assert rank(red) == len(k)
