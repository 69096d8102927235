"""Property checks on the built-in seeded corpus (the ``selftest`` command)."""

from __future__ import annotations

import itertools
import random
import time

from mpmath import iv

from .corpus import random_alpha, random_linear_system, random_y
from .enclosure import hi, ivprec, lo
from .invariants import AlphaVector, compute_base_constants, compute_g, solve_S2, verify_e1_inequality


def _invariants(rng, n, precision):
    bad = []
    for _ in range(n):
        a = random_alpha(rng)
        g = compute_g(a)
        base = compute_base_constants(g, precision)
        ok = all(g.chain().values())
        ok = ok and verify_e1_inequality(base, a.m, g)["holds"] is True
        ok = ok and solve_S2(base, a.m).gamma_ok is True
        if not ok:
            bad.append([str(v) for v in a.values])
    return {"samples": n, "failures": bad, "ok": not bad}


def _nested_log(rng, n, precision):
    from .nestedlog import z_inverse, z_iterates

    bad = 0
    for _ in range(n):
        y = random_y(rng)
        z = z_inverse(y, precision=precision).z
        its = z_iterates(y, 3, precision)
        with ivprec(precision):
            res = abs(z * iv.log(z) - y)
            ok = hi(res) <= 1e-12 * y
            # z1 < z3 < z < z2 < z0
            ok = ok and hi(its[1]) < lo(its[3]) and hi(its[3]) < lo(z) and hi(z) < lo(its[2]) and hi(its[2]) < lo(its[0])
        bad += not ok
    return {"samples": n, "failures": bad, "ok": bad == 0}


def _siegel(rng, n, precision):
    from .siegel import siegel_constants, solve_small_system, verify_solution

    bad = 0
    for _ in range(n):
        lin = random_linear_system(rng)
        sol = solve_small_system(lin, siegel_constants(lin.field, precision=precision), "exhaustive", precision)
        bad += not (verify_solution(lin, sol.z) and sol.bound_met)
    return {"samples": n, "failures": bad, "ok": bad == 0}


def _pade_forms(precision, quick):
    from .forms import check_raw_bounds, evaluate_forms
    from .pade import construct_pade, derive_family

    cases = [("Q", "0,1,2"), ("Q(i)", "0,i,1+i"), ("Q(sqrt(-3))", "0,w,1")]
    top = 2 if quick else 3
    bad = []
    count = 0
    for fs, al in cases:
        a = AlphaVector.parse(al, fs)
        for l in itertools.product(range(1, top + 1), repeat=2):
            s = construct_pade(a, l)
            fam = derive_family(s)
            ok = s.bound_met and all(s.checks["order"]) and s.checks["integral"] and fam.selected is not None
            if ok:
                f = evaluate_forms(s, fam, precision)
                ok = all(f.checks.values()) and check_raw_bounds(s, fam, f, precision)["all"]
            count += 1
            if not ok:
                bad.append([fs, list(l)])
    return {"instances": count, "failures": bad, "ok": not bad}


def _examples(precision):
    from .bounds import dominance_corpus, example_presets

    ex = example_presets("integers", m=2, precision=precision)
    gd = example_presets("gaussian_disk", r="sqrt(2)", precision=precision)
    dom = dominance_corpus(200, 0)
    ok = all(ex["checks"].values()) and all(v is not False for v in gd["checks"].values()) and dom["all_dominated"]
    return {"integers": ex["checks"], "gaussian_disk": gd["checks"], "dominance": dom["all_dominated"], "ok": ok}


def run(seed: int = 0, precision: int = 128, quick: bool = False) -> dict:
    rng = random.Random(seed)
    n = 100 if quick else 1000
    sections = {}
    timings = {}
    for name, fn in [
        ("invariants", lambda: _invariants(rng, n, precision)),
        ("nested_log", lambda: _nested_log(rng, n, precision)),
        ("siegel", lambda: _siegel(rng, 50 if quick else 500, precision)),
        ("pade_forms", lambda: _pade_forms(precision, quick)),
        ("examples", lambda: _examples(precision)),
    ]:
        t = time.perf_counter()
        sections[name] = fn()
        timings[name] = time.perf_counter() - t
    return {
        "seed": seed,
        "quick": quick,
        "sections": sections,
        "ok": all(s["ok"] for s in sections.values()),
        "_timings": timings,
    }
