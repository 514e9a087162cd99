"""Self-audit: the identities, inequalities and limits, run on random inputs.

:func:`run_audit` returns a JSON-ready dict. Asserted checks decide the
overall ``passed`` flag; the composition and phi-representation tables and
the Fisher-coefficient adjudication are informational.
"""

import math

import numpy as np

from . import classic, csiszar, fisher, unified
from .distributions import random_positive_distribution
from .sufficiency import batch_dpi

WORKED_P = (0.5, 0.5)
WORKED_Q = (0.25, 0.75)
SEAM_DELTA = 1e-4


def _pairs(rng, n, lo=2, hi=16):
    out = []
    for _ in range(n):
        k = int(rng.integers(lo, hi + 1))
        out.append((random_positive_distribution(rng, k), random_positive_distribution(rng, k)))
    return out


def _case(p, q, **extra):
    return {"p": p.tolist(), "q": q.tolist(), **extra}


def _scaled(tol, *values):
    # absolute for O(1) values, relative beyond; float64 cannot resolve 1e-12 on 1e3
    return tol * max(1.0, *(abs(v) for v in values))


def _result(name, worst, tol, counterexample=None, **detail):
    passed = counterexample is None
    return {
        "name": name,
        "passed": passed,
        "worst": worst,
        "tolerance": tol,
        "detail": detail,
        "counterexample": counterexample,
    }


def check_sum_identity(pairs, tol=1e-12):
    worst, bad = 0.0, None
    for p, q in pairs:
        d = abs(classic.js_div(p, q) + classic.ag_div(p, q) - classic.j_div(p, q) / 4.0)
        if d > worst:
            worst = d
        if d > tol and bad is None:
            bad = _case(p, q, diff=d)
    return _result("js + ag = j/4", worst, tol, bad)


def check_chain(pairs):
    bad = None
    worst = math.inf
    for p, q in pairs:
        rep = classic.inequality_report(p, q)
        v = rep.as_tuple()
        worst = min(worst, min(b - a for a, b in zip(v, v[1:])))
        if not rep.passed and bad is None:
            bad = _case(p, q, values=list(v))
    worked = classic.inequality_report(WORKED_P, WORKED_Q).as_tuple()
    return _result("js <= j/8 <= ag <= j/4", worst, classic.CHAIN_SLACK, bad, worked_pair=list(worked))


def check_reductions(pairs, tol=1e-12):
    bad, worst = None, 0.0
    for p, q in pairs:
        ag, kl, js = classic.ag_div(p, q), classic.kl(p, q), classic.js_div(p, q)
        diffs = [
            abs(unified.t1_rs(p, q, 1, 1) - ag),
            abs(unified.t2_rs(p, q, 1, 1) - ag),
            abs(unified.k_rs(p, q, 1, 1) - kl),
            abs(unified.it_s(p, q, 0) - js),
            abs(unified.it_s(p, q, 1) - ag),
        ]
        worst = max(worst, max(diffs))
        if max(diffs) > tol and bad is None:
            bad = _case(p, q, diffs=diffs)
    return _result("classical reductions at r = s = 1", worst, tol, bad)


def check_diagonal(pairs, sigmas=(0.3, 0.5, 2.0, 3.0, 5.0), tol=1e-12):
    bad, worst = None, 0.0
    for p, q in pairs:
        for sg in sigmas:
            a, b = unified.t1_rs(p, q, sg, sg), unified.t2_rs(p, q, sg, sg)
            d = abs(a - b) / _scaled(1.0, a)
            worst = max(worst, d)
            if d > tol and bad is None:
                bad = _case(p, q, sigma=sg, diff=d)
    return _result("t1 = t2 on r = s", worst, tol, bad)


def seam_gaps(p, q, delta=SEAM_DELTA, s_values=(-1.0, 0.5, 2.0), r_values=(0.5, 2.0)):
    """Yield ``(label, generic_value, limit_value)`` on both sides of every seam."""
    fns = {"k_rs": unified.k_rs, "t1": unified.t1_rs, "t2": unified.t2_rs}
    for name, fn in fns.items():
        for s in s_values:
            lim = fn(p, q, 1.0, s)
            for sign in (-1, 1):
                yield f"{name} r=1{sign * delta:+g} s={s:g}", fn(p, q, 1.0 + sign * delta, s), lim
        for r in r_values:
            lim = fn(p, q, r, 1.0)
            for sign in (-1, 1):
                yield f"{name} r={r:g} s=1{sign * delta:+g}", fn(p, q, r, 1.0 + sign * delta), lim
        lim = fn(p, q, 1.0, 1.0)
        for dr in (-delta, delta):
            for ds in (-delta, delta):
                yield f"{name} r=1{dr:+g} s=1{ds:+g}", fn(p, q, 1.0 + dr, 1.0 + ds), lim
    for s0 in (0.0, 1.0):
        lim = unified.it_s(p, q, s0)
        for sign in (-1, 1):
            yield f"it s={s0:g}{sign * delta:+g}", unified.it_s(p, q, s0 + sign * delta), lim


def check_seams(pairs, delta=SEAM_DELTA, rel=1e-3):
    bad, worst = None, 0.0
    for p, q in pairs:
        for label, gen, lim in seam_gaps(p, q, delta):
            ratio = abs(gen - lim) / (1.0 + abs(lim))
            worst = max(worst, ratio)
            if ratio > rel and bad is None:
                bad = _case(p, q, seam=label, generic=gen, limit=lim)
    return _result("branch seam continuity", worst, rel, bad)


def ns_sign_checks(s_values=(-2.0, 0.0, 0.5, 2.0, 3.0), tol=1e-10):
    """Monotonicity in x and s and convexity/concavity in x of ``ns_map``."""
    x = np.round(np.arange(0.0, 5.0 + 1e-9, 0.01), 10)
    failures = []
    curves = {s: unified.ns_map(x, s) for s in s_values}
    for s, y in curves.items():
        if abs(y[0]) > 0 or np.any(y[1:] <= 0):
            failures.append(("nonneg", s))
        if np.any(np.diff(y) <= -tol):
            failures.append(("increasing in x", s))
        d2 = y[2:] - 2.0 * y[1:-1] + y[:-2]
        if s > 1 and np.any(d2 <= -tol):
            failures.append(("convex", s))
        if s < 1 and np.any(d2 >= tol):
            failures.append(("concave", s))
    ordered = sorted(s_values)
    for lo, hi in zip(ordered, ordered[1:]):
        if np.any(curves[hi] - curves[lo] <= -tol):
            failures.append(("increasing in s", lo, hi))
    return failures


def check_ns():
    fails = ns_sign_checks()
    return _result("N_s properties", len(fails), 1e-10, {"failures": fails} if fails else None)


def check_ordering(pairs, r_grid=(0.3, 0.5, 1.0, 2.0, 3.0), s_grid=(-2.0, -1.0, 0.0, 0.5, 1.0, 2.0, 3.0, 5.0),
                 tol=1e-12):
    bad, worst = None, math.inf
    for p, q in pairs:
        for r in r_grid:
            for s in s_grid:
                a, b = unified.t1_rs(p, q, r, s), unified.t2_rs(p, q, r, s)
                margins = [a, b]
                if s <= r:
                    margins.append(b - a)
                if s >= r:
                    margins.append(a - b)
                m = min(margins) / _scaled(1.0, a, b)
                worst = min(worst, m)
                if m < -tol and bad is None:
                    bad = _case(p, q, r=r, s=s, t1=a, t2=b)
        for s in np.linspace(-5.0, 5.0, 21):
            v = unified.it_s(p, q, s)
            worst = min(worst, v)
            if v < -tol and bad is None:
                bad = _case(p, q, s=float(s), it=v)
    return _result("non-negativity and t1/t2 ordering", worst, tol, bad)


IT_GRID = (-2.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0)


def check_representation(pairs, tol=1e-12):
    gens = {s: csiszar.phi_it(s) for s in IT_GRID}
    bad, worst = None, 0.0
    for p, q in pairs:
        for s, g in gens.items():
            v = unified.it_s(p, q, s)
            d = abs(csiszar.csiszar_div(g, p, q) - v) / _scaled(1.0, v)
            worst = max(worst, d)
            if d > tol and bad is None:
                bad = _case(p, q, s=s, diff=d)
    return _result("it_s as a Csiszar divergence", worst, tol, bad)


def check_derivatives(s_values=(-2.0, 0.0, 0.5, 1.0, 3.0), rel=1e-6):
    grid = csiszar.log_grid()
    bad, worst = None, 0.0
    for s in s_values:
        g = csiszar.phi_it(s)
        dc = csiszar.derivative_check(g, grid)
        probe = csiszar.convexity_probe(g, grid)
        worst = max(worst, dc.max_rel_err_d1, dc.max_rel_err_d2)
        if max(dc.max_rel_err_d1, dc.max_rel_err_d2) > rel or probe.min_d2 <= 0:
            bad = bad or {"s": s, "d1": dc.max_rel_err_d1, "d2": dc.max_rel_err_d2, "min_d2": probe.min_d2}
    anchor = abs(csiszar.phi_it(0.0).curvature_at_one - 0.25)
    if anchor > 1e-10:
        bad = bad or {"d2(1) at s=0": anchor + 0.25}
    return _result("phi_it derivatives", worst, rel, bad)


def check_dpi(trials, seed):
    rep = batch_dpi(trials, 4, 4, seed=seed)
    bad = {"failures": rep.failures[:10]} if rep.failures else None
    return _result("data processing", rep.worst_slack, 1e-10, bad, n_checks=rep.n_checks)


FISHER_THETAS = (0.2, 0.4, 0.5, 0.7)


def check_fisher(rel=0.01):
    fam = fisher.bernoulli()
    gens = [csiszar.kl_generator(), csiszar.phi_it(0.0), csiszar.phi_it(1.0)]
    bad, worst, rows = None, 0.0, []
    for th in FISHER_THETAS:
        for g in gens:
            res = fisher.theorem51_check(fam, th, g)
            ratio = res.lhs.entries[0, 0] / res.fisher.entries[0, 0]
            err = abs(ratio - g.curvature_at_one / 2.0) / (g.curvature_at_one / 2.0)
            worst = max(worst, err)
            rows.append({"theta": th, "phi": g.name, "ratio": ratio, "rel_err": err})
            if err > rel and bad is None:
                bad = rows[-1]
    return _result("csiszar limit = phi''(1)/2 * Fisher", worst, rel, bad, rows=rows)


COEFFICIENT_CASES = (("T1_rs", 2.0, 2.0), ("T2_rs", 2.0, 2.0), ("IT_s", 1.0, 0.0))


def coefficient_table(theta=0.4):
    fam = fisher.bernoulli()
    out = []
    for fid, r, s in COEFFICIENT_CASES:
        rep = fisher.prop52_check(fam, theta, fid, r, s)
        out.append({
            "family": fid,
            "r": r,
            "s": s,
            "coefficient": rep.estimated_coefficient,
            "candidates": rep.candidates,
            "best_match": rep.best_match,
        })
    return out


def check_coefficients():
    table = coefficient_table()
    bad = [row for row in table if row["best_match"] is None]
    it_row = next(row for row in table if row["family"] == "IT_s")
    if it_row["best_match"] != "1/8":
        bad.append(it_row)
    return _result("Fisher coefficient adjudication", len(bad), 0.01, bad or None, table=table)


def run_audit(trials=200, seed=1):
    """Run every check; ``trials`` scales the number of random pairs."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    pairs = _pairs(rng, trials)
    small = pairs[: max(1, trials // 4)]
    checks = [
        check_sum_identity(pairs),
        check_chain(pairs),
        check_reductions(pairs),
        check_diagonal(pairs),
        check_seams(small),
        check_ns(),
        check_ordering(small),
        check_representation(pairs),
        check_derivatives(),
        check_dpi(trials, seed),
        check_fisher(),
        check_coefficients(),
    ]
    comp = unified.composition_table(n_pairs=min(trials, 100), seed=seed)
    phi_rep = []
    for p, q in small[:20]:
        for r in (0.5, 2.0, 3.0):
            for s in (0.5, 2.0, 3.0):
                a = csiszar.phi_representation_audit(p, q, r, s)
                phi_rep.append({"r": r, "s": s, "t1_abs_diff": a.t1.abs_diff, "t2_abs_diff": a.t2.abs_diff})
    return {
        "seed": seed,
        "trials": trials,
        "passed": all(c["passed"] for c in checks),
        "checks": checks,
        "composition_audit": comp,
        "phi_representation_max_abs_diff": {
            "t1": max(row["t1_abs_diff"] for row in phi_rep),
            "t2": max(row["t2_abs_diff"] for row in phi_rep),
        },
    }
