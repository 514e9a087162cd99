import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from agdiv import classic, unified as U
from agdiv.exceptions import BadParam, NegativeInput, NonPositive, SupportMismatch
from conftest import (
    it_generic_oracle,
    k_generic_oracle,
    mid,
    positive_pairs,
    random_pairs,
    t2_generic_oracle,
)

P, Q = np.array([0.5, 0.5]), np.array([0.25, 0.75])
M = mid(P, Q)
PAIRS = random_pairs(11, 60, hi=8)


def test_k_rs_examples():
    assert U.k_rs(P, Q, 1, 1) == pytest.approx(classic.kl(P, Q), abs=1e-15)
    # generic branch by hand: sum p^2/q - 1 = 1 + 1/3 - 1
    assert U.k_rs(P, Q, 2, 2) == pytest.approx(1 / 3, abs=1e-14)


def test_t1_rs_worked_pair():
    # half of (sum m^2/p + sum m^2/q - 2), evaluated by hand: 0.5*(1.0625 + 1.0833.. - 2)
    expected = 0.5 * (k_generic_oracle(M, P, 2, 2) + k_generic_oracle(M, Q, 2, 2))
    assert expected == pytest.approx(0.5 * (1.0625 + 13 / 12 - 2), abs=1e-15)
    assert U.t1_rs(P, Q, 2, 2) == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("fn", [U.k_rs, U.t1_rs, U.t2_rs])
@pytest.mark.parametrize("r, s", [(1, 1), (1, 3), (0.5, 1), (2, 2), (0.3, -2), (5, 0)])
def test_identity_gives_zero(fn, r, s):
    p = np.array([0.1, 0.2, 0.7])
    assert abs(fn(p, p, r, s)) <= 1e-15


@pytest.mark.parametrize("s", [-3, -0.5, 0, 0.5, 1, 2, 4])
def test_it_identity_zero(s):
    p = np.array([0.1, 0.2, 0.7])
    assert abs(U.it_s(p, p, s)) <= 1e-15


@pytest.mark.parametrize("r, s", [(0.5, 2.0), (2.0, 3.0), (3.0, -1.0), (0.3, 0.5), (7.0, 1.5)])
def test_generic_branches_match_oracles(r, s):
    for p, q in PAIRS:
        m = mid(p, q)
        assert U.k_rs(p, q, r, s) == pytest.approx(k_generic_oracle(p, q, r, s), rel=1e-10)
        t1 = 0.5 * (k_generic_oracle(m, p, r, s) + k_generic_oracle(m, q, r, s))
        assert U.t1_rs(p, q, r, s) == pytest.approx(t1, rel=1e-10)
        assert U.t2_rs(p, q, r, s) == pytest.approx(t2_generic_oracle(p, q, r, s), rel=1e-10)


@pytest.mark.parametrize("s", [-5, -2, -0.5, 0.5, 2, 3, 5])
def test_it_matches_oracle(s):
    for p, q in PAIRS:
        assert U.it_s(p, q, s) == pytest.approx(it_generic_oracle(p, q, s), rel=1e-10)


def test_limit_branch_formulas():
    p, q = PAIRS[0]
    kl = classic.kl(p, q)
    assert U.k_rs(p, q, 1, 3) == pytest.approx(math.expm1(2 * kl) / 2, rel=1e-14)
    a = sum(x**2.5 * y**-1.5 for x, y in zip(p, q))
    assert U.k_rs(p, q, 2.5, 1) == pytest.approx(math.log(a) / 1.5, rel=1e-12)
    t = classic.ag_div(p, q)
    assert U.t2_rs(p, q, 1, -1) == pytest.approx(math.expm1(-2 * t) / -2, rel=1e-14)


def test_t1_is_mean_of_k_over_all_branches():
    for p, q in PAIRS[:20]:
        m = np.array(mid(p, q))
        for r in (0.4, 1.0, 2.0):
            for s in (-1.0, 1.0, 2.5):
                ref = 0.5 * (U.k_rs(m, p, r, s) + U.k_rs(m, q, r, s))
                assert abs(U.t1_rs(p, q, r, s) - ref) <= 1e-12 * max(1, abs(ref))


def test_classical_reductions_exact():
    for p, q in PAIRS:
        assert U.it_s(p, q, 0) == classic.js_div(p, q)
        assert U.it_s(p, q, 1) == classic.ag_div(p, q)
        assert U.t2_rs(p, q, 1, 1) == classic.ag_div(p, q)
        assert abs(U.t1_rs(p, q, 1, 1) - classic.ag_div(p, q)) <= 1e-12
        assert U.k_rs(p, q, 1, 1) == classic.kl(p, q)


def test_it_continuity_near_js():
    assert abs(U.it_s(P, Q, 1e-4) - 0.033822) <= 1e-3


def test_errors():
    with pytest.raises(BadParam):
        U.k_rs(P, Q, 0, 1)
    with pytest.raises(BadParam):
        U.t1_rs(P, Q, -1, 2)
    with pytest.raises(BadParam):
        U.t2_rs(P, Q, 65, 2)
    with pytest.raises(NonPositive):
        U.k_rs([1.0, 0.0], Q, 2, 2)
    with pytest.raises(NonPositive):
        U.it_s(Q, [0.0, 1.0], 0.5)
    with pytest.raises(SupportMismatch):
        U.t2_rs(P, [0.2, 0.3, 0.5], 2, 2)


def test_divergence_params_branch():
    assert U.DivergenceParams(1, 1).branch == "r1s1"
    assert U.DivergenceParams(1 + 1e-7, 3).branch == "r1"
    assert U.DivergenceParams(2, 1).branch == "s1"
    assert U.DivergenceParams(2, 3).branch == "generic"
    with pytest.raises(BadParam):
        U.DivergenceParams(0, 1)


class TestNsMap:
    def test_examples(self):
        assert U.ns_map(0.0, 3.0) == 0.0
        assert U.ns_map(0.0, -2.0) == 0.0
        assert U.ns_map(0.7, 1.0) == 0.7
        assert U.ns_map(1.0, 2.0) == pytest.approx(math.e - 1, abs=1e-15)

    def test_negative_input(self):
        with pytest.raises(NegativeInput):
            U.ns_map(-0.1, 2.0)

    def test_continuous_at_one(self):
        for x in (0.1, 1.0, 4.0):
            assert U.ns_map(x, 1 + 1e-4) == pytest.approx(x, rel=1e-3)

    @pytest.mark.parametrize("s", [-2.0, 0.0, 0.5, 2.0, 3.0])
    def test_shape(self, s):
        x = np.arange(0, 5.001, 0.01)
        y = U.ns_map(x, s)
        assert np.all(np.diff(y) > 0)
        d2 = y[2:] - 2 * y[1:-1] + y[:-2]
        if s > 1:
            assert np.all(d2 > -1e-10)
        else:
            assert np.all(d2 < 1e-10)

    def test_increasing_in_s(self):
        x = np.linspace(0, 5, 51)
        curves = [U.ns_map(x, s) for s in (-2.0, 0.0, 0.5, 1.0, 2.0, 3.0)]
        for lo, hi in zip(curves, curves[1:]):
            assert np.all(hi - lo >= -1e-12)


GRID_R = (0.3, 0.5, 1.0, 2.0, 3.0)
GRID_S = (-2.0, -1.0, 0.0, 0.5, 1.0, 2.0, 3.0)


@settings(max_examples=60, deadline=None)
@given(positive_pairs(max_size=6))
def test_nonnegative_and_ordering(pair):
    p, q = pair
    for r in GRID_R:
        for s in GRID_S:
            a, b = U.t1_rs(p, q, r, s), U.t2_rs(p, q, r, s)
            tol = 1e-12 * max(1.0, abs(a), abs(b))
            assert a >= -tol and b >= -tol
            if s <= r:
                assert a <= b + tol
            if s >= r:
                assert a >= b - tol
    for s in np.linspace(-5, 5, 21):
        assert U.it_s(p, q, s) >= -1e-12


def test_ordering_direction_by_oracle():
    # orientation of the t1/t2 ordering, taken from the loop oracles first
    p, q = PAIRS[3]
    m = mid(p, q)

    def t1(r, s):
        return 0.5 * (k_generic_oracle(m, p, r, s) + k_generic_oracle(m, q, r, s))

    assert t1(3.0, 0.5) < t2_generic_oracle(p, q, 3.0, 0.5)  # s <= r
    assert t1(0.5, 3.0) > t2_generic_oracle(p, q, 0.5, 3.0)  # s >= r


@pytest.mark.parametrize("sigma", [0.3, 0.5, 2.0, 3.0, 5.0])
def test_diagonal_coincidence(sigma):
    for p, q in PAIRS:
        a, b = U.t1_rs(p, q, sigma, sigma), U.t2_rs(p, q, sigma, sigma)
        assert abs(a - b) <= 1e-12 * max(1.0, abs(a))


@pytest.mark.parametrize("fn", [U.k_rs, U.t1_rs, U.t2_rs])
def test_seams(fn):
    d = 1e-4
    for p, q in PAIRS[:15]:
        for s in (-1.0, 0.5, 2.0):
            lim = fn(p, q, 1.0, s)
            for r in (1 - d, 1 + d):
                assert abs(fn(p, q, r, s) - lim) <= 1e-3 * (1 + abs(lim))
        for r in (0.5, 2.0):
            lim = fn(p, q, r, 1.0)
            for s in (1 - d, 1 + d):
                assert abs(fn(p, q, r, s) - lim) <= 1e-3 * (1 + abs(lim))


def test_it_seams():
    for p, q in PAIRS[:15]:
        for s0 in (0.0, 1.0):
            lim = U.it_s(p, q, s0)
            for s in (s0 - 1e-4, s0 + 1e-4):
                assert abs(U.it_s(p, q, s) - lim) <= 1e-3 * (1 + abs(lim))


def test_no_cancellation_just_outside_switch():
    p, q = PAIRS[0]
    lim = U.t1_rs(p, q, 1.0, 2.0)
    assert U.t1_rs(p, q, 1 + 2e-6, 2.0) == pytest.approx(lim, rel=1e-5)


class TestCompositionAudit:
    def test_identical_pair(self):
        p = np.array([0.2, 0.3, 0.5])
        a = U.composition_audit(p, p, 2.0, 3.0)
        for c in (a.t1_composed, a.t2_split):
            assert abs(c.lhs) <= 1e-15 and abs(c.rhs) <= 1e-15 and c.abs_diff <= 1e-15

    def test_sides_independent(self):
        p, q = PAIRS[1]
        a = U.composition_audit(p, q, 2.0, 2.0)
        m = np.array(mid(p, q))
        assert a.t1_composed.lhs == U.t1_rs(p, q, 2.0, 2.0)
        assert a.t1_composed.rhs == pytest.approx(U.ns_map(U.t1_rs(p, q, 2.0, 1.0), 2.0), rel=1e-15)
        expected_split = sum(U.ns_map(U.k_rs(m, x, 2.0, 1.0), 2.0) for x in (p, q))
        assert a.t2_split.rhs == pytest.approx(expected_split, rel=1e-15)
        assert a.t1_composed.abs_diff == abs(a.t1_composed.lhs - a.t1_composed.rhs)

    def test_requires_generic_params(self):
        with pytest.raises(BadParam):
            U.composition_audit(P, Q, 1.0, 2.0)

    def test_table_deterministic(self):
        t1 = U.composition_table(n_pairs=100, seed=4)
        t2 = U.composition_table(n_pairs=100, seed=4)
        assert t1 == t2
        assert len(t1) == 3 * 3 * 2
        assert {row["identity"] for row in t1} == {"t1_composed", "t2_split"}


def test_sweep_sorted_and_labelled():
    rows = U.sweep(P, Q, ["t2", "k_rs", "it"], [2.0, 0.5], [1.0, -1.0])
    keys = [(r, s, m) for r, s, m, _, _ in rows]
    assert keys == sorted(keys)
    assert len(rows) == 12
    branches = {(r, s, m): b for r, s, m, _, b in rows}
    assert branches[(0.5, 1.0, "k_rs")] == "s1"
    assert branches[(2.0, 1.0, "it")] == "s1"
    assert branches[(2.0, -1.0, "t2")] == "generic"


@given(st.floats(0.05, 10), st.floats(-4, 4))
@settings(max_examples=50, deadline=None)
def test_params_any_valid(r, s):
    assert U.t2_rs(P, Q, r, s) >= -1e-12
