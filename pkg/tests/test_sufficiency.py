import json

import numpy as np
import pytest

from agdiv import distributions as D
from agdiv.sufficiency import (
    DPI_SLACK,
    batch_dpi,
    default_grid,
    dpi_check,
    full_grid,
    garble,
    random_case,
)
from agdiv.unified import evaluate

P = D.make_distribution([1, 2, 3, 4])
Q = D.make_distribution([4, 1, 1, 2])


def test_garble_identity_and_total():
    case = garble(P, Q, D.identity_channel(4))
    np.testing.assert_allclose(case.gp, P, atol=1e-16)
    np.testing.assert_allclose(case.gq, Q, atol=1e-16)
    total = garble(P, Q, D.constant_channel(4, [0.3, 0.7]))
    np.testing.assert_allclose(total.gp, total.gq, atol=1e-15)


def test_garble_random_sums():
    case = garble(P, Q, D.random_channel(4, 3, 11))
    assert abs(case.gp.sum() - 1) <= 1e-12 and abs(case.gq.sum() - 1) <= 1e-12


@pytest.mark.parametrize("measure, r, s", full_grid())
def test_identity_channel_preserves(measure, r, s):
    case = garble(P, Q, D.identity_channel(4))
    rep = dpi_check(case, measure, r, s)
    assert rep.passed
    assert abs(rep.after - rep.before) <= 1e-12 * max(1.0, abs(rep.before))


@pytest.mark.parametrize("measure, r, s", full_grid())
def test_total_garbling(measure, r, s):
    case = garble(P, Q, D.constant_channel(4, [0.2, 0.5, 0.3]))
    rep = dpi_check(case, measure, r, s)
    assert rep.passed and abs(rep.after) <= 1e-15


def test_pass_rule():
    case = garble(P, Q, D.random_channel(4, 4, 0))
    rep = dpi_check(case, "t1", 2.0, 2.0)
    assert rep.passed == (rep.after <= rep.before + DPI_SLACK)
    assert rep.slack == pytest.approx(rep.before - rep.after)


def test_batch_default_grid_passes():
    rep = batch_dpi(500, 4, 4, seed=1)
    assert rep.n_failed == 0 and rep.passed
    assert rep.n_checks == 500 * len(default_grid())
    assert rep.worst_slack > -DPI_SLACK


def test_batch_full_grid_and_shapes():
    rep = batch_dpi(200, 5, 3, grid=full_grid(), seed=2)
    assert rep.passed, rep.failures[:3]
    rep = batch_dpi(100, 3, 6, grid=full_grid(), seed=3)
    assert rep.passed, rep.failures[:3]


def test_batch_deterministic_and_serializable():
    a = batch_dpi(30, seed=9).to_dict()
    b = batch_dpi(30, seed=9).to_dict()
    assert json.dumps(a) == json.dumps(b)
    assert set(a) >= {"trials", "grid", "failures", "worst_slack"}


def test_batch_rejects_zero_trials():
    with pytest.raises(ValueError):
        batch_dpi(0)


def test_two_garblings_never_beat_one():
    rng = np.random.default_rng(17)
    for _ in range(100):
        case = random_case(rng, 4, 4)
        h2 = D.random_channel(4, 3, rng)
        twice = garble(case.gp, case.gq, h2)
        for measure, r, s in full_grid():
            once = evaluate(measure, case.gp, case.gq, r, s)
            again = evaluate(measure, twice.gp, twice.gq, r, s)
            assert again <= once + 1e-10
