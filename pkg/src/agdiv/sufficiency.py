"""Empirical data-processing checks.

If experiment Y is a garbling of X through a stochastic channel, every
measure implemented here must not increase from X to Y. The lab draws
random pairs and channels and records any case where it does.
"""

from dataclasses import asdict, dataclass, field

import numpy as np

from .distributions import (
    apply_channel,
    check_channel,
    check_pair,
    random_channel,
    random_positive_distribution,
)
from .unified import FamilyId, evaluate, measure_key

#: Absolute slack; values compared are O(1) so a relative slack would misbehave near 0.
DPI_SLACK = 1e-10


@dataclass(frozen=True)
class GarbleCase:
    p: np.ndarray
    q: np.ndarray
    channel: np.ndarray
    gp: np.ndarray
    gq: np.ndarray


def garble(p, q, channel):
    p, q = check_pair(p, q)
    h = check_channel(channel)
    return GarbleCase(p, q, h, apply_channel(h, p), apply_channel(h, q))


@dataclass(frozen=True)
class DpiReport:
    measure: str
    r: float
    s: float
    before: float
    after: float
    slack: float
    passed: bool


def dpi_check(case, measure, r=1.0, s=1.0):
    """Compare a measure on ``(p, q)`` with the same measure on the garbled pair.

    ``slack`` is ``before - after``; the check passes iff
    ``after <= before + DPI_SLACK``.
    """
    key = measure_key(measure)
    before = evaluate(key, case.p, case.q, r, s)
    after = evaluate(key, case.gp, case.gq, r, s)
    if np.isinf(before):
        slack = float("inf")
    else:
        slack = before - after
    return DpiReport(key, float(r), float(s), before, after, slack, bool(after <= before + DPI_SLACK))


def default_grid():
    """The (measure, r, s) grid: both AG families and the IT family."""
    grid = [
        (fam.value, r, s)
        for fam in (FamilyId.T1_RS, FamilyId.T2_RS)
        for r in (0.5, 2.0, 3.0)
        for s in (-1.0, 0.5, 2.0)
    ]
    grid += [(FamilyId.IT_S.value, 1.0, s) for s in (-2.0, 0.0, 0.5, 1.0, 3.0)]
    return grid


def full_grid():
    """:func:`default_grid` plus the classic measures and the unified KL family."""
    grid = [(name, 1.0, 1.0) for name in ("kl", "j", "js", "ag")]
    grid += [
        (FamilyId.K_RS.value, r, s) for r in (0.5, 1.0, 2.0, 3.0) for s in (-1.0, 0.5, 1.0, 2.0)
    ]
    return grid + default_grid()


@dataclass
class BatchReport:
    trials: int
    grid: list
    n_checks: int = 0
    n_failed: int = 0
    worst_slack: float = float("inf")
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return self.n_failed == 0

    def to_dict(self):
        d = asdict(self)
        d["grid"] = [list(g) for g in self.grid]
        return d


def random_case(rng, support_in, support_out):
    p = random_positive_distribution(rng, support_in)
    q = random_positive_distribution(rng, support_in)
    return garble(p, q, random_channel(support_in, support_out, rng))


def batch_dpi(trials, support_in=4, support_out=4, grid=None, seed=0):
    """Run :func:`dpi_check` over ``trials`` random (p, q, channel) draws.

    Deterministic given ``seed``. Returns a :class:`BatchReport`.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    grid = default_grid() if grid is None else [(str(m), float(r), float(s)) for m, r, s in grid]
    rng = np.random.default_rng(seed)
    report = BatchReport(trials=trials, grid=grid)
    for trial in range(trials):
        case = random_case(rng, support_in, support_out)
        for measure, r, s in grid:
            res = dpi_check(case, measure, r, s)
            report.n_checks += 1
            report.worst_slack = min(report.worst_slack, res.slack)
            if not res.passed:
                report.n_failed += 1
                report.failures.append({
                    "trial": trial,
                    "measure": res.measure,
                    "r": r,
                    "s": s,
                    "before": res.before,
                    "after": res.after,
                })
    return report
