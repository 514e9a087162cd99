"""Kullback-Leibler, J, Jensen-Shannon and arithmetic-geometric divergences.

All values are in nats. A divergence that is genuinely unbounded (mass of
the first argument where the second has none) is returned as ``inf``.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import kl_div

from .distributions import check_pair

#: Slack allowed when checking the ordering js <= j/8 <= ag <= j/4.
CHAIN_SLACK = 1e-12


def _kl(p, q):
    # arrays already validated; 0 * ln(0/q) := 0
    # kl_div adds q - p to each term, which sums to zero but keeps every
    # term >= 0, so near-equal inputs cannot round to a negative total
    return float(np.sum(kl_div(p, q)))


def kl(p, q):
    """Relative information ``sum p ln(p/q)``."""
    p, q = check_pair(p, q)
    return _kl(p, q)


def j_div(p, q):
    """Jeffreys J-divergence, ``kl(p, q) + kl(q, p)``."""
    p, q = check_pair(p, q)
    return _kl(p, q) + _kl(q, p)


def js_div(p, q):
    """Jensen-Shannon divergence; finite and at most ``ln 2``."""
    p, q = check_pair(p, q)
    m = (p + q) / 2.0
    return 0.5 * (_kl(p, m) + _kl(q, m))


def ag_div(p, q):
    """Arithmetic-geometric mean divergence, ``(kl(m, p) + kl(m, q)) / 2``."""
    p, q = check_pair(p, q)
    m = (p + q) / 2.0
    return 0.5 * (_kl(m, p) + _kl(m, q))


def ag_div_direct(p, q):
    """Same quantity as :func:`ag_div`, summed as ``m ln(m / sqrt(p q))``.

    Kept separate so the two algebraic forms can be checked against each other.
    """
    p, q = check_pair(p, q)
    m = (p + q) / 2.0
    support = m > 0
    if np.any((p[support] == 0) | (q[support] == 0)):
        return float("inf")
    ms, ps, qs = m[support], p[support], q[support]
    return float(np.sum(ms * (np.log(ms) - 0.5 * (np.log(ps) + np.log(qs)))))


@dataclass(frozen=True)
class InequalityReport:
    js: float
    j_eighth: float
    ag: float
    j_quarter: float
    passed: bool

    def as_tuple(self):
        return (self.js, self.j_eighth, self.ag, self.j_quarter)


def inequality_report(p, q):
    """Evaluate the chain ``js <= j/8 <= ag <= j/4`` for positive ``p``, ``q``."""
    p, q = check_pair(p, q, positive=True)
    j = j_div(p, q)
    vals = (js_div(p, q), j / 8.0, ag_div(p, q), j / 4.0)
    ok = all(b - a >= -CHAIN_SLACK for a, b in zip(vals, vals[1:]))
    return InequalityReport(*vals, passed=ok)
