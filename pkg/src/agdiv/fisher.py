"""Fisher information and its limit relation to phi-divergences.

For a smooth family ``f(x, theta)`` on a finite support, the scaled bracket

    (1 / t**2) * (K_phi(f(theta) || (f(theta + t e_i) + f(theta + t e_j)) / 2) - phi(1))

with ``K_phi(f1 || f2) = sum f2 * phi(f1 / f2)`` converges as ``t -> 0``. The
limit is estimated from a decreasing step schedule by polynomial (Richardson)
extrapolation to ``t = 0`` and compared with multiples of the Fisher matrix.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.special import comb

from .exceptions import BadDomain, BadParam, ScheduleTooCoarse
from .unified import FamilyId, evaluate, measure_key

DEFAULT_SCHEDULE = (1e-2, 5e-3, 2.5e-3)
MATCH_TOL = 0.01


@dataclass(frozen=True)
class ParametricFamily:
    """Map from a parameter vector to a strictly positive pmf on a fixed support.

    ``score(theta)`` returns the ``(n_outcomes, k)`` matrix of
    ``d/dtheta_i log f(x, theta)``; when it is ``None`` the score is taken by
    central differences.
    """

    name: str
    dim: int
    pmf: Callable
    lower: float
    upper: float
    score: Optional[Callable] = None

    def check_theta(self, theta, margin=0.0):
        th = np.atleast_1d(np.asarray(theta, dtype=float))
        if th.shape != (self.dim,):
            raise BadDomain(f"{self.name} expects {self.dim} parameter(s), got {th.shape}")
        if np.any(th - margin <= self.lower) or np.any(th + margin >= self.upper):
            raise BadDomain(
                f"theta={th.tolist()} (margin {margin:g}) outside ({self.lower}, {self.upper})"
            )
        return th

    def numeric_score(self, theta):
        th = self.check_theta(theta)
        out = np.empty((self.pmf(th).size, self.dim))
        for i in range(self.dim):
            h = 1e-5 * (1.0 + abs(th[i]))
            e = np.zeros(self.dim)
            e[i] = h
            out[:, i] = (np.log(self.pmf(th + e)) - np.log(self.pmf(th - e))) / (2.0 * h)
        return out

    def score_matrix(self, theta):
        if self.score is None:
            return self.numeric_score(theta)
        return np.asarray(self.score(self.check_theta(theta)), dtype=float).reshape(-1, self.dim)


def bernoulli():
    def pmf(th):
        t = th[0]
        return np.array([1.0 - t, t])

    def score(th):
        t = th[0]
        return np.array([[-1.0 / (1.0 - t)], [1.0 / t]])

    return ParametricFamily("bernoulli", 1, pmf, 0.0, 1.0, score)


def binomial(n):
    if not 1 <= n <= 10:
        raise BadParam("binomial family supports 1 <= n <= 10")
    x = np.arange(n + 1)
    c = comb(n, x)

    def pmf(th):
        t = th[0]
        return c * t**x * (1.0 - t) ** (n - x)

    def score(th):
        t = th[0]
        return ((x - n * t) / (t * (1.0 - t)))[:, None]

    return ParametricFamily(f"binomial:{n}", 1, pmf, 0.0, 1.0, score)


def softmax_categorical(m, k=None):
    """Categorical law on ``m`` outcomes with the first ``k`` logits free, rest 0."""
    k = min(m - 1, 3) if k is None else k
    if not 2 <= m <= 5 or not 1 <= k <= min(3, m - 1):
        raise BadParam("softmax family supports 2 <= m <= 5 and 1 <= k <= min(3, m - 1)")

    def pmf(th):
        z = np.zeros(m)
        z[:k] = th
        z -= z.max()
        w = np.exp(z)
        return w / w.sum()

    def score(th):
        p = pmf(th)
        return np.eye(m)[:, :k] - p[:k][None, :]

    return ParametricFamily(f"softmax:{m}:{k}", k, pmf, -50.0, 50.0, score)


def uniform(n=3):
    """Family whose pmf ignores theta; its Fisher information is zero."""
    return ParametricFamily(
        f"uniform:{n}", 1, lambda th: np.full(n, 1.0 / n), -math.inf, math.inf,
        lambda th: np.zeros((n, 1)),
    )


def family_from_name(spec):
    """``bernoulli``, ``binomial:<n>``, ``softmax:<m>[:<k>]`` or ``uniform:<n>``."""
    parts = spec.split(":")
    try:
        args = [int(a) for a in parts[1:]]
    except ValueError:
        raise BadParam(f"bad family spec {spec!r}") from None
    name = parts[0]
    if name == "bernoulli" and not args:
        return bernoulli()
    if name == "binomial" and len(args) == 1:
        return binomial(*args)
    if name == "softmax" and len(args) in (1, 2):
        return softmax_categorical(*args)
    if name == "uniform" and len(args) <= 1:
        return uniform(*args)
    raise BadParam(f"unknown family {spec!r}")


@dataclass(frozen=True)
class InfoMatrix:
    entries: np.ndarray
    kind: str

    @property
    def k(self):
        return self.entries.shape[0]

    def is_symmetric(self, tol=1e-9):
        return bool(np.allclose(self.entries, self.entries.T, rtol=0.0, atol=tol))

    def min_eigenvalue(self):
        sym = 0.5 * (self.entries + self.entries.T)
        return float(np.linalg.eigvalsh(sym).min())

    def is_psd(self, tol=1e-9):
        return self.min_eigenvalue() >= -tol


def fisher_matrix(fam, theta):
    """``sum_x f(x) * score_i(x) * score_j(x)``."""
    th = fam.check_theta(theta)
    f = fam.pmf(th)
    sc = fam.score_matrix(th)
    return InfoMatrix((sc * f[:, None]).T @ sc, "fisher")


def fisher_scalar(fam, theta):
    if fam.dim != 1:
        raise BadDomain(f"{fam.name} has {fam.dim} parameters; use fisher_matrix")
    return float(fisher_matrix(fam, theta).entries[0, 0])


def s_matrix(fisher):
    """Symmetrization of the matrix whose row ``i`` is constant at ``I_ii``."""
    d = np.diag(fisher.entries)
    m = np.repeat(d[:, None], fisher.k, axis=1)
    return InfoMatrix(0.5 * (m + m.T), "s_matrix")


def richardson(ts, values):
    """Extrapolate ``values(t)`` to ``t = 0`` with Neville's scheme.

    With steps ``t, t/2`` this is the classic ``2 v(t/2) - v(t)``; each extra
    step removes one more power of ``t``.
    """
    ts = np.asarray(ts, dtype=float)
    p = np.array(values, dtype=float)
    n = ts.size
    for level in range(1, n):
        for i in range(n - level):
            # polynomial through ts[i .. i+level] evaluated at 0
            p[i] = (ts[i] * p[i + 1] - ts[i + level] * p[i]) / (ts[i] - ts[i + level])
    return float(p[0])


def check_schedule(t_schedule):
    ts = np.asarray(t_schedule, dtype=float)
    if ts.ndim != 1 or ts.size < 2:
        raise ScheduleTooCoarse("t schedule needs at least two steps")
    if np.any(ts <= 0) or np.any(np.diff(ts) >= 0):
        raise ScheduleTooCoarse("t schedule must be positive and strictly decreasing")
    return ts


def _bracket(fam, th, phi, i, j, t):
    f1 = fam.pmf(th)
    ei = np.zeros(fam.dim)
    ej = np.zeros(fam.dim)
    ei[i] = t
    ej[j] = t
    f2 = 0.5 * (fam.pmf(th + ei) + fam.pmf(th + ej))
    return (float(np.sum(f2 * phi(f1 / f2))) - phi.at_one) / t**2


def bracket_sequence(fam, theta, phi, i=0, j=0, t_schedule=DEFAULT_SCHEDULE):
    """Raw scaled brackets at each step; useful for convergence checks."""
    ts = check_schedule(t_schedule)
    th = fam.check_theta(theta, margin=ts[0])
    return [_bracket(fam, th, phi, i, j, t) for t in ts]


def csiszar_info_matrix(fam, theta, phi, t_schedule=DEFAULT_SCHEDULE):
    """Extrapolated limit of the scaled phi-divergence bracket, entry by entry."""
    ts = check_schedule(t_schedule)
    th = fam.check_theta(theta, margin=ts[0])
    k = fam.dim
    out = np.empty((k, k))
    for i in range(k):
        for j in range(k):
            out[i, j] = richardson(ts, [_bracket(fam, th, phi, i, j, t) for t in ts])
    return InfoMatrix(out, "csiszar")


def _max_rel_err(est, ref):
    scale = np.maximum(np.abs(ref), 1e-12 * max(1.0, float(np.abs(ref).max())))
    return float(np.max(np.abs(est - ref) / scale))


@dataclass(frozen=True)
class InfoLimitReport:
    """Limit estimate against the Fisher-based prediction.

    ``rhs`` is ``phi''(1)/2 * I`` for one parameter and
    ``phi''(1)/2 * (S + I)`` for several. ``expansion_rhs`` is what a direct
    second-order expansion of the mixture bracket gives,
    ``phi''(1)/8 * (I_ii + I_jj + 2 I_ij)``, reported alongside.
    """

    lhs: InfoMatrix
    rhs: InfoMatrix
    max_rel_err: float
    fisher: InfoMatrix
    expansion_rhs: InfoMatrix
    expansion_max_rel_err: float


def theorem51_check(fam, theta, phi, t_schedule=DEFAULT_SCHEDULE):
    lhs = csiszar_info_matrix(fam, theta, phi, t_schedule)
    fi = fisher_matrix(fam, theta)
    c = phi.curvature_at_one
    if fam.dim == 1:
        rhs = InfoMatrix(0.5 * c * fi.entries, "csiszar")
    else:
        rhs = InfoMatrix(0.5 * c * (s_matrix(fi).entries + fi.entries), "csiszar")
    d = np.diag(fi.entries)
    expansion = InfoMatrix(c / 8.0 * (d[:, None] + d[None, :] + 2.0 * fi.entries), "csiszar")
    return InfoLimitReport(
        lhs, rhs, _max_rel_err(lhs.entries, rhs.entries), fi,
        expansion, _max_rel_err(lhs.entries, expansion.entries),
    )


@dataclass(frozen=True)
class CoefficientReport:
    family_id: str
    r: float
    s: float
    estimated_coefficient: float
    candidates: dict
    best_match: Optional[str]
    fisher: float
    limit_estimate: float


def coefficient_candidates(family_id, r):
    key = measure_key(family_id)
    if key in ("t1", "t2"):
        return {"r/8": r / 8.0, "r/16": r / 16.0}
    if key == "it":
        return {"1/8": 1.0 / 8.0}
    raise BadParam(f"no Fisher-coefficient claim for {family_id!r}")


def prop52_check(fam, theta, family_id, r=1.0, s=1.0, t_schedule=DEFAULT_SCHEDULE):
    """Estimate ``lim measure(f(theta), f(theta + t)) / t**2`` as a multiple of Fisher.

    The coefficient is matched against the constants claimed for the family
    (``r/8`` and ``r/16`` for the AG families, ``1/8`` for the IT family);
    ``best_match`` is the closest one within 1%, or ``None``.
    """
    if fam.dim != 1:
        raise BadDomain("coefficient estimate needs a one-parameter family")
    if isinstance(family_id, FamilyId):
        family_id = family_id.value
    cands = coefficient_candidates(family_id, float(r))
    ts = check_schedule(t_schedule)
    th = fam.check_theta(theta, margin=ts[0])
    f0 = fam.pmf(th)
    vals = [evaluate(family_id, f0, fam.pmf(th + t), r, s) / t**2 for t in ts]
    limit = richardson(ts, vals)
    fi = fisher_scalar(fam, th)
    coef = limit / fi
    errs = {name: abs(coef - v) / abs(v) for name, v in cands.items()}
    best = min(errs, key=errs.get)
    return CoefficientReport(
        family_id, float(r), float(s), coef, cands,
        best if errs[best] <= MATCH_TOL else None, fi, limit,
    )


def fisher_report(fam, theta, phi, t_schedule=DEFAULT_SCHEDULE):
    """JSON-ready summary of :func:`theorem51_check`."""
    res = theorem51_check(fam, theta, phi, t_schedule)
    return {
        "family": fam.name,
        "theta": np.atleast_1d(np.asarray(theta, dtype=float)).tolist(),
        "phi": phi.name,
        "t_schedule": [float(t) for t in t_schedule],
        "fisher": res.fisher.entries.tolist(),
        "csiszar_estimate": res.lhs.entries.tolist(),
        "predicted": res.rhs.entries.tolist(),
        "max_rel_err": res.max_rel_err,
        "expansion_predicted": res.expansion_rhs.entries.tolist(),
        "expansion_max_rel_err": res.expansion_max_rel_err,
    }
