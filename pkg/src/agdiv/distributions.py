"""Finite discrete distributions and stochastic channels.

Distributions are plain 1-d float arrays and channels are row-stochastic 2-d
arrays of shape ``(nx, ny)``; row ``x`` holds ``h(. | x)``. The ``check_*``
helpers validate caller input and return fresh read-only arrays.
"""

import numpy as np

from .exceptions import (
    NegativeWeight,
    NonPositive,
    NotNormalized,
    SupportMismatch,
    ZeroTotal,
)

#: Sum tolerance accepted as exact.
NORM_TOL = 1e-12
#: Inputs whose total is off by more than NORM_TOL but within this are rescaled.
RENORM_TOL = 1e-6
#: Floor defining "strictly positive".
POS_FLOOR = 1e-300


def _frozen(a):
    a.setflags(write=False)
    return a


def _as_vector(x, name="p"):
    a = np.array(x, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-d sequence, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def make_distribution(weights):
    """Normalize non-negative weights into a probability vector.

    Parameters
    ----------
    weights : array_like
        Non-negative reals, at least one of them positive.

    Returns
    -------
    numpy.ndarray
        ``weights / weights.sum()``, read-only.

    Raises
    ------
    NegativeWeight
        If any weight is below zero.
    ZeroTotal
        If every weight is zero.
    """
    w = _as_vector(weights, "weights")
    if np.any(w < 0):
        raise NegativeWeight(f"negative weight(s) in {w.tolist()}")
    total = w.sum()
    if total <= 0:
        raise ZeroTotal("weights sum to zero")
    p = w / total
    # second pass absorbs rounding from the first division
    p = p / p.sum()
    return _frozen(p)


def check_distribution(p, name="p"):
    """Validate a probability vector, renormalizing float noise."""
    a = _as_vector(p, name)
    if np.any(a < 0):
        raise NegativeWeight(f"{name} has negative entries")
    total = a.sum()
    if abs(total - 1.0) > RENORM_TOL:
        raise NotNormalized(f"{name} sums to {total!r}, not 1")
    if abs(total - 1.0) > NORM_TOL:
        a = a / total
    return _frozen(a)


def check_positive(p, name="p"):
    """Validate a strictly positive probability vector."""
    a = check_distribution(p, name)
    if np.any(a < POS_FLOOR):
        raise NonPositive(f"{name} must be strictly positive")
    return a


def check_pair(p, q, positive=False):
    check = check_positive if positive else check_distribution
    a, b = check(p, "p"), check(q, "q")
    if a.shape != b.shape:
        raise SupportMismatch(f"support sizes differ: {a.size} vs {b.size}")
    return a, b


def check_channel(h):
    """Validate a row-stochastic matrix; rows are renormalized like distributions."""
    a = np.array(h, dtype=float)
    if a.ndim != 2 or a.size == 0:
        raise ValueError(f"channel must be a non-empty 2-d array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("channel contains non-finite entries")
    if np.any(a < 0):
        raise NegativeWeight("channel has negative entries")
    sums = a.sum(axis=1)
    if np.any(np.abs(sums - 1.0) > RENORM_TOL):
        raise NotNormalized(f"channel rows sum to {sums.tolist()}")
    a = a / sums[:, None]
    return _frozen(a)


def mixture(p, q):
    """Equal-weight midpoint ``(p + q) / 2``."""
    a, b = check_pair(p, q)
    return _frozen((a + b) / 2.0)


def apply_channel(h, p):
    """Push ``p`` through channel ``h``: ``g[y] = sum_x h[x, y] p[x]``."""
    h = check_channel(h)
    p = check_distribution(p)
    if h.shape[0] != p.size:
        raise SupportMismatch(
            f"channel expects {h.shape[0]} inputs, distribution has {p.size}"
        )
    g = p @ h
    return _frozen(g / g.sum())


def compose_channels(h1, h2):
    """Channel equivalent to applying ``h1`` then ``h2``."""
    a, b = check_channel(h1), check_channel(h2)
    if a.shape[1] != b.shape[0]:
        raise SupportMismatch(f"cannot compose {a.shape} with {b.shape}")
    return _frozen(a @ b)


def identity_channel(n):
    return _frozen(np.eye(n))


def constant_channel(nx, w):
    """Total garbling: every input row maps to the same output law ``w``."""
    w = check_distribution(w, "w")
    return _frozen(np.tile(w, (nx, 1)))


def random_channel(nx, ny, seed):
    """Channel whose rows are independent flat-Dirichlet draws.

    ``seed`` may be an int or an existing ``numpy.random.Generator``.
    """
    if nx < 1 or ny < 1:
        raise ValueError("channel dimensions must be positive")
    rng = np.random.default_rng(seed)
    h = rng.dirichlet(np.ones(ny), size=nx)
    return _frozen(h / h.sum(axis=1, keepdims=True))


def random_positive_distribution(rng, n, floor_weight=1e-6):
    """Flat-Dirichlet draw mixed with the uniform law so every entry is positive."""
    d = rng.dirichlet(np.ones(n))
    d = (1.0 - floor_weight) * d + floor_weight / n
    return _frozen(d / d.sum())
