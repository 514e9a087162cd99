"""Csiszar phi-divergences and the generators used by the AG families.

A generator carries closed-form first and second derivatives. Numeric
differentiation appears only in :func:`derivative_check`, as a cross-check.
"""

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import xlogy

from .distributions import check_distribution, check_positive
from .exceptions import BadParam, SupportMismatch
from .unified import EPS_SWITCH, IdentityCheck, check_rs, t1_rs, t2_rs

CONVEX_TOL = 1e-10


@dataclass(frozen=True)
class PhiGenerator:
    """Real function on (0, inf) with its first two derivatives.

    ``f``, ``d1`` and ``d2`` accept scalars or arrays.
    """

    name: str
    f: Callable
    d1: Callable
    d2: Callable
    params: dict = field(default_factory=dict)

    def __call__(self, x):
        return self.f(np.asarray(x, dtype=float))

    @property
    def at_one(self):
        return float(self.f(np.float64(1.0)))

    @property
    def curvature_at_one(self):
        """``phi''(1)``, the constant that links the divergence to Fisher information."""
        return float(self.d2(np.float64(1.0)))


def kl_generator():
    return PhiGenerator(
        "kl",
        f=lambda x: xlogy(x, x),
        d1=lambda x: np.log(x) + 1.0,
        d2=lambda x: 1.0 / x,
    )


def reverse_kl_generator():
    return PhiGenerator(
        "reverse_kl",
        f=lambda x: -np.log(x),
        d1=lambda x: -1.0 / x,
        d2=lambda x: 1.0 / x**2,
    )


def phi_it(s):
    """Generator whose Csiszar divergence is :func:`agdiv.unified.it_s`.

    The derivatives below were derived directly from ``f`` and are verified
    against finite differences in the test suite.
    """
    s = float(s)
    if not math.isfinite(s):
        raise BadParam(f"non-finite s={s}")
    name = f"it_s:{s:g}"
    if abs(s) < EPS_SWITCH:

        def f(x):
            u = (x + 1.0) / 2.0
            return 0.5 * xlogy(x, x) - xlogy(u, u)

        return PhiGenerator(
            name,
            f=f,
            d1=lambda x: 0.5 * np.log(2.0 * x / (x + 1.0)),
            d2=lambda x: 1.0 / (2.0 * x * (x + 1.0)),
            params={"s": 0.0},
        )
    if abs(s - 1.0) < EPS_SWITCH:

        def f(x):
            u = (x + 1.0) / 2.0
            return u * (np.log(u) - 0.5 * np.log(x))

        return PhiGenerator(
            name,
            f=f,
            d1=lambda x: 0.5 * np.log((x + 1.0) / 2.0) - 0.25 * np.log(x) + 0.25 - 0.25 / x,
            d2=lambda x: (x**2 + 1.0) / (4.0 * x**2 * (x + 1.0)),
            params={"s": 1.0},
        )

    c = 1.0 / (2.0 * s * (s - 1.0))

    def f(x):
        u = (x + 1.0) / 2.0
        return c * ((x ** (1.0 - s) + 1.0) * u**s - (x + 1.0))

    def d1(x):
        u = (x + 1.0) / 2.0
        return c * (
            (1.0 - s) * x ** (-s) * u**s + 0.5 * s * (x ** (1.0 - s) + 1.0) * u ** (s - 1.0) - 1.0
        )

    def d2(x):
        u = (x + 1.0) / 2.0
        return (x ** (-s - 1.0) + 1.0) * u ** (s - 2.0) / 8.0

    return PhiGenerator(name, f=f, d1=d1, d2=d2, params={"s": s})


def phi_ag_family(r):
    """Return ``(phi, phi_star, phi_minus)`` for ``phi(x) = ((1 + x) / 2)**r``.

    ``phi_star(x) = x * phi(1/x)`` and ``phi_minus`` is their average. All three
    equal 1 at ``x = 1`` and have ``phi''(1) = r (r - 1) / 4``.
    """
    r = float(r)
    check_rs(r, 1.0)
    k = r * (r - 1.0) / 4.0

    def f(x):
        return ((1.0 + x) / 2.0) ** r

    def f1(x):
        return 0.5 * r * ((1.0 + x) / 2.0) ** (r - 1.0)

    def f2(x):
        return k * ((1.0 + x) / 2.0) ** (r - 2.0)

    def g(x):
        return x ** (1.0 - r) * ((1.0 + x) / 2.0) ** r

    def g1(x):
        u = (1.0 + x) / 2.0
        return (1.0 - r) * x ** (-r) * u**r + 0.5 * r * x ** (1.0 - r) * u ** (r - 1.0)

    def g2(x):
        return k * ((1.0 + x) / 2.0) ** (r - 2.0) * x ** (-r - 1.0)

    params = {"r": r}
    phi = PhiGenerator(f"ag_phi:{r:g}", f, f1, f2, params)
    star = PhiGenerator(f"ag_phi_star:{r:g}", g, g1, g2, params)
    minus = PhiGenerator(
        f"ag_phi_minus:{r:g}",
        lambda x: 0.5 * (f(x) + g(x)),
        lambda x: 0.5 * (f1(x) + g1(x)),
        lambda x: 0.5 * (f2(x) + g2(x)),
        params,
    )
    return phi, star, minus


def generator_from_name(spec):
    """Look up a generator by catalogue name.

    Names: ``kl``, ``reverse_kl``, ``it_s:<s>``, ``ag_phi:<r>``,
    ``ag_phi_star:<r>``, ``ag_phi_minus:<r>``.
    """
    name, _, arg = spec.partition(":")
    if name == "kl" and not arg:
        return kl_generator()
    if name == "reverse_kl" and not arg:
        return reverse_kl_generator()
    try:
        value = float(arg)
    except ValueError:
        raise BadParam(f"unknown generator {spec!r}") from None
    if name == "it_s":
        return phi_it(value)
    family = {"ag_phi": 0, "ag_phi_star": 1, "ag_phi_minus": 2}
    if name in family:
        return phi_ag_family(value)[family[name]]
    raise BadParam(f"unknown generator {spec!r}")


def csiszar_div(phi, p, q):
    """``sum q * phi(p / q)``; ``q`` must be strictly positive.

    No ``phi(1)`` offset is subtracted, so generators with ``phi(1) != 0``
    give their raw value.
    """
    p = check_distribution(p, "p")
    q = check_positive(q, "q")
    if p.shape != q.shape:
        raise SupportMismatch(f"support sizes differ: {p.size} vs {q.size}")
    return float(np.sum(q * phi(p / q)))


@dataclass(frozen=True)
class ConvexityReport:
    min_d2: float
    argmin: float
    is_convex: bool


def convexity_probe(phi, grid):
    x = np.asarray(grid, dtype=float)
    if x.size == 0 or np.any(x <= 0):
        raise ValueError("grid must be non-empty and strictly positive")
    d2 = np.asarray(phi.d2(x), dtype=float)
    i = int(np.argmin(d2))
    return ConvexityReport(float(d2[i]), float(x[i]), bool(d2[i] >= -CONVEX_TOL))


def log_grid(lo=1e-3, hi=1e3, n=31):
    return np.logspace(math.log10(lo), math.log10(hi), n)


@dataclass(frozen=True)
class DerivativeCheck:
    max_rel_err_d1: float
    max_rel_err_d2: float


def central_diff(fn, x, h):
    """Five-point central difference of ``fn`` at ``x`` with step ``h``."""
    return (fn(x - 2 * h) - 8 * fn(x - h) + 8 * fn(x + h) - fn(x + 2 * h)) / (12 * h)


def derivative_check(phi, grid=None, rel_step=1e-3):
    """Compare closed-form derivatives with central differences.

    ``d1`` is checked against differences of ``f`` and ``d2`` against
    differences of ``d1``; errors are relative.
    """
    x = log_grid() if grid is None else np.asarray(grid, dtype=float)
    h = rel_step * x
    fd1 = central_diff(phi.f, x, h)
    fd2 = central_diff(phi.d1, x, h)
    d1, d2 = phi.d1(x), phi.d2(x)
    # d1 crosses zero at x = 1 for normalized generators, so its scale also
    # admits the local curvature x * |d2|
    e1 = np.abs(d1 - fd1) / np.maximum(np.maximum(np.abs(d1), x * np.abs(d2)), 1e-300)
    e2 = np.abs(d2 - fd2) / np.maximum(np.abs(d2), 1e-300)
    return DerivativeCheck(float(e1.max()), float(e2.max()))


def eta_s(y, s):
    if abs(s - 1.0) < EPS_SWITCH:
        return y
    return (y ** (s - 1.0) - 1.0) / (s - 1.0)


@dataclass(frozen=True)
class PhiRepresentationAudit:
    """AG measures rebuilt from powered phi-divergences, against the direct value.

    ``t1`` compares ``t1_rs`` with the average of ``eta_s(C**(1/(r-1)))`` over
    the ``phi`` and ``phi_star`` divergences; ``t2`` compares ``t2_rs`` with
    ``eta_s`` of the ``phi_minus`` divergence.
    """

    r: float
    s: float
    t1: IdentityCheck
    t2: IdentityCheck


def phi_representation_audit(p, q, r, s):
    r, s = check_rs(r, s)
    if abs(r - 1.0) < EPS_SWITCH:
        raise BadParam("phi representation needs r != 1")
    phi, star, minus = phi_ag_family(r)
    p = check_positive(p, "p")
    q = check_positive(q, "q")
    expo = 1.0 / (r - 1.0)
    rhs1 = 0.5 * (eta_s(csiszar_div(phi, p, q) ** expo, s) + eta_s(csiszar_div(star, p, q) ** expo, s))
    rhs2 = eta_s(csiszar_div(minus, p, q) ** expo, s)
    return PhiRepresentationAudit(
        r, s, IdentityCheck.of(t1_rs(p, q, r, s), rhs1), IdentityCheck.of(t2_rs(p, q, r, s), rhs2)
    )
