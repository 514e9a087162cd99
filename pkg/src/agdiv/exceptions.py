"""Exception hierarchy.

Every error raised for malformed input derives from :class:`DivergenceError`
(itself a ``ValueError``). Infinite divergences are *not* errors; they come
back as ``float('inf')``.
"""


class DivergenceError(ValueError):
    """Base class for all input and parameter errors."""


class NegativeWeight(DivergenceError):
    pass


class ZeroTotal(DivergenceError):
    pass


class NotNormalized(DivergenceError):
    """Mass is too far from 1 to be treated as float noise."""


class SupportMismatch(DivergenceError):
    pass


class NonPositive(DivergenceError):
    """A strictly positive distribution was required."""


class BadParam(DivergenceError):
    pass


class NegativeInput(DivergenceError):
    pass


class BadDomain(DivergenceError):
    """Parameter point lies outside the open domain of a parametric family."""


class ScheduleTooCoarse(DivergenceError):
    pass
