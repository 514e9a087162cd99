"""Divergence measures built around the arithmetic-geometric mean divergence.

Classic measures, the (r, s) AG families and the IT family, Csiszar
phi-divergences, data-processing checks and the Fisher-information limit.
"""

from .classic import ag_div, inequality_report, j_div, js_div, kl
from .csiszar import (
    PhiGenerator,
    convexity_probe,
    csiszar_div,
    generator_from_name,
    kl_generator,
    phi_ag_family,
    phi_it,
)
from .distributions import (
    apply_channel,
    compose_channels,
    make_distribution,
    mixture,
    random_channel,
)
from .exceptions import (
    BadDomain,
    BadParam,
    DivergenceError,
    NegativeInput,
    NegativeWeight,
    NonPositive,
    NotNormalized,
    ScheduleTooCoarse,
    SupportMismatch,
    ZeroTotal,
)
from .fisher import (
    bernoulli,
    binomial,
    csiszar_info_matrix,
    family_from_name,
    fisher_matrix,
    fisher_scalar,
    prop52_check,
    softmax_categorical,
    theorem51_check,
    uniform,
)
from .sufficiency import batch_dpi, dpi_check, garble
from .unified import (
    DivergenceParams,
    FamilyId,
    composition_audit,
    it_s,
    k_rs,
    ns_map,
    t1_rs,
    t2_rs,
)

__version__ = "0.1.0"
