"""Growth bounds at infinity for homeomorphic solutions of Beltrami equations,
checked against exactly solvable radial stretch maps."""

from ._gauss import QuadratureSettings
from .bounds import (
    GrowthReport,
    RadialTestFunction,
    Verdict,
    capacity_lower_bound,
    corollary_ratio,
    extremal_eta,
    fit_circle_bound,
    fit_hypothesis_constant,
    geometric_grid,
    lambda_bound,
    lemma3_envelope,
    lemma3_floor,
    lemma4_envelope,
    liminf_verdict,
    random_admissible_eta,
    ring_inequality_check,
    sweep,
    theorem2_ratio,
)
from .core import (
    ORIGIN,
    AnnulusSpec,
    BeltramiValue,
    CircleSpec,
    CoefficientField,
    PlanePoint,
    dilatation_from_mu,
    eval_dilatation,
    load_radial_table,
    mu_from_dilatation,
)
from .families import (
    RadialProfile,
    family_dilatation,
    family_image_area,
    family_max_modulus,
    family_mu,
    family_ring_modulus,
    field_of,
    profile_from_field,
    profile_value,
)
from .quadrature import annulus_integral, circle_average
from .weights import (
    WeightSpec,
    eval_weight,
    iterated_exp,
    iterated_log,
    lemma5_check,
    normalization_integral,
)

__version__ = "0.1.0"
