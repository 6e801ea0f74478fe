"""Exact-arithmetic machinery for approximating morphisms over endomorphism
rings of abelian varieties and transporting kernel-membership witnesses,
checked on a fully computable synthetic Mordell-Weil model.

Everything is rational: heights are stored squared, norms enter through
their squares, and comparisons involving a square root are decided by
cross-multiplication.  No value in the library is ever a float.
"""

from .approx import approx_special, approx_vector, approx_weighted, derive_ledger
from .dirichlet import dirichlet_approx, feasibility_oracle
from .ledger import ConstantLedger, LedgerEntry
from .model import GeneratorSet, ModelPoint, ModelSpace, apply_morphism, divide, torsion_enum
from .morphisms import (
    AmbientSpec,
    BlockMorphism,
    SpecialCertificate,
    WeightedCertificate,
    embedding_ir,
    gauss_reduce,
    is_weighted,
    isogeny_extension,
    rank_and_codim,
    weightify,
)
from .pipeline import run_pipeline, run_property_suites
from .reduction import InclusionWitness, gamma_embed, point_project, specialize, translate_witness
from .rings import (
    ProductRingSpec,
    RingElement,
    RingSpec,
    compute_Q0,
    lambda_min_nonzero,
    norm_equivalence_constants,
    reference_rings,
)
from .scenario import Scenario, load_scenario
from .thresholds import (
    ConjecturalOracle,
    VarietyCard,
    degree_pushforward_bound,
    finiteness_thresholds,
    kernel_degree,
    mu_lower_bounds,
)

__all__ = [
    "AmbientSpec",
    "BlockMorphism",
    "ConjecturalOracle",
    "ConstantLedger",
    "GeneratorSet",
    "InclusionWitness",
    "LedgerEntry",
    "ModelPoint",
    "ModelSpace",
    "ProductRingSpec",
    "RingElement",
    "RingSpec",
    "Scenario",
    "SpecialCertificate",
    "VarietyCard",
    "WeightedCertificate",
    "apply_morphism",
    "approx_special",
    "approx_vector",
    "approx_weighted",
    "compute_Q0",
    "degree_pushforward_bound",
    "derive_ledger",
    "dirichlet_approx",
    "divide",
    "embedding_ir",
    "feasibility_oracle",
    "finiteness_thresholds",
    "gamma_embed",
    "gauss_reduce",
    "is_weighted",
    "isogeny_extension",
    "kernel_degree",
    "lambda_min_nonzero",
    "load_scenario",
    "mu_lower_bounds",
    "norm_equivalence_constants",
    "point_project",
    "rank_and_codim",
    "reference_rings",
    "run_pipeline",
    "run_property_suites",
    "specialize",
    "torsion_enum",
    "translate_witness",
    "weightify",
]
