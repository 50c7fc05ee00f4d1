"""Sheaf cohomology on weighted projective stacks via weighted Tate resolutions."""

__version__ = "0.1.0"

from .field import PrimeField, FieldElement, invert, normalize
from .polyring import (
    ModulePresentation,
    ParseError,
    Polynomial,
    WeightedRing,
    monomials_of_degree,
    parse_polynomial,
    symonds_constant,
    weighted_degree,
)
from .groebner import GroebnerBasis, buchberger, normal_form
from .resolution import (
    BettiTable,
    FreeResolutionS,
    ZeroModuleError,
    betti,
    free_resolution,
    graded_piece_basis,
    h0m_vanishes,
    hilbert,
    multiplication_map,
    regularity,
    truncation,
)
from .extalg import ExtAlgebra, ExtElement, ExtFreeModule, ExtMatrix, expand_to_vector_space, ext_multiply, socle_counts
from .dmod import (
    DifferentialModule,
    DMMorphism,
    FreeFlagDM,
    ResourceLimitError,
    ZeroHomologyError,
    check,
    cone,
    homology,
    is_exact_below,
    resolve_twisted_flag,
)
from .bgg import bgg_window, finite_piece
from .tate import (
    CohomologyQuery,
    CohomologyTable,
    TateWindow,
    choose_r,
    sheaf_cohomology,
    tate_window,
    validate_window,
)
