"""Buchsbaum-Rim functions and multiplicities of parameter modules.

Exact computations over standard-graded quotients k[x_1..x_D]/I: Groebner
bases for submodules of free modules, lengths of graded pieces of the
symmetric algebra modulo powers of a parameter module, Eagon-Northcott
homology, and checks of the length lower bound and its equality case.
"""

from .field import Field, GF, QQ, DEFAULT_FIELD
from .poly import PolyRing, Polynomial, MonomialOrder, binomial, compare_monomials
from .groebner import (
    QuotientRing,
    FreeModuleElement,
    GroebnerBasis,
    buchberger,
    normal_form,
    standard_monomials,
    krull_dim,
    min_generators,
    syzygies,
    INFINITE,
)
from .resolution import FreeResolution, free_resolution, is_cohen_macaulay
from .modules import (
    ParameterModule,
    validate_parameter_module,
    colength,
    fitting_ideal,
    sym_power_basis,
    graded_piece,
    graded_piece_length,
    ideal_power_colength,
)
from .eagon_northcott import (
    ENComplex,
    HomologyReport,
    build_en_complex,
    homology_lengths,
    br_multiplicity_via_chi,
)
from .analyzer import (
    BRTable,
    BRCoefficients,
    TheoremVerdict,
    br_table,
    fit_coefficients,
    theorem_bound,
    verify_main_theorem,
    first_coefficient_check,
    remarks_suite,
)

__version__ = "0.1.0"
