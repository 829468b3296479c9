"""Exact valuation independence over concrete valued fields.

Generalized power series with lazy exact arithmetic, decision of valuation
independence, normalization, nearest-point maximization of v(b - W),
ultrametric orthogonalization, immediacy evidence and finite-extension
defect diagnostics, plus a scenario-driven CLI.
"""

from .groups import (
    GroupElement,
    GroupKind,
    OrderedGroup,
    Ordering,
    Subgroup,
    compare,
    coset_equal,
    is_cofinal,
    subgroup_index,
)
from .residues import FieldElement, ResidueField, ResidueProfile, linear_rank, solve_in_span
from .series import (
    Precision,
    Series,
    SeriesField,
    Term,
    Valuation,
    add,
    artin_schreier,
    custom_powers,
    equal_up_to,
    geometric,
    invert,
    leading_term,
    multiply,
    negate,
    residue_ratio,
    scale,
    subtract,
    sum_series,
    truncate,
    valuation,
)
from .presentations import (
    SubfieldPresentation,
    completion_presentation,
    laurent_presentation,
    trivial_presentation,
)
from .spaces import (
    ImmediacyKind,
    ImmediacyResult,
    IndependenceVerdict,
    NearestKind,
    NearestPointResult,
    VectorFamily,
    VerdictKind,
    basis_exchange,
    check_normalized,
    immediacy_evidence,
    is_valuation_independent,
    is_valuation_independent_over,
    make_family,
    nearest_point,
    normalize,
    orthogonalize,
    relative_basis,
    residue_profile,
)
from .extensions import (
    ExtensionReport,
    StandardBasis,
    analyze_extension,
    complete_and_approximate,
    ramification_and_residue,
    span_closure_basis,
    standard_basis,
)

__version__ = "0.1.0"
