"""Exact and numeric tools for value distribution of polynomial curves in
projective space: Gaussian-rational polynomial arithmetic, derived curves via
exterior algebra, heights and proximity functions, and a verification harness
for the classical defect-type inequalities."""

from .gauss import (
    Divisor,
    GaussPoly,
    GaussRational,
    PolyParseError,
    RootFindingError,
    parse_poly,
    parse_rational,
    poly_gcd,
    roots,
    squarefree_decomposition,
)
from .exterior import (
    MultiIndex,
    WedgeForm,
    WedgeVector,
    multi_indices,
    pair,
    pluecker_relations_check,
    two_row_identity_sign,
    wedge_rows,
)
from .curve import (
    CurveLift,
    DegenerateCurveError,
    associated,
    associated_family,
    leibniz_partner,
    normalize,
    ramification_divisor,
    wronskian,
)
from .nevanlinna import (
    RadialValue,
    SelectorContext,
    circle_integral,
    counting,
    height_T,
    height_bar,
    mu,
    pointwise_logderiv_check,
    proximity_hyperplane,
    proximity_m,
    weil,
)
from .harness import (
    Evaluator,
    HyperplaneConfig,
    MarginReport,
    PairCollection,
    SweepReport,
    balanced_check,
    distance_one_collection,
    full_sweep,
    general_position_tuples,
    mcquillan_monitor,
    telescoping_identity,
    verify_cartan,
    verify_height_growth,
    verify_lemma55,
    verify_prop62,
)

__version__ = "0.1.0"
