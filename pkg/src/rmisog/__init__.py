"""Isogeny classes of abelian varieties with real multiplication over
finite fields: exact classification and counting from Weil polynomials.
"""

from .errors import (BudgetError, DegenerateError, UnsupportedStratumError,
                     WeilValidationError)
from .poly import (WeilPolynomial, char_poly_of_power, degeneracy_reason,
                   search_weil, validate_weil)
from .field import CMField, cm_field
from .localdata import (AnalyzeReport, LevelAnalysis, LiftProfile,
                        NewtonProfile, analyze, analyze_level, lift_profile,
                        newton_polygon)
from .orders import (Order, construct_Rn, is_bass, is_gorenstein,
                     level_order, maximal_order, over_orders)
from .ideals import (ClassGroup, FracIdeal, canonical_key, class_group,
                     is_principal, make_ideal, norm_map_kernel)
from .deligne import (CMType, DeligneModule, are_isomorphic,
                      check_deligne_axioms, default_cm_type, enumerate_icm,
                      find_principal_polarization, module_dict,
                      module_from_ideal, verify_polarization)
from .isocount import (IsogenyCountReport, asymptotic_table, count_report,
                       density_filter, disc_growth_table)
from .oracle import (crosscheck_ordinary, crosscheck_sweep,
                     enumerate_ec_classes, total_classes)

__version__ = "0.1.0"

__all__ = [
    "AnalyzeReport", "BudgetError", "CMField", "CMType", "ClassGroup",
    "DegenerateError", "DeligneModule", "FracIdeal", "IsogenyCountReport",
    "LevelAnalysis", "LiftProfile", "NewtonProfile", "Order",
    "UnsupportedStratumError", "WeilPolynomial", "WeilValidationError",
    "analyze", "analyze_level", "are_isomorphic", "asymptotic_table",
    "canonical_key", "char_poly_of_power", "check_deligne_axioms",
    "class_group", "cm_field", "construct_Rn", "count_report",
    "crosscheck_ordinary", "crosscheck_sweep", "default_cm_type",
    "degeneracy_reason", "density_filter", "disc_growth_table",
    "enumerate_ec_classes", "enumerate_icm", "find_principal_polarization",
    "is_bass", "is_gorenstein", "is_principal", "level_order",
    "lift_profile", "make_ideal", "maximal_order", "module_dict",
    "module_from_ideal", "newton_polygon", "norm_map_kernel", "over_orders",
    "search_weil", "total_classes", "validate_weil", "verify_polarization",
]
