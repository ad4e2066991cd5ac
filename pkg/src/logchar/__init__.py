"""Exact engine for flat connections in good-decomposition form:
irregularity divisors, cleanness verdicts, log-characteristic cycles,
Newton polygons, and de Rham Euler characteristics with brute-force
cross-checks.
"""

from .field import QQ, NumberField, Scalar
from .laurent import (LaurentPolynomial, WeightVector, is_unit_in_R_n0,
                      log_derivative, weighted_valuation)
from .series import LaurentSeries, PrecisionError
from .tropical import RadiusProfile, TropicalFn, g_of_phi, is_linear_on_octant, \
    sorted_profile_linear
from .cycles import (ChartStamp, Direction, DivisorLine, LogCycle, LowerDim,
                     MonomialLogModule, ZeroSection, cycle_equal,
                     gr_extract_structured, hilbert_dim, kummer_pullback,
                     monomial_char_cycle, pushforward_from_cover)
from .cdvf import (DiffOperator, NewtonPolygon, RefinedClass, companion_matrix,
                   cyclic_vector, local_zcar_rank1, newton_polygon, radius_oracle,
                   rank1_operator, refined_residue, theta_relation_check)
from .goodmodel import (Chart, GoodModel, ModelSummand, clean_at_point,
                        irregularity_divisor, kedlaya_criterion,
                        model_kummer_pullback, nonclean_locus,
                        numerically_clean_at_point, refined_form,
                        validate_good_decomposition, zcar_prime)
from .euler import (ChernData, Curve, Surface, chi_EP, chi_curve,
                    chi_surface_kato, derham_oracle_curve, integrality_check,
                    kashiwara_dubson)

__version__ = "0.1.0"
