"""Exact symbolic-numeric toolkit for GKZ hypergeometric systems: cohomology
bases via Groebner standard monomials, Pfaffian systems, rational solutions of
the secondary equation, cohomology intersection matrices, and numeric
verification through truncated series, period expansions and quadrature."""

from .cayley import CayleyConfig
from .config import ToolConfig
from .context import Symbol, SymbolContext
from .contiguity import (DirectionContiguity, FormIndex, assemble_F,
                         cone_facets, decompose_form_index,
                         direction_contiguity)
from .errors import (DegenerateDecompositionError, DegenerateWeightError,
                     GkzError, InconsistencyError, MalformedInputError,
                     NonConvergenceError, NormalizationError, NotABasisError,
                     ParameterError, ResourceLimitError)
from .groebner import (GroebnerBasis, StandardMonomialBasis, buchberger,
                       gkz_groebner, grevlex_order, normal_form,
                       standard_monomials, toric_groebner)
from .intersection import (IntersectionResult, SecondaryEquationInstance,
                           normalize_intersection, rational_solution_secondary,
                           rcin_center_value)
from .intlinalg import IntMatrix, kernel_lattice, smith_invariant_factors
from .l2 import (L2IntegralSpec, beta_family_tpr, l2_series_value,
                 quadrature_oracle, spec_from_polynomials, tpr_expansion)
from .pfaffian import (GkzSystem, PfaffianSystem, full_pfaffian,
                       integrability_check, pfaffian_matrix)
from .rational import MultiPoly, RatFun, rat_normalize
from .ratmat import RatFunMatrix
from .series import (ParameterPoint, TruncatedSeries, apply_operator_to_series,
                     phi_sigma, psi_sigma, rcin_rhs)
from .triangulation import (Triangulation, WeightVector, find_weight,
                            in_cone_CT, is_unimodular, regular_triangulation,
                            search_triangulations, triangulation_from_sets)
from .weyl import (EulerVector, WeylOperator, box_operator, euler_operators,
                   parse_operator, weyl_mul)

__version__ = "0.1.0"
