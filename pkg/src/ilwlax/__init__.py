"""Exact symbolic engine for the Lax form of the intermediate long wave
hierarchy: truncated coefficient ring, differential polynomials, shift
operators, the hierarchy builder with its verification suite, and an
independent zero-dispersion oracle."""

from .diffpoly import DiffPoly, LocalFunctional, MuPoly, functional_equal, functional_is_zero
from .dispersionless import (SymbolSeries, UTauPoly, check_dispersionless_identities,
                             solve_symbol, symbol_residue_power, u_antiderivative)
from .hierarchy import (HierarchyConfig, LaxData, PdPolynomial, build_lax,
                        ilw_equation_rhs, ilw_h2_display, invert_shift_minus_one,
                        pd_polynomial, poisson_bracket, verify, verify_all)
from .report import VerificationReport
from .scalars import MuScalar, Scalar, bernoulli, divide_by_i_eps, from_mu_form, to_mu_form
from .shiftops import ShiftOperator, linear_combination

__version__ = "0.1.0"

__all__ = [
    "DiffPoly", "LocalFunctional", "MuPoly", "functional_equal", "functional_is_zero",
    "SymbolSeries", "UTauPoly", "check_dispersionless_identities", "solve_symbol",
    "symbol_residue_power", "u_antiderivative",
    "HierarchyConfig", "LaxData", "PdPolynomial", "build_lax", "ilw_equation_rhs",
    "ilw_h2_display", "invert_shift_minus_one", "pd_polynomial", "poisson_bracket",
    "verify", "verify_all",
    "VerificationReport",
    "MuScalar", "Scalar", "bernoulli", "divide_by_i_eps", "from_mu_form", "to_mu_form",
    "ShiftOperator", "linear_combination",
    "__version__",
]
