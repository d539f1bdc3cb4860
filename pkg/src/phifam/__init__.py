"""Deformed-exponential probability families on finite measure spaces.

Generators (exponential and Kaniadakis kappa deformations), the
Musielak-Orlicz modular and its norms, charts with their normalizing
values and transition maps, and the associated Bregman/closed-form
divergences, including Kullback-Leibler as the exponential special case.
"""

from .errors import (DomainError, PhiFamError, PhiOverflowError, SolverError,
                     StructuralError)
from .measure import (DEFAULT_DENSITY_TOL, MeasureSpace, ScalarField,
                      expectation, expectation_wrt, field_from_spec, is_density,
                      space_from_spec, weighted_sum)
from .phi import (DEFAULT_VALIDATION_GRID, KAPPA_MIN_FLOOR, KAPPA_ZERO_EPS,
                  ExponentialPhi, KappaConstPhi, KappaVariablePhi, PhiFunction,
                  ValidationReport, exp_kappa, exp_kappa_deriv, ln_kappa,
                  ln_kappa_deriv, load_phi, phi_from_json_obj, phi_to_json_obj,
                  validate_phi)
from .orlicz import (MusielakOrliczFunction, conjugate_modular, fenchel_conjugate,
                     fenchel_conjugate_numeric, luxemburg_norm, modular, orlicz_norm)
from .family import (Chart, PsiSolve, TangentVector, center, chart_inverse,
                     load_chart, make_chart, normalizer, normalizer_detail,
                     parametrize, transition)
from .divergence import (BRANCH_BREGMAN, BRANCH_CLOSED_FORM, BRANCH_INFINITE,
                         DivergenceDiagnostics, DivergenceReport, bregman_psi,
                         cumulant, d_psi, d_psi_report, kappa_divergence,
                         kl_divergence, moment_gen, phi_divergence, psi_gateaux)

__version__ = "0.1.0"

__all__ = [
    "BRANCH_BREGMAN", "BRANCH_CLOSED_FORM", "BRANCH_INFINITE",
    "Chart", "DEFAULT_DENSITY_TOL", "DEFAULT_VALIDATION_GRID",
    "DivergenceDiagnostics", "DivergenceReport", "DomainError",
    "ExponentialPhi", "KAPPA_MIN_FLOOR", "KAPPA_ZERO_EPS", "KappaConstPhi",
    "KappaVariablePhi", "MeasureSpace", "MusielakOrliczFunction", "PhiFamError",
    "PhiFunction", "PhiOverflowError", "PsiSolve", "ScalarField", "SolverError",
    "StructuralError", "TangentVector", "ValidationReport", "bregman_psi",
    "center", "chart_inverse", "conjugate_modular", "cumulant", "d_psi",
    "d_psi_report", "exp_kappa", "exp_kappa_deriv", "expectation",
    "expectation_wrt", "fenchel_conjugate", "fenchel_conjugate_numeric",
    "field_from_spec", "is_density", "kappa_divergence", "kl_divergence",
    "ln_kappa", "ln_kappa_deriv", "load_chart", "load_phi", "luxemburg_norm",
    "make_chart", "modular", "moment_gen", "normalizer", "normalizer_detail",
    "orlicz_norm", "parametrize", "phi_divergence", "phi_from_json_obj",
    "phi_to_json_obj", "psi_gateaux", "space_from_spec", "transition",
    "validate_phi", "weighted_sum",
]
