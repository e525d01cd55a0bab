"""Twisted Knizhnik-Zamolodchikov connection toolkit.

Builds the connection matrices for a simple Lie algebra with a finite-order
inner automorphism, analyzes their singularities exactly, solves locally by
Frobenius series, transports solutions numerically and measures monodromy
and flatness residuals.
"""

from .autmod import (
    AutomorphismData,
    alpha_prime,
    fixed_subalgebra,
    inner_automorphism,
    matrix_automorphism,
    twisted_slot_rep,
)
from .connection import (
    ConnectionSystem,
    OmegaSet,
    assemble_classical,
    assemble_connection,
    build_omega_set,
    euler_contraction,
    flatness_residual,
)
from .frobenius import (
    FrobeniusSolution,
    eval_solution,
    frobenius_fundamental,
    radius_estimate,
    solution_residual,
)
from .liealg import (
    LieAlgebraData,
    ModuleRep,
    build_algebra,
    build_irrep_sl2,
    casimir_matrix,
    conformal_weight,
    dual_basis,
)
from .rcalc import PuiseuxSeries, RElement, compose_change, iota_expand, series_min_exponents
from .singular import (
    ChangeOfVariables,
    TransformedSystem,
    check_simple_singularity,
    indicial_data,
    transform_system,
)
from .transport import (
    MonodromyResult,
    PathSpec,
    integrate_path,
    match_local_global,
    monodromy_loop,
)

__version__ = "0.1.0"

__all__ = [
    "AutomorphismData",
    "ChangeOfVariables",
    "ConnectionSystem",
    "FrobeniusSolution",
    "LieAlgebraData",
    "ModuleRep",
    "MonodromyResult",
    "OmegaSet",
    "PathSpec",
    "PuiseuxSeries",
    "RElement",
    "TransformedSystem",
    "alpha_prime",
    "assemble_classical",
    "assemble_connection",
    "build_algebra",
    "build_irrep_sl2",
    "build_omega_set",
    "casimir_matrix",
    "check_simple_singularity",
    "compose_change",
    "conformal_weight",
    "dual_basis",
    "euler_contraction",
    "eval_solution",
    "fixed_subalgebra",
    "flatness_residual",
    "frobenius_fundamental",
    "indicial_data",
    "inner_automorphism",
    "integrate_path",
    "iota_expand",
    "match_local_global",
    "matrix_automorphism",
    "monodromy_loop",
    "radius_estimate",
    "series_min_exponents",
    "solution_residual",
    "transform_system",
    "twisted_slot_rep",
]
