"""Numerical toolkit for adjoints of composition operators with rational symbols on H^2."""
from .adjoint import (
    AdjointEvaluation,
    PreimageFiber,
    amusing_identity_residual,
    hmr_eval,
    hmr_eval_bs,
    hmr_eval_cor,
    hmr_eval_pfe,
    hmr_eval_thm,
    kernel_partial_fractions,
    omega_eval,
    preimage_fiber,
)
from .builtins import BUILTIN_NAMES, builtin, random_blaschke, random_self_map
from .config import DEFAULT_TOL, Tolerances
from .continuation import branch_atlas, continue_branch, monodromy
from .errors import *  # noqa: F401,F403
from .hardy import HardyPoly, adjoint_oracle, inner_product, kernel_coeffs
from .poly import ComplexPoly, gcd_approx, roots
from .rational import (
    INF,
    RationalMap,
    certify,
    critical_data,
    eval_ext,
    exterior_map,
    fiber,
    is_regular_value,
    is_self_map_of_disc,
    reduce,
)
from .regularity import MapClass, classify, decomposition_report

__version__ = "0.1.0"
