"""Exact verification workbench for binary-field Kloosterman sums, the
Bruhat decomposition of Sp(2n,q), the trace codes of its double cosets, and
the power-moment recursions those codes induce.

Everything is computed twice where the source material allows it: once by
brute-force enumeration in exact integer arithmetic, once from the closed
forms, and the two are compared with zero tolerance.
"""

from .budget import Budget, default_budget
from .charsums import (
    MomentTable,
    allowed_values,
    artin_schreier_char_sum,
    gl_kloosterman,
    kloosterman,
    kloosterman_all,
    kloosterman_m,
    moment,
    moment_table,
    twisted_sum,
    value_histogram,
)
from .codes import (
    CodeInstance,
    WeightDistribution,
    build_code,
    dual_codeword,
    dual_dimension,
    dual_distribution,
    dual_weight,
    expected_dual_dimension,
    verify_delsarte,
    weight_distribution,
)
from .errors import (
    BudgetExceededError,
    InternalInconsistencyError,
    UnsupportedFieldError,
)
from .field import MODULUS_TABLE, FieldCtx, make_field
from .moments import (
    RecursionInput,
    brute_moment_table,
    moment_expansion_check,
    moment_expansion_values,
    pless_check,
    pless_sides,
    recursion_input_from_code,
    recursive_moments,
    stirling2,
)
from .symplectic import (
    SizeReport,
    count_alternating,
    dc_character_sum,
    double_coset_order,
    enumerate_double_coset,
    enumerate_parabolic,
    family_coset,
    family_constants,
    gauss_sum_sp,
    is_symplectic,
    make_sigma,
    predicted_sizes,
    q_binomial,
    trace_histogram,
    transversal,
)
from .verification import CRITERIA, Check, CriterionResult, run_criteria

__version__ = "0.1.0"

__all__ = [
    "Budget",
    "default_budget",
    "MomentTable",
    "allowed_values",
    "artin_schreier_char_sum",
    "gl_kloosterman",
    "kloosterman",
    "kloosterman_all",
    "kloosterman_m",
    "moment",
    "moment_table",
    "twisted_sum",
    "value_histogram",
    "CodeInstance",
    "WeightDistribution",
    "build_code",
    "dual_codeword",
    "dual_dimension",
    "dual_distribution",
    "dual_weight",
    "expected_dual_dimension",
    "verify_delsarte",
    "weight_distribution",
    "BudgetExceededError",
    "InternalInconsistencyError",
    "UnsupportedFieldError",
    "MODULUS_TABLE",
    "FieldCtx",
    "make_field",
    "RecursionInput",
    "brute_moment_table",
    "moment_expansion_check",
    "moment_expansion_values",
    "pless_check",
    "pless_sides",
    "recursion_input_from_code",
    "recursive_moments",
    "stirling2",
    "SizeReport",
    "count_alternating",
    "dc_character_sum",
    "double_coset_order",
    "enumerate_double_coset",
    "enumerate_parabolic",
    "family_coset",
    "family_constants",
    "gauss_sum_sp",
    "is_symplectic",
    "make_sigma",
    "predicted_sizes",
    "q_binomial",
    "trace_histogram",
    "transversal",
    "CRITERIA",
    "Check",
    "CriterionResult",
    "run_criteria",
    "__version__",
]
