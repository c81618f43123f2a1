"""Exact Hermite normal forms for modules over rings of integers of
number fields.

The package provides arbitrary-precision number field and fractional
ideal arithmetic, LLL reduction against the embedding geometry, and a
modular pseudo-HNF pipeline whose coefficient sizes stay bounded by
field invariants, together with a naive elimination oracle and exact
module-equality verification.
"""

from .errors import (
    InconsistentIdealError,
    NfhnfError,
    NonIntegralEntriesError,
    NonIntegralModuleError,
    NoUnitInBasisError,
    NotARingError,
    NotCoprimeError,
    NotMonicError,
    NotPositiveDefiniteError,
    NotSquarefreeError,
    SingularError,
    SingularModulusError,
    ValidationError,
    ZeroDeterminantError,
    ZeroElementError,
    ZeroIdealError,
    ZeroRowError,
)
from .field import FieldElement, NumberField
from .hnf import (
    DetStrategy,
    HnfResult,
    PseudoMatrix,
    RunStats,
    det_cofactor,
    det_mod_p,
    determinantal_ideal,
    euclidean_reconstruct,
    hnf_modular,
    hnf_naive,
    hnf_pipeline,
    module_contains,
    modules_equal,
)
from .ideals import (
    FractionalIdeal,
    NormalizedPseudoElement,
    crt_combine,
    normalize_row,
    pivot_uv,
    reduce_mod_ideal,
    split_one,
)
from .linalg import hnf_int, hnf_int_lower, lll_reduce, nullspace_int, solve_rational

__version__ = "0.1.0"

__all__ = [
    "DetStrategy",
    "FieldElement",
    "FractionalIdeal",
    "HnfResult",
    "NormalizedPseudoElement",
    "NumberField",
    "PseudoMatrix",
    "RunStats",
    "crt_combine",
    "det_cofactor",
    "det_mod_p",
    "determinantal_ideal",
    "euclidean_reconstruct",
    "hnf_int",
    "hnf_int_lower",
    "hnf_modular",
    "hnf_naive",
    "hnf_pipeline",
    "lll_reduce",
    "module_contains",
    "modules_equal",
    "normalize_row",
    "nullspace_int",
    "pivot_uv",
    "reduce_mod_ideal",
    "solve_rational",
    "split_one",
    "NfhnfError",
    "ValidationError",
    "NotMonicError",
    "NotSquarefreeError",
    "NotARingError",
    "NoUnitInBasisError",
    "NotPositiveDefiniteError",
    "ZeroIdealError",
    "ZeroElementError",
    "ZeroRowError",
    "NotCoprimeError",
    "InconsistentIdealError",
    "SingularError",
    "SingularModulusError",
    "NonIntegralModuleError",
    "ZeroDeterminantError",
    "NonIntegralEntriesError",
]
