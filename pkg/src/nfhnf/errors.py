"""Exceptions raised by nfhnf.

Each exception carries a short machine-readable ``code`` used by the CLI
for structured error output.
"""


class NfhnfError(Exception):
    """Base class for all nfhnf errors."""

    code = "error"

    def __init__(self, detail=""):
        super().__init__(detail or self.__class__.__name__)
        self.detail = detail


class ValidationError(NfhnfError):
    """Malformed or non-canonical input data."""

    code = "validation"


class NotMonicError(NfhnfError):
    code = "not_monic"


class NotSquarefreeError(NfhnfError):
    code = "not_squarefree"


class NotARingError(NfhnfError):
    """The proposed basis is not closed under multiplication."""

    code = "not_a_ring"


class NoUnitInBasisError(NfhnfError):
    """The lattice spanned by the basis does not contain 1."""

    code = "no_unit_in_basis"


class NotPositiveDefiniteError(NfhnfError):
    code = "not_positive_definite"


class ZeroIdealError(NfhnfError):
    code = "zero_ideal"


class ZeroElementError(NfhnfError):
    code = "zero_element"


class ZeroRowError(NfhnfError):
    code = "zero_row"


class NotCoprimeError(NfhnfError):
    code = "not_coprime"


class InconsistentIdealError(NfhnfError):
    """The supplied gcd ideal does not match the recomputed one."""

    code = "inconsistent_ideal"


class SingularError(NfhnfError):
    code = "singular"


class SingularModulusError(NfhnfError):
    code = "singular_modulus"


class NonIntegralModuleError(NfhnfError):
    """The module defined by a pseudo-matrix is not contained in O_K^n."""

    code = "non_integral_module"


class ZeroDeterminantError(NfhnfError):
    code = "zero_determinant"


class NonIntegralEntriesError(NfhnfError):
    code = "non_integral_entries"
