"""Exception types shared across the package."""


class UnsupportedFieldError(ValueError):
    """A field degree or modulus outside the supported set was requested."""


class BudgetExceededError(RuntimeError):
    """An enumeration or sum refused to start: its cost exceeds the budget."""


class InternalInconsistencyError(RuntimeError):
    """Two quantities that must agree exactly did not.

    This signals a defect in the formulas or in the enumeration machinery,
    never bad user input.
    """
