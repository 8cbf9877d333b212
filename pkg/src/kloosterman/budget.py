"""Work budgets guarding brute-force loops and matrix enumerations.

Costs are estimated up front from closed-form counts, so an operation that
would blow past the limit refuses to start instead of dying mid-flight.
Budgets are per operation, not cumulative: the same Budget object can guard
any number of calls.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import BudgetExceededError

DEFAULT_LOOP_LIMIT = 10**8
DEFAULT_MATRIX_LIMIT = 10**7

LOOP_LIMIT_ENV = "KLOOSTERMAN_LOOP_LIMIT"
MATRIX_LIMIT_ENV = "KLOOSTERMAN_MATRIX_LIMIT"


@dataclass(frozen=True)
class Budget:
    """Limits on innermost loop iterations and on matrices held at once."""

    loop_limit: int = DEFAULT_LOOP_LIMIT
    matrix_limit: int = DEFAULT_MATRIX_LIMIT

    def check_loops(self, cost: int, what: str = "operation") -> None:
        if cost > self.loop_limit:
            raise BudgetExceededError(
                f"{what} needs {cost} loop iterations, over the budget of "
                f"{self.loop_limit}"
            )

    def check_matrices(self, count: int, what: str = "enumeration") -> None:
        if count > self.matrix_limit:
            raise BudgetExceededError(
                f"{what} needs {count} stored matrices, over the budget of "
                f"{self.matrix_limit}"
            )


def default_budget() -> Budget:
    """The stock budget, with optional environment-variable overrides."""
    loops = int(os.environ.get(LOOP_LIMIT_ENV, DEFAULT_LOOP_LIMIT))
    mats = int(os.environ.get(MATRIX_LIMIT_ENV, DEFAULT_MATRIX_LIMIT))
    return Budget(loop_limit=loops, matrix_limit=mats)
