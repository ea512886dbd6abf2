"""Exception types shared across homlab."""


class HomlabError(Exception):
    """Base class for all homlab errors."""


class ParameterError(HomlabError, ValueError):
    """Lattice parameters are invalid or mismatched."""


class InputError(HomlabError, ValueError):
    """An argument violates an operation's precondition."""


class BudgetExceeded(HomlabError):
    """A computation would exceed its configured size budget."""


class InconsistencyError(HomlabError):
    """Modular computations disagree between primes."""


class ConstructionError(HomlabError):
    """An internally generated object failed validation (signals a bug)."""
