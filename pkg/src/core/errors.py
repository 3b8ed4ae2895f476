"""
Error hierarchy for the consecutive pattern poset toolkit.

Every error carries the exit code the command-line entry point reports for it.
"""


class PosetError(ValueError):
    """Base class for all toolkit errors."""

    exit_code = 1


class InvalidPermutationError(PosetError):
    """Input is not a valid permutation (or a valid index into one)."""

    exit_code = 2


class UndefinedOperationError(PosetError):
    """Operation is undefined for the given arguments (e.g. exterior of 1)."""

    exit_code = 2


class InvalidChainError(PosetError):
    """Sequence of permutations is not a maximal chain of the interval."""

    exit_code = 2


class PreconditionError(PosetError):
    """Arguments violate a documented precondition."""

    exit_code = 2


class ConfigError(PosetError):
    """Configuration value is missing or out of range."""

    exit_code = 2


class NotComparableError(PosetError):
    """sigma is not contained in tau, so [sigma, tau] is not an interval."""

    exit_code = 3

    def __init__(self, sigma, tau):
        self.sigma = sigma
        self.tau = tau
        super().__init__(f"{sigma} is not contained in {tau} as a consecutive pattern")


class CapacityError(PosetError):
    """Input size exceeds a hard capacity of the toolkit."""

    exit_code = 4


class CapExceededError(PosetError):
    """A configurable enumeration cap was exceeded."""

    exit_code = 4

    def __init__(self, what: str, size: int, cap: int):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: {size} exceeds cap {cap}")


class InternalConsistencyError(PosetError):
    """Two independent computations of the same quantity disagree."""

    exit_code = 5
