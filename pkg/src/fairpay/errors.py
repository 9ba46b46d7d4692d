"""Exception types shared across the package."""


class FairpayError(ValueError):
    """Base class for all library errors."""


class InvalidSubsetError(FairpayError):
    """An agent subset refers to indices outside 0..n-1."""


class EmptySetError(FairpayError):
    """An operation that needs a nonempty agent set got the empty one."""


class ContractLogicError(FairpayError):
    """A contract operation was asked about an agent it cannot apply to."""


class SizeLimitError(FairpayError):
    """Exhaustive enumeration was requested above the configured size limit."""


class StructureError(FairpayError):
    """A reward function does not have the structure an operation requires."""


class ParameterError(FairpayError):
    """A generator or solver parameter violates its stated constraints."""
