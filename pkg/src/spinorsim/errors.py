"""Exception hierarchy shared by all modules."""


class SpinorError(Exception):
    """Base class for every error raised by spinorsim."""


class ContractError(SpinorError, ValueError):
    """An argument violates a documented precondition."""


class EmptyBlockError(ContractError):
    """The requested (N, m) block contains no states."""


class NumericalError(SpinorError, RuntimeError):
    """A numerical routine failed (non-convergence, eigenvalue mismatch, ...)."""


class ResourceError(NumericalError):
    """A dense computation would exceed the configured dimension cap."""

    def __init__(self, required, allowed):
        self.required = required
        self.allowed = allowed
        super().__init__(
            f"dense dimension {required} exceeds cap {allowed} "
            "(raise SPINORSIM_DENSE_CAP to allow it)"
        )
