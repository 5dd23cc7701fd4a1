"""Exception hierarchy shared by every layer of the kernel."""


class KernelError(Exception):
    """Base class for all errors raised by dilogint."""


class StructuralError(KernelError):
    """Operands live in incompatible variables, fields or towers."""


class DomainError(KernelError):
    """An operation was applied outside its domain (zero input, bad degree...)."""


class UnsplittableError(KernelError):
    """A polynomial could not be split into linear factors.

    ``residual`` carries the factor that is left over so a caller can supply
    its roots through a :class:`~dilogint.algebra.RootProvider` and retry.
    """

    def __init__(self, residual, message=None):
        self.residual = residual
        super().__init__(message or f"unsplittable factor: {residual}")


class TowerError(KernelError):
    """Invalid monomial extension (log of 0, dilog of 0 or 1, ...)."""


class InferenceFailed(KernelError):
    """A derivative is not in the span of the supplied log-derivatives."""


class DecompositionFailed(KernelError):
    """Kolchin-Ostrowski style decomposition does not exist for the input."""


class IdentityViolation(KernelError):
    """An identity that must hold produced an inconsistent constant system."""


class ParseError(KernelError):
    def __init__(self, message, line=1, column=1):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"{line}:{column}: {message}")
