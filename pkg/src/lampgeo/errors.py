"""Exception types shared across the library."""


class DomainError(ValueError):
    """An operation was called outside its stated domain (bad modulus,
    equal points where distinct ones are required, non-hyperbolic matrix, ...)."""


class DecompositionError(DomainError):
    """A generator-set decomposition failed; carries the unexpressible residual."""

    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual


class ParseError(ValueError):
    """A textual literal failed to parse. `position` is a 0-based column index."""

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"col {position}: {message}")
        self.position = position


class InternalError(RuntimeError):
    """An unconditional mathematical guarantee failed; indicates a library bug."""
