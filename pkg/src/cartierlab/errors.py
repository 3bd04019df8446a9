"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: validation failures exit 2, resource
budget failures exit 3, internal invariant violations exit 4.
"""


class CartierLabError(Exception):
    """Base class for all package errors."""


class ValidationError(CartierLabError):
    """Invalid input: bad ring parameters, malformed request, ring mismatch."""


class ParseError(ValidationError):
    """Polynomial text does not conform to the grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class RingMismatchError(ValidationError):
    """Operands live in different ambient rings."""


class ResourceBudgetError(CartierLabError):
    """A configured budget (pairs, degree, terms, probes, candidates) was hit."""


class StabilizationError(ResourceBudgetError):
    """An iteration reached its cap without stabilizing.

    ``last_two`` carries the final pair of ideals for diagnosis when the
    failing iteration produces ideals.
    """

    def __init__(self, message: str, last_two=None):
        super().__init__(message)
        self.last_two = last_two


class InternalInvariantError(CartierLabError):
    """A certified invariant failed; indicates a bug, not bad input."""
