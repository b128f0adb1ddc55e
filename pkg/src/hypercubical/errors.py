"""Exception hierarchy shared by all modules."""


class HypercubicalError(Exception):
    """Base class for errors raised by this package."""


class MalformedError(HypercubicalError, ValueError):
    """Input data violates a structural precondition."""


class MalformedComplexError(MalformedError):
    """A cubical complex is not well formed (bad paths, unsolvable cube signs)."""


class InvalidComplexError(MalformedError):
    """A chain complex whose boundary maps do not compose to zero."""


class UnassignedGeneratorError(MalformedError, KeyError):
    """A word mentions a generator with no assigned group element."""


class MissingLabelError(MalformedError, KeyError):
    """An edge of a complex carries no group label."""


class BudgetExceeded(HypercubicalError):
    """A computation ran past its configured resource budget."""


class InconclusiveError(BudgetExceeded):
    """Coset enumeration did not close within the coset budget.

    This says nothing about the presented group; the enumeration may
    succeed with a larger budget or the group may be infinite.
    """


class UncertifiedDegreeError(HypercubicalError, ValueError):
    """Requested a degree outside the certified exactness range."""
