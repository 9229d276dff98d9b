"""Exception hierarchy shared by all modules."""


class HallMedianError(Exception):
    """Base class for every error raised by this package."""


class ParseError(HallMedianError, ValueError):
    """Input text or document does not describe a valid instance or tree."""


class DuplicateSetError(ParseError):
    pass


class SetTooSmallError(ParseError):
    pass


class UnknownElementError(ParseError):
    pass


class MalformedTokenError(ParseError):
    pass


class UnbalancedParensError(ParseError):
    pass


class EmptyInputError(ParseError):
    pass


class TreeError(HallMedianError, ValueError):
    """Invalid tree structure or an invalid tree operation."""


class DuplicateLabelError(TreeError, ParseError):
    pass


class EdgeNotFoundError(TreeError):
    pass


class LabelNotFoundError(TreeError, KeyError):
    pass


class UnlabeledLeafError(TreeError):
    pass


class LabelMismatchError(HallMedianError, ValueError):
    """Instance ground set is not carried by the leaves of the tree."""


class GroundMismatchError(HallMedianError, ValueError):
    """The union of the member sets differs from the declared ground set."""


class SizeGuardExceeded(HallMedianError, ValueError):
    """An exponential enumeration was requested beyond its configured limit."""


class ConditionViolated(HallMedianError):
    """The input family fails the condition needed for a construction.

    ``outcome`` holds the checker result carrying the witness.
    """

    def __init__(self, outcome):
        self.outcome = outcome
        super().__init__(f"condition violated: {outcome.describe()}")


class NoReduction(HallMedianError):
    """No element of coverage one or two exists, so the family is not reducible."""
