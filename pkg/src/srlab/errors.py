"""Exception types shared across the library.

Every error that a caller is expected to catch has its own class; CLI maps
BudgetExceeded/precondition failures to exit code 2 and negative verdicts to 1.
"""


class SrlabError(Exception):
    """Base class for all library errors."""


class ParseError(SrlabError, ValueError):
    """Malformed textual input; carries a human-readable position."""


# words
class UnknownGenerator(SrlabError, ValueError):
    pass


class AlphabetMismatch(SrlabError, ValueError):
    pass


# sr_graph
class MalformedEdge(SrlabError, ValueError):
    pass


class DisjointnessViolation(SrlabError, ValueError):
    pass


class NonCompleteEComponent(SrlabError, ValueError):
    pass


class HypothesisViolation(SrlabError, ValueError):
    pass


class NotMultipartite(SrlabError, ValueError):
    pass


class BudgetExceeded(SrlabError, RuntimeError):
    """A configured node-expansion or size budget was hit before an answer."""


class SearchBudgetExceeded(BudgetExceeded):
    """Cycle search ran out of budget; distinct from a definite not-found."""


# subgroups
class RedundantBasis(SrlabError, ValueError):
    """The supplied generating set is not an independent basis of its subgroup."""


# star_check
class EmptySet(SrlabError, ValueError):
    pass


class StructureMismatch(SrlabError, ValueError):
    pass


# hnn / amalgam
class PreconditionViolated(SrlabError, ValueError):
    pass


class NotFoundAtBound(SrlabError, LookupError):
    """A bounded search finished without finding the required element."""


class VariantMismatch(SrlabError, ValueError):
    pass


class InsufficientElements(SrlabError, ValueError):
    pass


# ring_lab
class AmbientMismatch(SrlabError, ValueError):
    pass


class HypothesisUnverified(SrlabError, ValueError):
    """A counting statement was invoked on inputs whose hypotheses failed the
    bounded pre-check."""
