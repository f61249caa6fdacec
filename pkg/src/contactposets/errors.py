"""Exception hierarchy shared by all modules.

The CLI maps these onto its exit-code contract: validation failures are
exit 1, parse/format problems exit 2, exhausted budgets exit 3.
"""


class ContactError(Exception):
    """Base class for all library errors."""


class UnknownElement(ContactError):
    """An element name does not belong to the carrier."""


class CycleError(ContactError):
    """Order generators violate antisymmetry."""


class AxiomViolation(ContactError):
    """A structure fails a required axiom; carries the failing report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class AddOnPoset(ContactError):
    """Additivity was requested on a structure without joins."""


class BottomInSeed(ContactError):
    """A contact seed pair mentions the bottom element."""


class MissingBottom(ContactError):
    """A substructure carrier does not contain the bottom."""


class NotJoinClosed(ContactError):
    """A semilattice substructure carrier is not closed under joins."""


class NotSemilattice(ContactError):
    """An operation requiring joins was given a structure without them."""


class KindMismatch(ContactError):
    """A construction was dispatched on a structure of the wrong kind."""


class PreconditionViolation(ContactError):
    """An amalgamation instance violates its gluing preconditions."""


class JoinNotPreserved(ContactError):
    """Internal assertion: joins were lost where theory forbids it."""


class ParseError(ContactError):
    """A structure file could not be parsed."""


class BudgetExceeded(ContactError):
    """A bounded construction ran out of budget."""
