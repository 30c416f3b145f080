"""Exception hierarchy shared across the package.

Each error that the command line maps to a distinct exit code gets its own
class; everything derives from PertopError so library users can catch broadly.
"""


class PertopError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(PertopError):
    """A text artifact (sset / cochain / matrix file) could not be parsed."""


class BudgetExceeded(PertopError):
    """A space generator would produce more simplices than the configured budget."""


class NotTorsion(PertopError):
    """A degree-3 class has a nonzero free coordinate and so is not a Brauer class."""


class NoLift(PertopError):
    """No mod-n lift exists; the order of the class does not divide n."""


class CosetTooLarge(PertopError):
    """The coset of lifts exceeds the configured enumeration cap."""


class NotACocycle(PertopError):
    """A cochain handed to a class-level operation has a nonzero coboundary."""


class InternalConsistencyError(PertopError):
    """A mathematically guaranteed invariant failed; indicates a bug, not bad input."""
