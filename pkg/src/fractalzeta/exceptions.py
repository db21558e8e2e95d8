"""Exception hierarchy.

Every error raised for a mathematically invalid request derives from
:class:`ZetaToolkitError`; the CLI maps those to exit status 2.
"""


class ZetaToolkitError(Exception):
    """Base class for domain errors raised by the toolkit."""


class DomainError(ZetaToolkitError, ValueError):
    """Argument outside the region where an operation is defined."""


class PoleAtOne(DomainError):
    pass


class DomainExcluded(DomainError):
    pass


class AccuracyNotReached(ZetaToolkitError, ArithmeticError):
    pass


class TailNotNegligible(ZetaToolkitError, ArithmeticError):
    pass


class PoleOfGeometricZeta(DomainError):
    pass


class GridTooCoarse(DomainError):
    pass


class NotSelfSimilar(DomainError):
    pass


class NotAPole(DomainError):
    pass


class NearJump(DomainError):
    pass


class PrimePowerPoint(DomainError):
    pass


class SupportOverflow(DomainError):
    pass


class TableTooSmall(DomainError):
    pass


class CEqualsOne(DomainError):
    pass


class PadInsufficient(DomainError):
    pass


class PoleOnSegment(DomainError):
    pass


class SchemaMismatch(ZetaToolkitError):
    """An artifact file does not follow any schema this toolkit writes."""


class FiniteStringWarning(UserWarning):
    """A finite explicit string was used where an infinite string is assumed."""


class ZeroConfirmationWarning(UserWarning):
    """A |zeta| minimum fell below the trigger but was not confirmed as a zero."""


class ExploratoryRegimeWarning(UserWarning):
    """Operation run where its correctness is conjectural."""
