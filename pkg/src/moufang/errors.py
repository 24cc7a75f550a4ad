"""Exception hierarchy shared by every module of the package."""


class MoufangError(Exception):
    """Base class for all errors raised by this package."""


class NotLatinSquare(MoufangError, ValueError):
    pass


class NoIdentity(MoufangError, ValueError):
    pass


class NotNormal(MoufangError, ValueError):
    pass


class NotAGroup(MoufangError, ValueError):
    pass


class UnknownName(MoufangError, KeyError):
    pass


class UnsupportedFieldSize(MoufangError, ValueError):
    pass


class TableTooLarge(MoufangError):
    """A full Cayley table was requested above the supported order."""


class DegreeMismatch(MoufangError, ValueError):
    pass


class BudgetExceeded(MoufangError):
    """A closure or search ran past its configured budget."""


# the closure-specific name used across the mapping and triality code
ClosureBudgetExceeded = BudgetExceeded


class TrialityViolated(MoufangError):
    pass


class CarrierTooLarge(MoufangError):
    pass


class InvalidParameter(MoufangError, ValueError):
    pass


class UnknownRow(MoufangError, KeyError):
    pass


class RelationsViolated(MoufangError):
    pass


class NotTriality(MoufangError):
    pass


class UnrecognizedSimpleFactor(MoufangError):
    pass


class RadicalNotTrivial(MoufangError):
    pass


class NotSylowPrime(MoufangError):
    def __init__(self, p, witnesses):
        self.p = p
        self.witnesses = list(witnesses)
        super().__init__(
            f"{p} is not a Sylow prime; obstructing Paige factors q={self.witnesses}"
        )
