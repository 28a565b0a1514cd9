"""Exception hierarchy.

Every error raised by the library derives from :class:`HilieError`.  Input
problems (malformed data, violated preconditions) derive from
:class:`InputError`; a numerical contract that could not be met derives from
:class:`ContractViolation`.  The CLI maps the two families to exit codes 1
and 2.
"""


class HilieError(Exception):
    pass


class InputError(HilieError, ValueError):
    pass


class ContractViolation(HilieError):
    pass


class UnknownKind(InputError):
    pass


class EmptyInput(InputError):
    pass


class IncompatibleTail(InputError):
    pass


class NormUndefined(InputError):
    pass


class UndefinedPairing(InputError):
    pass


class MalformedWeight(InputError):
    pass


class IllegalSigns(InputError):
    pass


class IncomparableTails(InputError):
    pass


class UnsupportedTail(InputError):
    pass


class WindowTooLarge(InputError):
    pass


class NotTraceClass(InputError):
    pass


class UndecidableTail(InputError):
    pass


class NotSkew(InputError):
    pass


class NotUnitary(InputError):
    pass


class NotHermitian(InputError):
    pass


class MalformedPartition(InputError):
    pass


class NotInRootLattice(InputError):
    pass


class LatticeMismatch(InputError):
    pass


class NotOnCircle(InputError):
    pass


class NotDerivation(InputError):
    pass


class SliceTooCoarse(ContractViolation):
    """Raised when the achieved residual exceeds the requested tolerance.

    The partial result is attached as ``.result`` so callers can still
    inspect the residual that was reached.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
