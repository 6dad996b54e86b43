"""Exception hierarchy shared by every loopnil module."""


class LoopError(Exception):
    """Base class for all errors raised by loopnil."""


class MalformedInput(LoopError):
    pass


class NotLatinSquare(LoopError):
    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class NoIdentity(LoopError):
    pass


class NotASubloop(LoopError):
    pass


class NotNormal(LoopError):
    pass


class BudgetExceeded(LoopError):
    """A closure grew past its element budget.

    ``partial`` is the number of elements produced before giving up.
    """

    def __init__(self, message, partial=0):
        super().__init__(message)
        self.partial = partial


class InnerMismatch(LoopError):
    pass


class NotSubgroup(LoopError):
    pass


class NotNilpotent(LoopError):
    pass


class MltNotNilpotent(NotNilpotent):
    pass


class ArityMismatch(LoopError):
    pass


class OrbitNotSubloop(LoopError):
    pass


class VerificationFailed(LoopError):
    pass
