"""Exception types raised by lvnsfd."""


class LVError(Exception):
    """Base class for all lvnsfd errors."""


class DomainError(LVError, ValueError):
    """Input outside an operation's mathematical domain."""


class NotFoundError(LVError, LookupError):
    """A requested object (e.g. the interior fixed point) does not exist."""


class NumericError(LVError, ArithmeticError):
    """A computation produced non-finite or inconsistent numbers."""


class RegimeError(LVError, ValueError):
    """The requested quantity is undefined in the current dynamical regime."""


class InvariantError(LVError, RuntimeError):
    """An internal invariant was violated during a run."""
