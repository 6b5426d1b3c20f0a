"""Exception hierarchy shared by the library and the CLI."""


class PuiseuxError(Exception):
    """Base class for every domain error raised by expuiseux."""


class NotCofinite(PuiseuxError):
    """The generators have gcd > 1, so the monoid misses infinitely many naturals."""


class NotAMonoid(PuiseuxError):
    pass


class NotClosed(PuiseuxError):
    pass


class NotAtomic(PuiseuxError):
    """Operation needs atoms but the semiring has none (n(r) = 1, d(r) > 1)."""


class NotMember(PuiseuxError):
    pass


class InsufficientCoefficient(PuiseuxError):
    pass


class MixedResidues(PuiseuxError):
    pass


class BudgetExceeded(PuiseuxError):
    """A search ran out of node budget.

    ``partial`` holds whatever was collected before the budget ran out.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial if partial is not None else []
