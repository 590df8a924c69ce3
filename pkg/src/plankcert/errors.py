class PlankError(Exception):
    """Base class for all errors raised by plankcert."""


class EmptyBody(PlankError):
    pass


class UnboundedBody(PlankError):
    pass


class DimensionError(PlankError):
    pass


class CellBudgetExceeded(PlankError):
    pass


class NotCovered(PlankError):
    pass


class NoOrder(PlankError):
    pass


class BudgetExceeded(PlankError):
    pass


class InvalidOrder(PlankError):
    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class WitnessFailure(PlankError):
    pass


class CaseMismatch(PlankError):
    pass


class DocumentError(PlankError):
    """Malformed scene or certificate document."""
