"""Exception types shared across the workbench."""


class PlecticError(Exception):
    """Base class for all workbench errors."""


class ChartMismatch(PlecticError):
    pass


class DegreeError(PlecticError):
    pass


class DimensionError(PlecticError):
    pass


class NotClosed(PlecticError):
    """A form expected to be closed is not; carries the exact residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NotHamiltonian(PlecticError):
    """A multivector field fails the invariance condition; carries the residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class MissingHamiltonian(PlecticError):
    pass


class SignConvention(PlecticError):
    """An internal cross-check of the bracket sign conventions failed."""


class HornError(PlecticError):
    """Horn data is inconsistent; `witness` names the offending faces."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InputError(PlecticError):
    """Malformed problem input; `pointer` is a JSON-pointer-style path."""

    def __init__(self, message, pointer=""):
        super().__init__(message)
        self.pointer = pointer

    def __str__(self):
        base = super().__str__()
        return f"{base} (at {self.pointer or '/'})"
