"""Exception hierarchy shared by all modules."""


class FracPVError(Exception):
    """Base class for package errors."""

    exit_code = 1


class ParameterError(FracPVError, ValueError):
    """An argument is outside its admissible range."""

    exit_code = 2


class UnsupportedRegimeError(FracPVError):
    """The requested operation does not apply to this kernel/measure/power."""

    exit_code = 2


class SingularityError(FracPVError, ArithmeticError):
    """Evaluation exactly at a singular point of a kernel."""

    exit_code = 2


class DegenerateSampleError(FracPVError):
    """A statistic is undefined for the sample at hand (e.g. zero denominator)."""

    exit_code = 2


class TruncationError(FracPVError):
    """Support truncation is too aggressive for the kernel tail (strict mode)."""

    exit_code = 2


class SizeError(FracPVError, MemoryError):
    """A lattice does not fit the memory budget."""

    exit_code = 2


class NonConvergenceError(FracPVError):
    """A numerical routine exhausted its refinement budget."""

    exit_code = 3

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class DivergenceError(FracPVError, ArithmeticError):
    """An integral or series requested outside its domain of convergence."""

    exit_code = 2
