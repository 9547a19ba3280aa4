"""Exception hierarchy and process exit codes.

Every failure mode maps onto one of four exit codes so that shell callers
can distinguish "you called it wrong" from "your input is broken" from
"the mathematics disagrees with itself" (the last one means a bug, either
here or in the input data, and is deliberately loud).
"""

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_INCONSISTENT = 3


class SixLinesError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = EXIT_USAGE


class UsageError(SixLinesError):
    """Bad arguments to the command-line interface."""

    exit_code = EXIT_USAGE


class SurfaceValidationError(SixLinesError):
    """A surface description failed validation (degenerate lines, wrong
    degree, missing fields, fingerprint mismatch, ...)."""

    exit_code = EXIT_VALIDATION


class MathInconsistencyError(SixLinesError):
    """Two routes to the same quantity disagreed, or a residue occurred
    that no surface can produce.

    This is the bug detector: a random error in the pipeline almost
    surely produces an inadmissible residue class long before it produces
    a wrong-but-plausible count, so we refuse to continue.
    """

    exit_code = EXIT_INCONSISTENT


class AmbiguousCountError(MathInconsistencyError):
    """More than one candidate count survived the congruence and the
    point-count bounds.  Cannot happen for geometric Picard rank >= 16
    (the search window is shorter than the combined modulus), so reaching
    this is always reported as an inconsistency."""


class UndeterminedSystemError(SixLinesError):
    """The congruence system does not yet pin every unknown.

    Not a contradiction -- just not enough witness primes -- but callers
    who asked for a complete table get the same exit code as for an
    inconsistency, since either way no trustworthy table exists."""

    exit_code = EXIT_INCONSISTENT


class TableFormatError(SixLinesError):
    """A stored trace table failed structural checks on load."""

    exit_code = EXIT_VALIDATION


class DegenerateLatticeError(SixLinesError):
    """A bilinear form turned out degenerate at the working 2-adic
    precision (determinant divisible by 2^K)."""

    exit_code = EXIT_VALIDATION
