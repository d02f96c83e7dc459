"""Exception hierarchy shared by the library and the command line."""

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3
EXIT_PARTIAL = 4


class MagicError(Exception):
    """Base class; `exit_code` is what the CLI returns for it."""
    exit_code = EXIT_USAGE


class UsageError(MagicError):
    exit_code = EXIT_USAGE


class GraphSyntaxError(MagicError):
    """Graph file is not well-formed JSON of the expected shape."""
    exit_code = EXIT_USAGE


class UnknownBuiltinError(MagicError):
    exit_code = EXIT_USAGE


class GraphValidationError(MagicError):
    """A fullerene invariant is violated; the message names the first one."""
    exit_code = EXIT_VALIDATION


class InvalidOrderError(MagicError):
    exit_code = EXIT_VALIDATION


class InfeasiblePairError(MagicError):
    """The pair (S_p, S_h) does not satisfy the fundamental relation."""
    exit_code = EXIT_INFEASIBLE


class NoHexagonsError(MagicError):
    exit_code = EXIT_VALIDATION


class SolutionsNotStoredError(MagicError):
    exit_code = EXIT_USAGE


class InvalidPermutationError(MagicError):
    exit_code = EXIT_VALIDATION


class NumericalError(MagicError):
    exit_code = EXIT_VALIDATION
