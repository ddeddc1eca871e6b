"""Shared exception classes with CLI exit-code classes attached."""


class TropRankError(Exception):
    exit_code = 1


class ParseError(TropRankError):
    """Malformed input file or argument."""
    exit_code = 2


class PreconditionError(TropRankError):
    """Input violates an operation's documented precondition."""
    exit_code = 3


class InternalInvariantError(TropRankError):
    """An invariant that should be unreachable failed; indicates a bug."""
    exit_code = 4


class GenericityError(TropRankError):
    """Random coefficients failed a genericity requirement after retries."""
    exit_code = 4
