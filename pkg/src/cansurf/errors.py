"""Exception hierarchy shared by all cansurf modules.

The CLI maps these onto process exit codes: ParseError -> 2,
PartialGraphError -> 1, any other CansurfError -> 3.
"""


class CansurfError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(CansurfError):
    """A document could not be tokenized or does not follow the grammar."""

    def __init__(self, message, line=None):
        if line is not None:
            message = "line {}: {}".format(line, message)
        super().__init__(message)
        self.line = line


class SemanticError(CansurfError):
    """Well-formed input that violates a structural or reference constraint."""


class NotApplicableError(SemanticError):
    """A move's precondition failed; the message names the precondition."""


class PartialGraphError(CansurfError):
    """A graph build hit a limit.  Carries the partial graph built so far."""

    def __init__(self, message, graph):
        super().__init__(message)
        self.graph = graph
