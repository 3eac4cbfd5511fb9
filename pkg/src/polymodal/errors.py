"""Exception hierarchy shared by every module."""


class PMLError(Exception):
    """Base class; ``kind`` is the short machine-readable tag used by the CLI."""

    kind = "error"


class VocabularyError(PMLError):
    kind = "vocabulary"


class ArityError(PMLError):
    kind = "arity"


class ParseError(PMLError):
    kind = "syntax"

    def __init__(self, message: str, position: int | None = None, line: int | None = None):
        self.position = position
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"col {position}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class ShapeError(PMLError):
    kind = "shape"


class FragmentError(PMLError):
    kind = "fragment"


class PreconditionError(PMLError):
    kind = "precondition"


class ConsistencyError(PMLError):
    """A construction invariant failed; indicates a bug or a violated axiom."""

    kind = "consistency"


class TruncationError(PMLError):
    kind = "truncation"


class BudgetError(PMLError):
    kind = "budget"
