"""Exception types shared across the package."""


class BbenetError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(BbenetError):
    """Malformed input text (expression, network file, or partition file)."""

    def __init__(self, message, line=None, offset=None):
        self.message = message
        self.line = line
        self.offset = offset
        super().__init__(str(self))

    def __str__(self):
        where = []
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.offset is not None:
            where.append(f"offset {self.offset}")
        if where:
            return f"{', '.join(where)}: {self.message}"
        return self.message


class UnknownVariableError(ParseError):
    """An expression refers to a variable that was never declared."""

    def __init__(self, name, line=None, offset=None):
        self.name = name
        super().__init__(f"unknown variable '{name}'", line=line, offset=offset)


class MissingVariableError(BbenetError):
    """An evaluation environment does not cover a variable of the expression."""

    def __init__(self, name):
        self.name = name
        super().__init__(f"no value for variable '{name}'")


class PartitionError(BbenetError):
    """A candidate partition does not cover the variable set exactly."""


class CapExceededError(BbenetError):
    """An explicit enumeration would exceed the configured size cap."""


class NotABbeError(BbenetError):
    """A partition offered for reduction fails the equivalence check.

    The offending state (constant on the partition, image not constant)
    is kept in ``witness``.
    """

    def __init__(self, witness):
        self.witness = witness
        bits = "".join(str(b) for b in witness)
        super().__init__(f"partition is not a backward equivalence, witness {bits}")
