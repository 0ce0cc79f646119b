"""Exception types shared across the simulation engine."""


class BargainError(Exception):
    """Base class for all engine errors."""


class InvalidInput(BargainError):
    """A scalar input is non-finite or outside its documented domain."""


class DegenerateRatio(BargainError):
    """A ratio formula received a divisor at or below the epsilon floor."""


class InvalidConfig(BargainError):
    """A configuration object violates one of its invariants."""


class SingularSystem(BargainError):
    """The fixed-point linear system is numerically singular."""


class NoChain(BargainError):
    """No qualifying power chain connects the requester to a helper."""


class TooLarge(BargainError):
    """Input exceeds the size bound of an exhaustive-enumeration oracle."""


class EmptyInput(BargainError):
    """An aggregate operation received no data."""


class AllZero(BargainError):
    """A statistic is undefined because every value is zero."""


class ConfigMismatch(BargainError):
    """Two configs that must differ only in one field differ elsewhere."""


class ScenarioError(BargainError):
    """Base class for scenario-file errors (parse, schema, invariant)."""


class ParseError(ScenarioError):
    """Scenario text is not valid JSON."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        super().__init__(message)
        self.line = line
        self.col = col


class SchemaError(ScenarioError):
    """Scenario document has a missing, unknown, or mistyped field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class InvariantError(ScenarioError):
    """Scenario field has the right type but violates a value invariant."""

    def __init__(self, path: str, rule: str):
        super().__init__(f"{path}: {rule}")
        self.path = path
        self.rule = rule
