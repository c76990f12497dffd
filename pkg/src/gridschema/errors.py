"""Exception hierarchy shared by every module."""
from __future__ import annotations


class SchemaError(Exception):
    """Base class for domain errors (CLI exit status 1)."""


class UnknownVertex(SchemaError):
    pass


class PartialMap(SchemaError):
    pass


class SearchSpaceTooLarge(SchemaError):
    pass


class MalformedGraph(SchemaError):
    pass


class InvalidAutomaton(SchemaError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations) or "invalid automaton")


class InvalidSchema(SchemaError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations) or "invalid schema")


class UnknownVariable(SchemaError):
    pass


class RangeViolation(SchemaError):
    pass


class ResidualVariables(SchemaError):
    pass


class ResidualNondeterminism(SchemaError):
    pass


class RangeExcludesOriginal(SchemaError):
    pass


class OccurrenceNotConstant(SchemaError):
    pass


class EmptyRestriction(SchemaError):
    pass


class NotASubset(SchemaError):
    pass


class NotStructural(SchemaError):
    pass


class NotComposable(SchemaError):
    pass


class NotASubschema(SchemaError):
    pass


class SchemaMismatch(SchemaError):
    pass


class MissingBehavior(SchemaError):
    pass


class BehaviorKindMismatch(SchemaError):
    pass


class AlphabetMismatch(SchemaError):
    pass


class SyntaxError_(SchemaError):
    """Positioned parse error; named with a trailing underscore to avoid the builtin."""

    def __init__(self, message: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}")


class SemanticError(SchemaError):
    def __init__(self, message: str, element: str | None = None):
        self.element = element
        super().__init__(f"{element}: {message}" if element else message)
