"""Grid automata, their schemas, schema morphisms and a small execution engine."""
from __future__ import annotations

from .errors import SchemaError
from .grid_automaton import (
    BasicGridAutomaton,
    Direction,
    GridAutomaton,
    Link,
    LinkClass,
    Locus,
    Port,
    Role,
    Target,
    classify_automaton,
    derive_connection_grid,
    derive_grid,
    to_basic,
)
from .kinds import Kind, KindSet, KindUniverse, ParamRange, Universal, kind_set
from .multigraph import BeginOnly, Closed, EndOnly, GeneralizedMultigraph
from .schema import (
    BasicSchema,
    Constant,
    LinkSlot,
    Parameterized,
    PortSchema,
    PortSlot,
    Variable,
    classify_schema,
    derive_basic_schema,
    schema_grid,
    validate_schema,
    variable_multiset,
)

__all__ = [
    "BasicGridAutomaton",
    "BasicSchema",
    "BeginOnly",
    "Closed",
    "Constant",
    "Direction",
    "EndOnly",
    "GeneralizedMultigraph",
    "GridAutomaton",
    "Kind",
    "KindSet",
    "KindUniverse",
    "Link",
    "LinkClass",
    "LinkSlot",
    "Locus",
    "ParamRange",
    "Parameterized",
    "Port",
    "PortSchema",
    "PortSlot",
    "Role",
    "SchemaError",
    "Target",
    "Universal",
    "Variable",
    "classify_automaton",
    "classify_schema",
    "derive_basic_schema",
    "derive_connection_grid",
    "derive_grid",
    "kind_set",
    "schema_grid",
    "to_basic",
    "validate_schema",
    "variable_multiset",
]

__version__ = "0.1.0"
