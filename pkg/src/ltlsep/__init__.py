"""Synthesis and verification of temporal queries separating positive from negative data examples."""
from .model import (
    BudgetExceeded,
    DataInstance,
    DiamondQuery,
    ExampleSet,
    Formula,
    ParseError,
    PathQuery,
    QueryClass,
    canonical_text,
    parse_example_set,
    parse_query,
)
from .evaluation import holds, normalize
from .containment import contains, path_contains
from .separation import separates

__all__ = [
    "BudgetExceeded",
    "DataInstance",
    "DiamondQuery",
    "ExampleSet",
    "Formula",
    "ParseError",
    "PathQuery",
    "QueryClass",
    "canonical_text",
    "contains",
    "holds",
    "normalize",
    "parse_example_set",
    "parse_query",
    "path_contains",
    "separates",
]
__version__ = "0.1.0"
