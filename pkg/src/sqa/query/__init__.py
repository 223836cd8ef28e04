from .ast import (
    And,
    ArticleIn,
    EntityIn,
    MatchAll,
    MatchNone,
    Node,
    Not,
    Or,
    YearBetween,
    canonicalize,
    evaluate,
    serialize,
)
from .build import BuiltQuery, EntityFilter, FacetRequest, QueryBuilder, QueryParams
from .parse import ParseError, parse

__all__ = [
    "And",
    "ArticleIn",
    "BuiltQuery",
    "EntityFilter",
    "EntityIn",
    "FacetRequest",
    "MatchAll",
    "MatchNone",
    "Node",
    "Not",
    "Or",
    "ParseError",
    "QueryBuilder",
    "QueryParams",
    "YearBetween",
    "canonicalize",
    "evaluate",
    "parse",
    "serialize",
]
