"""Search query AST: a normalized boolean tree over atomic predicates.

Atoms are entity membership, inclusive publication-year ranges, explicit
article-id sets, and the trivial ALL/NONE predicates. Canonical form is
negation normal form with NOT pushed down to atoms, AND/OR flattened,
children deduplicated and sorted by their serialization, and identity or
absorbing elements removed. Serialization of a canonical tree parses back
to the identical tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import singledispatch
from typing import TYPE_CHECKING, Union

from ..corpus import ArticleRecord, EntityType

if TYPE_CHECKING:
    from ..corpus import Corpus


@dataclass(frozen=True)
class EntityIn:
    type: EntityType
    id: str


@dataclass(frozen=True)
class YearBetween:
    lo: int
    hi: int


@dataclass(frozen=True)
class ArticleIn:
    ids: tuple[str, ...]  # sorted, deduplicated


@dataclass(frozen=True)
class MatchAll:
    pass


@dataclass(frozen=True)
class MatchNone:
    pass


@dataclass(frozen=True)
class Not:
    child: "Node"


@dataclass(frozen=True)
class And:
    children: tuple["Node", ...]


@dataclass(frozen=True)
class Or:
    children: tuple["Node", ...]


Node = Union[EntityIn, YearBetween, ArticleIn, MatchAll, MatchNone, Not, And, Or]

_ATOMS = (EntityIn, YearBetween, ArticleIn, MatchAll, MatchNone)


def is_atom(node: Node) -> bool:
    return isinstance(node, _ATOMS)


def canonicalize(node: Node) -> Node:
    """Normalize an arbitrary boolean tree into canonical form."""
    node = _push_not(node, negate=False)
    return _normalize(node)


def _push_not(node: Node, negate: bool) -> Node:
    if isinstance(node, Not):
        return _push_not(node.child, not negate)
    if isinstance(node, And):
        children = tuple(_push_not(c, negate) for c in node.children)
        return Or(children) if negate else And(children)
    if isinstance(node, Or):
        children = tuple(_push_not(c, negate) for c in node.children)
        return And(children) if negate else Or(children)
    if negate:
        if isinstance(node, MatchAll):
            return MatchNone()
        if isinstance(node, MatchNone):
            return MatchAll()
        return Not(node)
    return node


def _normalize(node: Node) -> Node:
    if isinstance(node, ArticleIn):
        return ArticleIn(tuple(sorted(set(node.ids))))
    if isinstance(node, Not):
        return Not(_normalize(node.child))
    if not isinstance(node, (And, Or)):
        return node

    op = type(node)
    absorbing, identity = (MatchNone, MatchAll) if op is And else (MatchAll, MatchNone)
    flat: list[Node] = []
    for child in node.children:
        child = _normalize(child)
        if isinstance(child, op):
            flat.extend(child.children)
        elif isinstance(child, absorbing):
            return absorbing()
        elif isinstance(child, identity):
            continue
        else:
            flat.append(child)

    unique = sorted(set(flat), key=serialize)
    if not unique:
        return identity()
    if len(unique) == 1:
        return unique[0]
    return op(tuple(unique))


def serialize(node: Node) -> str:
    """Render the canonical query string; AND binds tighter than OR."""
    return _serialize(node)


@singledispatch
def _serialize(node) -> str:
    raise TypeError(f"not a query node: {node!r}")


@_serialize.register
def _(node: EntityIn) -> str:
    return f"{node.type.value}({node.id})"


@_serialize.register
def _(node: YearBetween) -> str:
    return f"PUBYEAR({node.lo}..{node.hi})"


@_serialize.register
def _(node: ArticleIn) -> str:
    return f"ARTICLES({'|'.join(node.ids)})"


@_serialize.register
def _(node: MatchAll) -> str:
    return "ALL"


@_serialize.register
def _(node: MatchNone) -> str:
    return "NONE"


@_serialize.register
def _(node: Not) -> str:
    inner = _serialize(node.child)
    if not is_atom(node.child):
        inner = f"({inner})"
    return f"NOT {inner}"


@_serialize.register
def _(node: And) -> str:
    parts = [
        f"({_serialize(c)})" if isinstance(c, Or) else _serialize(c) for c in node.children
    ]
    return " AND ".join(parts)


@_serialize.register
def _(node: Or) -> str:
    return " OR ".join(_serialize(c) for c in node.children)


def evaluate(node: Node, article: ArticleRecord, corpus: "Corpus") -> bool:
    """Decide whether one article satisfies the predicate tree."""
    if isinstance(node, EntityIn):
        return article.id in corpus.articles_for_entity(node.type, node.id)
    if isinstance(node, YearBetween):
        return node.lo <= article.year <= node.hi
    if isinstance(node, ArticleIn):
        return article.id in node.ids
    if isinstance(node, MatchAll):
        return True
    if isinstance(node, MatchNone):
        return False
    if isinstance(node, Not):
        return not evaluate(node.child, article, corpus)
    if isinstance(node, And):
        return all(evaluate(c, article, corpus) for c in node.children)
    if isinstance(node, Or):
        return any(evaluate(c, article, corpus) for c in node.children)
    raise TypeError(f"not a query node: {node!r}")
