"""Recursive-descent parser for the canonical query string grammar.

Grammar (see docs/query_grammar.md):

    query   = or_expr
    or_expr = and_expr { "OR" and_expr }
    and_expr = unary { "AND" unary }
    unary   = "NOT" unary | primary
    primary = atom | "(" or_expr ")"
    atom    = "ALL" | "NONE"
            | "PUBYEAR" "(" INT ".." INT ")"
            | TYPE "(" ID ")"
            | "ARTICLES" "(" ID { "|" ID } ")"

Parsed trees are canonicalized, so parse(serialize(q)) == q holds for
every canonical query q.
"""

from __future__ import annotations

import re

from ..corpus import EntityType
from .ast import And, ArticleIn, EntityIn, MatchAll, MatchNone, Node, Not, Or, YearBetween, canonicalize


class ParseError(ValueError):
    pass


_ID = re.compile(r"[A-Za-z0-9_.:\-]+")


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek_word(self) -> str | None:
        self.skip_ws()
        match = re.match(r"[A-Za-z_]+", self.text[self.pos :])
        return match.group(0) if match else None

    def take_word(self) -> str:
        word = self.peek_word()
        if word is None:
            raise ParseError(f"expected a keyword at offset {self.pos} in {self.text!r}")
        self.pos += len(word)
        return word

    def take(self, literal: str) -> None:
        self.skip_ws()
        if not self.text.startswith(literal, self.pos):
            raise ParseError(f"expected {literal!r} at offset {self.pos} in {self.text!r}")
        self.pos += len(literal)

    def try_take(self, literal: str) -> bool:
        self.skip_ws()
        if self.text.startswith(literal, self.pos):
            self.pos += len(literal)
            return True
        return False

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)


def parse(text: str) -> Node:
    tokens = _Tokens(text)
    node = _parse_or(tokens)
    if not tokens.at_end():
        raise ParseError(f"trailing input at offset {tokens.pos} in {text!r}")
    return canonicalize(node)


def _parse_or(tokens: _Tokens) -> Node:
    children = [_parse_and(tokens)]
    while tokens.peek_word() == "OR":
        tokens.take_word()
        children.append(_parse_and(tokens))
    return children[0] if len(children) == 1 else Or(tuple(children))


def _parse_and(tokens: _Tokens) -> Node:
    children = [_parse_unary(tokens)]
    while tokens.peek_word() == "AND":
        tokens.take_word()
        children.append(_parse_unary(tokens))
    return children[0] if len(children) == 1 else And(tuple(children))


def _parse_unary(tokens: _Tokens) -> Node:
    if tokens.peek_word() == "NOT":
        tokens.take_word()
        return Not(_parse_unary(tokens))
    if tokens.try_take("("):
        inner = _parse_or(tokens)
        tokens.take(")")
        return inner
    return _parse_atom(tokens)


def _take_id(tokens: _Tokens) -> str:
    tokens.skip_ws()
    match = _ID.match(tokens.text, tokens.pos)
    if not match:
        raise ParseError(f"expected an id at offset {tokens.pos} in {tokens.text!r}")
    tokens.pos = match.end()
    return match.group(0)


def _parse_atom(tokens: _Tokens) -> Node:
    word = tokens.take_word()
    if word == "ALL":
        return MatchAll()
    if word == "NONE":
        return MatchNone()
    if word == "PUBYEAR":
        tokens.take("(")
        lo = _take_int(tokens)
        tokens.take("..")
        hi = _take_int(tokens)
        tokens.take(")")
        return YearBetween(lo, hi)
    if word == "ARTICLES":
        tokens.take("(")
        ids = [_take_id(tokens)]
        while tokens.try_take("|"):
            ids.append(_take_id(tokens))
        tokens.take(")")
        return ArticleIn(tuple(ids))
    try:
        etype = EntityType(word)
    except ValueError:
        raise ParseError(f"unknown predicate {word!r} in {tokens.text!r}") from None
    tokens.take("(")
    entity_id = _take_id(tokens)
    tokens.take(")")
    return EntityIn(etype, entity_id)


def _take_int(tokens: _Tokens) -> int:
    tokens.skip_ws()
    match = re.match(r"-?\d+", tokens.text[tokens.pos :])
    if not match:
        raise ParseError(f"expected an integer at offset {tokens.pos} in {tokens.text!r}")
    tokens.pos += match.end()
    return int(match.group(0))
