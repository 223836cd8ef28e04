"""Filtered article search and faceted aggregation over the corpus.

Both operations are pure functions of the immutable corpus, so results
are deterministic and safe to compute concurrently. Ordering is a total
order everywhere: articles rank by descending citation count with the id
as tie-break, facet entities by descending document count, then
descending total citations, then ascending id.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

from .corpus import Corpus, EntityType
from .errors import InvalidFacetError
from .metrics import MetricsIndex, aggregate_articles
from .query.ast import Node, evaluate
from .query.build import FacetRequest


@dataclass(frozen=True)
class ArticleRow:
    id: str
    title: str
    year: int
    metrics: Mapping[str, float | int | None]  # only requested metrics appear

    def to_json(self) -> dict:
        return {"id": self.id, "title": self.title, "year": self.year, **dict(self.metrics)}


@dataclass(frozen=True)
class ArticleResultSet:
    rows: tuple[ArticleRow, ...]
    total_matched: int

    @property
    def kind(self) -> str:
        return "articles"

    def __len__(self) -> int:
        return len(self.rows)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "total_matched": self.total_matched,
            "rows": [r.to_json() for r in self.rows],
        }


@dataclass(frozen=True)
class FacetRow:
    id: str
    name: str
    document_count: int
    metrics: Mapping[str, float | int | None]

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "document_count": self.document_count,
            **dict(self.metrics),
        }


@dataclass(frozen=True)
class FacetResultSet:
    facet_type: EntityType
    rows: tuple[FacetRow, ...]
    total_matched: int

    @property
    def kind(self) -> str:
        return "facets"

    def __len__(self) -> int:
        return len(self.rows)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "facet_type": self.facet_type.value,
            "total_matched": self.total_matched,
            "rows": [r.to_json() for r in self.rows],
        }


ResultSet = ArticleResultSet | FacetResultSet


class SearchEngine:
    def __init__(self, corpus: Corpus, metrics: MetricsIndex):
        self.corpus = corpus
        self.metrics = metrics

    def _matching_articles(self, ast: Node) -> list[str]:
        return [
            art.id for art in self.corpus.articles.values() if evaluate(ast, art, self.corpus)
        ]

    def article_search(
        self, ast: Node, limit: int, metrics: tuple[str, ...] = ()
    ) -> ArticleResultSet:
        """Articles satisfying the predicate, best-cited first."""
        matched = self._matching_articles(ast)
        matched.sort(key=lambda a: (-self.corpus.articles[a].citation_count, a))
        rows = []
        for art_id in matched[: max(limit, 0)]:
            art = self.corpus.articles[art_id]
            attached: dict[str, float | int | None] = {}
            if "citation_count" in metrics:
                attached["citation_count"] = art.citation_count
            if "fwci" in metrics:
                attached["fwci"] = self.metrics.fwci_of(art.id)
            rows.append(
                ArticleRow(
                    id=art.id,
                    title=art.title,
                    year=art.year,
                    metrics=MappingProxyType(attached),
                )
            )
        return ArticleResultSet(rows=tuple(rows), total_matched=len(matched))

    def faceted_article_search(self, ast: Node, facet: FacetRequest) -> FacetResultSet:
        """Group matching articles by one entity type and rank the entities."""
        if not isinstance(facet.facet_type, EntityType):
            raise InvalidFacetError(f"cannot facet on {facet.facet_type!r}")
        matched = self._matching_articles(ast)
        by_entity: dict[str, list[str]] = defaultdict(list)
        for art_id in matched:
            art = self.corpus.articles[art_id]
            for ent_id in set(art.entity_ids(facet.facet_type)):
                by_entity[ent_id].append(art_id)

        aggregated = {
            ent_id: aggregate_articles(self.corpus, self.metrics.fwci, ids)
            for ent_id, ids in by_entity.items()
        }
        ranked = sorted(
            aggregated.items(),
            key=lambda kv: (-kv[1].document_count, -kv[1].total_citations, kv[0]),
        )
        rows = []
        for ent_id, agg in ranked[: facet.top_n]:
            ent = self.corpus.get_entity(ent_id, facet.facet_type)
            attached: dict[str, float | int | None] = {}
            if "total_citations" in facet.metrics:
                attached["total_citations"] = agg.total_citations
            if "average_fwci" in facet.metrics:
                attached["average_fwci"] = agg.average_fwci
            rows.append(
                FacetRow(
                    id=ent_id,
                    name=ent.name if ent else ent_id,
                    document_count=agg.document_count,
                    metrics=MappingProxyType(attached),
                )
            )
        return FacetResultSet(
            facet_type=facet.facet_type, rows=tuple(rows), total_matched=len(matched)
        )
