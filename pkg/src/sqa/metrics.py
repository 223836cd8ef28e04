"""Citation metrics derived from the corpus.

FWCI here is the article's citation count divided by the mean citation
count of its (subject area, year) bucket, averaged over the article's
buckets. Buckets whose mean is zero contribute nothing; an article whose
buckets all have zero mean (or that has no subject area) has no FWCI.
Undefined FWCI is a value (None), never an error.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Mapping

from .corpus import Corpus, EntityType


@dataclass(frozen=True)
class EntityAggregates:
    """Corpus-wide rollup for one entity."""

    document_count: int
    total_citations: int
    average_fwci: float | None


@dataclass(frozen=True)
class MetricsIndex:
    fwci: Mapping[str, float | None]
    entity_aggregates: Mapping[tuple[EntityType, str], EntityAggregates]

    def fwci_of(self, article_id: str) -> float | None:
        return self.fwci.get(article_id)

    def aggregates_for(self, etype: EntityType, entity_id: str) -> EntityAggregates | None:
        return self.entity_aggregates.get((etype, entity_id))


def compute_metrics(corpus: Corpus) -> MetricsIndex:
    buckets: dict[tuple[str, int], list[str]] = defaultdict(list)
    for art in corpus.articles.values():
        for sa in art.subject_areas:
            buckets[(sa.id, art.year)].append(art.id)

    bucket_mean: dict[tuple[str, int], float] = {}
    for key, members in buckets.items():
        total = sum(corpus.articles[a].citation_count for a in members)
        bucket_mean[key] = total / len(members)

    fwci: dict[str, float | None] = {}
    for art in corpus.articles.values():
        ratios = []
        for sa in art.subject_areas:
            mean = bucket_mean[(sa.id, art.year)]
            if mean > 0:
                ratios.append(art.citation_count / mean)
        fwci[art.id] = sum(ratios) / len(ratios) if ratios else None

    aggregates: dict[tuple[EntityType, str], EntityAggregates] = {}
    per_entity: dict[tuple[EntityType, str], list[str]] = defaultdict(list)
    for art in corpus.articles.values():
        seen: set[tuple[EntityType, str]] = set()
        for ent in art.entities():
            key = (ent.type, ent.id)
            if key not in seen:
                per_entity[key].append(art.id)
                seen.add(key)
    for key, article_ids in per_entity.items():
        aggregates[key] = aggregate_articles(corpus, fwci, article_ids)

    return MetricsIndex(fwci=fwci, entity_aggregates=aggregates)


def aggregate_articles(
    corpus: Corpus, fwci: Mapping[str, float | None], article_ids: list[str]
) -> EntityAggregates:
    """Document count, total citations, and mean FWCI over a set of articles.

    The FWCI average only counts articles whose FWCI is defined.
    """
    total_citations = sum(corpus.articles[a].citation_count for a in article_ids)
    defined = [fwci[a] for a in article_ids if fwci.get(a) is not None]
    average = sum(defined) / len(defined) if defined else None
    return EntityAggregates(
        document_count=len(article_ids),
        total_citations=total_citations,
        average_fwci=average,
    )
