"""Immutable bibliometric corpus: article records, entity table, indices.

The corpus is loaded once from a UTF-8 JSONL file (one article object per
line) and never mutated afterwards, so all lookups are safe under
unrestricted concurrent reads.
"""

from __future__ import annotations

import hashlib
import json
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping

from .errors import IngestError

YEAR_MIN = 1500
YEAR_MAX = 2100


class EntityType(str, Enum):
    """Entity kinds that may appear in filters, facets, and references.

    Articles are deliberately not an entity type: they are the data unit
    that queries aggregate, and are only ever addressed through search
    results.
    """

    AUTHOR = "AUTHOR"
    INSTITUTION = "INSTITUTION"
    VENUE = "VENUE"
    TOPIC = "TOPIC"
    SUBJECT_AREA = "SUBJECT_AREA"
    SDG = "SDG"


# Display labels used in markdown link targets, e.g. [name](Author/A001).
LINK_LABELS: dict[EntityType, str] = {
    EntityType.AUTHOR: "Author",
    EntityType.INSTITUTION: "Institution",
    EntityType.VENUE: "Venue",
    EntityType.TOPIC: "Topic",
    EntityType.SUBJECT_AREA: "SubjectArea",
    EntityType.SDG: "SDG",
}
ARTICLE_LINK_LABEL = "Paper"
LABEL_TO_TYPE = {label: etype for etype, label in LINK_LABELS.items()}


@dataclass(frozen=True)
class EntityRef:
    """A typed academic entity with a canonical id and display name."""

    id: str
    type: EntityType
    name: str
    aliases: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "type": self.type.value,
            "name": self.name,
            "aliases": list(self.aliases),
        }


@dataclass(frozen=True)
class ArticleRecord:
    """One article with embedded entity references and citation metadata."""

    id: str
    title: str
    year: int
    authors: tuple[EntityRef, ...]
    venue: EntityRef
    institutions: tuple[EntityRef, ...]
    topics: tuple[EntityRef, ...]
    subject_areas: tuple[EntityRef, ...]
    sdgs: tuple[EntityRef, ...]
    citation_count: int
    references: tuple[str, ...]

    def entities(self) -> Iterable[EntityRef]:
        yield from self.authors
        yield self.venue
        yield from self.institutions
        yield from self.topics
        yield from self.subject_areas
        yield from self.sdgs

    def entity_ids(self, etype: EntityType) -> tuple[str, ...]:
        return tuple(e.id for e in self.entities() if e.type is etype)


@dataclass(frozen=True)
class CorpusStats:
    """Article and per-entity-type counts reported after ingestion."""

    articles: int
    entities: Mapping[str, int]

    def to_json(self) -> dict:
        return {"articles": self.articles, "entities": dict(self.entities)}


class Corpus:
    """Write-once article store with entity table and inverted indices."""

    def __init__(self, articles: list[ArticleRecord], digest: str):
        self.articles: dict[str, ArticleRecord] = {}
        self.digest = digest
        entity_table: dict[tuple[EntityType, str], EntityRef] = {}
        index: dict[tuple[EntityType, str], set[str]] = defaultdict(set)
        by_year: dict[int, set[str]] = defaultdict(set)
        for art in articles:
            self.articles[art.id] = art
            by_year[art.year].add(art.id)
            for ent in art.entities():
                entity_table[(ent.type, ent.id)] = ent
                index[(ent.type, ent.id)].add(art.id)
        self._entity_table = entity_table
        self._index = {key: frozenset(ids) for key, ids in index.items()}
        self._by_year = {year: frozenset(ids) for year, ids in by_year.items()}
        counts: dict[str, int] = {t.value: 0 for t in EntityType}
        for etype, _ in entity_table:
            counts[etype.value] += 1
        self.stats = CorpusStats(articles=len(self.articles), entities=counts)

    def get_entity(self, entity_id: str, etype: EntityType) -> EntityRef | None:
        """Look up an entity by (id, type); never fabricates a match."""
        return self._entity_table.get((etype, entity_id))

    def entities_of_type(self, etype: EntityType) -> list[EntityRef]:
        refs = [e for (t, _), e in self._entity_table.items() if t is etype]
        refs.sort(key=lambda e: e.id)
        return refs

    def articles_for_entity(self, etype: EntityType, entity_id: str) -> frozenset[str]:
        return self._index.get((etype, entity_id), frozenset())

    def articles_in_year(self, year: int) -> frozenset[str]:
        return self._by_year.get(year, frozenset())

    def has_article(self, article_id: str) -> bool:
        return article_id in self.articles

    def __len__(self) -> int:
        return len(self.articles)


def _require(condition: bool, line_no: int, message: str) -> None:
    if not condition:
        raise IngestError(f"line {line_no}: {message}")


def _parse_entity(obj, etype: EntityType, line_no: int, where: str) -> _RawEntity:
    _require(isinstance(obj, dict), line_no, f"{where} must be an object")
    ent_id = obj.get("id")
    name = obj.get("name")
    _require(isinstance(ent_id, str) and ent_id != "", line_no, f"{where}.id must be a non-empty string")
    _require(isinstance(name, str) and name != "", line_no, f"{where}.name must be a non-empty string")
    aliases = obj.get("aliases", [])
    _require(
        isinstance(aliases, list) and all(isinstance(a, str) for a in aliases),
        line_no,
        f"{where}.aliases must be a list of strings",
    )
    return _RawEntity(id=ent_id, type=etype, name=name, aliases=tuple(aliases))


@dataclass
class _RawEntity:
    id: str
    type: EntityType
    name: str
    aliases: tuple[str, ...]


@dataclass
class _RawArticle:
    id: str
    title: str
    year: int
    authors: list[_RawEntity]
    venue: _RawEntity
    institutions: list[_RawEntity]
    topics: list[_RawEntity]
    subject_areas: list[_RawEntity]
    sdgs: list[_RawEntity]
    citation_count: int
    references: tuple[str, ...]
    line_no: int


_ENTITY_LIST_FIELDS = (
    ("authors", EntityType.AUTHOR),
    ("institutions", EntityType.INSTITUTION),
    ("topics", EntityType.TOPIC),
    ("subject_areas", EntityType.SUBJECT_AREA),
    ("sdgs", EntityType.SDG),
)


def _parse_line(line: str, line_no: int) -> _RawArticle:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise IngestError(f"line {line_no}: invalid JSON ({exc.msg})") from exc
    _require(isinstance(obj, dict), line_no, "article record must be a JSON object")

    art_id = obj.get("id")
    _require(isinstance(art_id, str) and art_id != "", line_no, "id must be a non-empty string")
    title = obj.get("title")
    _require(isinstance(title, str), line_no, "title must be a string")
    year = obj.get("year")
    _require(isinstance(year, int) and not isinstance(year, bool), line_no, "year must be an integer")
    _require(YEAR_MIN <= year <= YEAR_MAX, line_no, f"year {year} outside [{YEAR_MIN}, {YEAR_MAX}]")
    citations = obj.get("citation_count")
    _require(
        isinstance(citations, int) and not isinstance(citations, bool) and citations >= 0,
        line_no,
        "citation_count must be a non-negative integer",
    )

    lists: dict[str, list[_RawEntity]] = {}
    for field_name, etype in _ENTITY_LIST_FIELDS:
        raw = obj.get(field_name, [])
        _require(isinstance(raw, list), line_no, f"{field_name} must be a list")
        lists[field_name] = [
            _parse_entity(item, etype, line_no, f"{field_name}[{i}]") for i, item in enumerate(raw)
        ]
    venue = _parse_entity(obj.get("venue"), EntityType.VENUE, line_no, "venue")

    refs = obj.get("references", [])
    _require(
        isinstance(refs, list) and all(isinstance(r, str) for r in refs),
        line_no,
        "references must be a list of article id strings",
    )
    _require(art_id not in refs, line_no, "references must not include the article itself")

    return _RawArticle(
        id=art_id,
        title=title,
        year=year,
        authors=lists["authors"],
        venue=venue,
        institutions=lists["institutions"],
        topics=lists["topics"],
        subject_areas=lists["subject_areas"],
        sdgs=lists["sdgs"],
        citation_count=citations,
        references=tuple(refs),
        line_no=line_no,
    )


def ingest_corpus(path: str | Path) -> Corpus:
    """Load a JSONL corpus file into an immutable, fully indexed corpus.

    Ingestion is deterministic: the same file bytes always produce the
    same indices and stats. Two passes are made so every embedded entity
    reference can be replaced by one canonical, alias-merged record.
    """
    path = Path(path)
    data = path.read_bytes()
    digest = hashlib.sha256(data).hexdigest()

    raw_articles: list[_RawArticle] = []
    seen_ids: dict[str, int] = {}
    for line_no, line in enumerate(data.decode("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        raw = _parse_line(line, line_no)
        if raw.id in seen_ids:
            raise IngestError(
                f"line {line_no}: duplicate article id {raw.id!r} (first seen on line {seen_ids[raw.id]})"
            )
        seen_ids[raw.id] = line_no
        raw_articles.append(raw)

    dangling: list[str] = []
    for raw in raw_articles:
        for ref in raw.references:
            if ref not in seen_ids:
                dangling.append(f"{raw.id} -> {ref}")
    if dangling:
        raise IngestError("dangling article references: " + ", ".join(sorted(dangling)))

    # First pass over entities establishes the canonical record per
    # (type, id): first-seen name wins, later variants become aliases.
    names: dict[tuple[EntityType, str], str] = {}
    aliases: dict[tuple[EntityType, str], set[str]] = defaultdict(set)
    for raw in raw_articles:
        for ent in _iter_raw_entities(raw):
            key = (ent.type, ent.id)
            if key not in names:
                names[key] = ent.name
            elif ent.name != names[key]:
                aliases[key].add(ent.name)
            aliases[key].update(ent.aliases)

    canonical: dict[tuple[EntityType, str], EntityRef] = {}
    for key, name in names.items():
        alias_set = {a for a in aliases[key] if a != name}
        canonical[key] = EntityRef(id=key[1], type=key[0], name=name, aliases=tuple(sorted(alias_set)))

    def ref(ent: _RawEntity) -> EntityRef:
        return canonical[(ent.type, ent.id)]

    articles = [
        ArticleRecord(
            id=raw.id,
            title=raw.title,
            year=raw.year,
            authors=tuple(ref(e) for e in raw.authors),
            venue=ref(raw.venue),
            institutions=tuple(ref(e) for e in raw.institutions),
            topics=tuple(ref(e) for e in raw.topics),
            subject_areas=tuple(ref(e) for e in raw.subject_areas),
            sdgs=tuple(ref(e) for e in raw.sdgs),
            citation_count=raw.citation_count,
            references=raw.references,
        )
        for raw in raw_articles
    ]
    return Corpus(articles, digest=digest)


def _iter_raw_entities(raw: _RawArticle) -> Iterable[_RawEntity]:
    yield from raw.authors
    yield raw.venue
    yield from raw.institutions
    yield from raw.topics
    yield from raw.subject_areas
    yield from raw.sdgs
