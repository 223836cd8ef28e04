"""Entity name resolution over the corpus entity table.

Matching is deterministic string similarity: Jaccard overlap of character
trigram sets over aggressively normalized strings. An exact match on a
name or alias forces a score of 1.0, so exact hits always rank first.
There is no semantic fallback; a no-match result is surfaced to the
caller instead of being silently relaxed.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass

from .corpus import Corpus, EntityRef, EntityType
from .errors import ResolutionError

DEFAULT_THRESHOLD = 0.4
DEFAULT_TOP_K = 5


def normalize(text: str) -> str:
    """Lowercase, fold diacritics, strip punctuation, collapse whitespace."""
    decomposed = unicodedata.normalize("NFKD", text)
    folded = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    cleaned = "".join(ch if ch.isalnum() else " " for ch in folded.casefold())
    return " ".join(cleaned.split())


def trigrams(text: str) -> frozenset[str]:
    return frozenset(text[i : i + 3] for i in range(len(text) - 2))


def similarity(a: str, b: str) -> float:
    """Trigram Jaccard similarity in [0, 1] of two normalized strings.

    Strings shorter than three characters carry no trigram signal and are
    compared by exact (normalized) equality instead.
    """
    na, nb = normalize(a), normalize(b)
    if len(na) < 3 or len(nb) < 3:
        return 1.0 if na == nb and na != "" else 0.0
    ta, tb = trigrams(na), trigrams(nb)
    union = len(ta | tb)
    return len(ta & tb) / union if union else 0.0


@dataclass(frozen=True)
class RankedCandidates:
    query_name: str
    type: EntityType
    candidates: tuple[tuple[EntityRef, float], ...]
    threshold: float

    @property
    def best(self) -> EntityRef | None:
        return self.candidates[0][0] if self.candidates else None

    def is_no_match(self) -> bool:
        return not self.candidates

    def to_json(self) -> dict:
        return {
            "query_name": self.query_name,
            "type": self.type.value,
            "threshold": self.threshold,
            "candidates": [
                {"entity": ref.to_json(), "score": score} for ref, score in self.candidates
            ],
        }


class EntityResolver:
    """Scores every entity of a type against a surface name."""

    def __init__(self, corpus: Corpus, threshold: float = DEFAULT_THRESHOLD):
        self.corpus = corpus
        self.threshold = threshold
        # Normalized name variants precomputed once per entity.
        self._variants: dict[EntityType, list[tuple[EntityRef, list[str]]]] = {}
        for etype in EntityType:
            rows = []
            for ref in corpus.entities_of_type(etype):
                forms = [normalize(ref.name)] + [normalize(a) for a in ref.aliases]
                rows.append((ref, [f for f in forms if f]))
            self._variants[etype] = rows

    def resolve(
        self, name: str, etype: EntityType, top_k: int = DEFAULT_TOP_K
    ) -> RankedCandidates:
        if top_k < 1:
            raise ResolutionError(f"top_k must be >= 1, got {top_k}")
        query = normalize(name)
        if not query:
            raise ResolutionError(f"entity name {name!r} is empty after normalization")

        scored: list[tuple[EntityRef, float]] = []
        for ref, forms in self._variants[etype]:
            if query in forms:
                scored.append((ref, 1.0))
                continue
            best = max((similarity(name, form) for form in forms), default=0.0)
            if best >= self.threshold:
                scored.append((ref, best))
        scored.sort(key=lambda pair: (-pair[1], pair[0].id))
        return RankedCandidates(
            query_name=name,
            type=etype,
            candidates=tuple(scored[:top_k]),
            threshold=self.threshold,
        )
