import json
from pathlib import Path

import pytest

from sqa.corpus import ingest_corpus
from sqa.metrics import compute_metrics
from sqa.query.build import QueryBuilder
from sqa.resolver import EntityResolver
from sqa.search import SearchEngine

DATA_DIR = Path(__file__).parent / "data"
FIXTURE_PATH = DATA_DIR / "corpus_500.jsonl"


def write_corpus(tmp_path, articles, name="corpus.jsonl"):
    """Write a list of article dicts as a JSONL corpus file."""
    path = tmp_path / name
    with path.open("w", encoding="utf-8") as fh:
        for art in articles:
            fh.write(json.dumps(art) + "\n")
    return path


def article(
    art_id,
    *,
    title=None,
    year=2020,
    authors=(),
    venue=("V1", "Journal One"),
    institutions=(),
    topics=(),
    subject_areas=(),
    sdgs=(),
    citation_count=0,
    references=(),
):
    """Compact article-dict builder; entities given as (id, name) pairs."""

    def ents(pairs):
        return [{"id": i, "name": n} for i, n in pairs]

    return {
        "id": art_id,
        "title": title or f"Title of {art_id}",
        "year": year,
        "authors": ents(authors),
        "venue": {"id": venue[0], "name": venue[1]},
        "institutions": ents(institutions),
        "topics": ents(topics),
        "subject_areas": ents(subject_areas),
        "sdgs": ents(sdgs),
        "citation_count": citation_count,
        "references": list(references),
    }


@pytest.fixture(scope="session")
def fixture_corpus():
    return ingest_corpus(FIXTURE_PATH)


@pytest.fixture(scope="session")
def fixture_metrics(fixture_corpus):
    return compute_metrics(fixture_corpus)


@pytest.fixture(scope="session")
def fixture_engine(fixture_corpus, fixture_metrics):
    return SearchEngine(fixture_corpus, fixture_metrics)


@pytest.fixture(scope="session")
def fixture_resolver(fixture_corpus):
    return EntityResolver(fixture_corpus)


@pytest.fixture(scope="session")
def fixture_builder(fixture_corpus, fixture_resolver):
    return QueryBuilder(fixture_corpus, fixture_resolver)
