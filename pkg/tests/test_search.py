from collections import defaultdict

import pytest

from sqa.corpus import EntityType
from sqa.errors import InvalidFacetError
from sqa.query import EntityIn, MatchNone, QueryBuilder, YearBetween, parse
from sqa.query.ast import And, evaluate
from sqa.query.build import FacetRequest


def test_nothing_matching_gives_empty_set(fixture_engine):
    result = fixture_engine.article_search(MatchNone(), limit=10)
    assert result.rows == () and result.total_matched == 0


def test_author_search_matches_linear_scan(fixture_corpus, fixture_engine):
    ast = EntityIn(EntityType.AUTHOR, "A001")
    result = fixture_engine.article_search(ast, limit=1000)
    brute = {
        art.id
        for art in fixture_corpus.articles.values()
        if "A001" in art.entity_ids(EntityType.AUTHOR)
    }
    assert {row.id for row in result.rows} == brute
    assert result.total_matched == len(brute)


def test_author_and_year_is_scan_intersection(fixture_corpus, fixture_engine):
    ast = And((EntityIn(EntityType.AUTHOR, "A002"), YearBetween(2018, 2021)))
    result = fixture_engine.article_search(ast, limit=1000)
    authors = {
        art.id
        for art in fixture_corpus.articles.values()
        if "A002" in art.entity_ids(EntityType.AUTHOR)
    }
    years = {art.id for art in fixture_corpus.articles.values() if 2018 <= art.year <= 2021}
    assert {row.id for row in result.rows} == authors & years


def test_results_satisfy_predicate_post_hoc(fixture_corpus, fixture_engine):
    ast = parse("(AUTHOR(A002) OR INSTITUTION(I01)) AND PUBYEAR(2016..2024)")
    result = fixture_engine.article_search(ast, limit=50)
    for row in result.rows:
        assert evaluate(ast, fixture_corpus.articles[row.id], fixture_corpus)


def test_ordering_is_total_and_stable(fixture_engine):
    ast = EntityIn(EntityType.SUBJECT_AREA, "SA01")
    first = fixture_engine.article_search(ast, limit=100, metrics=("citation_count",))
    second = fixture_engine.article_search(ast, limit=100, metrics=("citation_count",))
    assert first == second
    citations = [row.metrics["citation_count"] for row in first.rows]
    assert citations == sorted(citations, reverse=True)
    for left, right in zip(first.rows, first.rows[1:]):
        if left.metrics["citation_count"] == right.metrics["citation_count"]:
            assert left.id < right.id


def test_limit_and_metrics_attachment(fixture_engine):
    ast = EntityIn(EntityType.INSTITUTION, "I01")
    result = fixture_engine.article_search(ast, limit=3, metrics=("citation_count", "fwci"))
    assert len(result.rows) == 3
    for row in result.rows:
        assert "citation_count" in row.metrics and "fwci" in row.metrics


def test_empty_facet_on_empty_match(fixture_engine):
    result = fixture_engine.faceted_article_search(
        MatchNone(), FacetRequest(facet_type=EntityType.AUTHOR)
    )
    assert result.rows == ()


def test_facet_matches_brute_force_group_by(fixture_corpus, fixture_engine):
    ast = EntityIn(EntityType.AUTHOR, "A002")
    facet = FacetRequest(facet_type=EntityType.AUTHOR, top_n=100)
    result = fixture_engine.faceted_article_search(ast, facet)

    counts = defaultdict(set)
    for art in fixture_corpus.articles.values():
        if "A002" in art.entity_ids(EntityType.AUTHOR):
            for author in art.authors:
                counts[author.id].add(art.id)
    totals = {
        aid: sum(fixture_corpus.articles[p].citation_count for p in arts)
        for aid, arts in counts.items()
    }
    expected = sorted(counts, key=lambda a: (-len(counts[a]), -totals[a], a))
    assert [row.id for row in result.rows] == expected
    for row in result.rows:
        assert row.document_count == len(counts[row.id])
        assert row.metrics["total_citations"] == totals[row.id]


def test_facet_row_shape_mirrors_metric_columns(fixture_engine):
    ast = EntityIn(EntityType.TOPIC, "T01")
    result = fixture_engine.faceted_article_search(
        ast, FacetRequest(facet_type=EntityType.SDG, top_n=5)
    )
    assert result.rows
    for row in result.rows:
        payload = row.to_json()
        assert set(payload) == {"id", "name", "document_count", "total_citations", "average_fwci"}


def test_facet_document_counts_cover_matches(fixture_corpus, fixture_engine):
    # Every article lists at least one author, so summed per-author
    # document counts must cover the match set at least once.
    ast = EntityIn(EntityType.INSTITUTION, "I01")
    result = fixture_engine.faceted_article_search(
        ast, FacetRequest(facet_type=EntityType.AUTHOR, top_n=10_000)
    )
    assert sum(row.document_count for row in result.rows) >= result.total_matched


def test_facet_on_article_type_rejected(fixture_engine):
    with pytest.raises(InvalidFacetError):
        fixture_engine.faceted_article_search(
            MatchNone(), FacetRequest(facet_type="ARTICLE")
        )
