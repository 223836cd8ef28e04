from collections import defaultdict

from sqa.corpus import EntityType, ingest_corpus
from sqa.metrics import compute_metrics

from conftest import article, write_corpus


def _mini(tmp_path, citation_counts, year=2020, sa=("SA1", "Area One")):
    arts = [
        article(f"P{i}", year=year, citation_count=c, subject_areas=[sa])
        for i, c in enumerate(citation_counts, start=1)
    ]
    corpus = ingest_corpus(write_corpus(tmp_path, arts))
    return corpus, compute_metrics(corpus)


def test_single_article_bucket_is_exactly_one(tmp_path):
    _, metrics = _mini(tmp_path, [7])
    assert metrics.fwci_of("P1") == 1.0


def test_hand_computed_bucket(tmp_path):
    # Bucket mean is 4, so citations [2, 4, 6] map to [0.5, 1.0, 1.5].
    _, metrics = _mini(tmp_path, [2, 4, 6])
    assert metrics.fwci_of("P1") == 0.5
    assert metrics.fwci_of("P2") == 1.0
    assert metrics.fwci_of("P3") == 1.5


def test_all_zero_bucket_gives_undefined(tmp_path):
    _, metrics = _mini(tmp_path, [0, 0, 0])
    for art_id in ("P1", "P2", "P3"):
        assert metrics.fwci_of(art_id) is None


def test_no_subject_area_gives_undefined(tmp_path):
    corpus = ingest_corpus(write_corpus(tmp_path, [article("P1", citation_count=5)]))
    metrics = compute_metrics(corpus)
    assert metrics.fwci_of("P1") is None


def test_multi_bucket_article_averages_ratios(tmp_path):
    arts = [
        article("P1", citation_count=3, subject_areas=[("SA1", "One"), ("SA2", "Two")]),
        article("P2", citation_count=1, subject_areas=[("SA1", "One")]),
        article("P3", citation_count=5, subject_areas=[("SA2", "Two")]),
    ]
    corpus = ingest_corpus(write_corpus(tmp_path, arts))
    metrics = compute_metrics(corpus)
    # Bucket SA1 mean (3+1)/2 = 2, SA2 mean (3+5)/2 = 4.
    assert metrics.fwci_of("P1") == (3 / 2 + 3 / 4) / 2
    assert metrics.fwci_of("P2") == 0.5
    assert metrics.fwci_of("P3") == 1.25


def test_fixture_bucket_means_are_one(fixture_corpus, fixture_metrics):
    buckets = defaultdict(list)
    for art in fixture_corpus.articles.values():
        value = fixture_metrics.fwci_of(art.id)
        for sa in art.subject_areas:
            if value is not None:
                buckets[(sa.id, art.year)].append(value)
    assert buckets
    for values in buckets.values():
        assert abs(sum(values) / len(values) - 1.0) <= 1e-9


def test_entity_aggregates_match_brute_force(fixture_corpus, fixture_metrics):
    for etype in (EntityType.AUTHOR, EntityType.VENUE, EntityType.SDG):
        for ref in fixture_corpus.entities_of_type(etype):
            agg = fixture_metrics.aggregates_for(etype, ref.id)
            member_ids = fixture_corpus.articles_for_entity(etype, ref.id)
            assert agg.document_count == len(member_ids)
            assert agg.total_citations == sum(
                fixture_corpus.articles[a].citation_count for a in member_ids
            )
