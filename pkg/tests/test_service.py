import json
from collections import Counter

import pytest
from fastapi.testclient import TestClient

from sqa.corpus import EntityType
from sqa.service import Pipeline
from sqa.webapp import create_app

from miniqa import MINI_SUITE, minisuite_gateway
from stage_mock import StageMock, gateway_for

PARK_Q = "Mention the co-authors of Chang Yun Park."


@pytest.fixture()
def pipeline(fixture_corpus):
    return Pipeline(fixture_corpus, minisuite_gateway())


def test_workflow_answer_collects_coauthors(pipeline, fixture_corpus):
    envelope = pipeline.answer(PARK_Q, "workflow")
    assert envelope.mode == "workflow"
    # Brute-force co-authorship scan over the fixture.
    expected = set()
    for art in fixture_corpus.articles.values():
        ids = art.entity_ids(EntityType.AUTHOR)
        if "A001" in ids:
            expected.update(i for i in ids if i != "A001")
    author_refs = {r.id for r in envelope.references if r.type == "Author"}
    assert expected <= author_refs
    assert expected == {"A010", "A011", "A012"}
    trace = pipeline.get_trace(envelope.run_id)
    assert trace is not None
    assert all(r.status == "ok" for r in trace.results.values())


def test_envelope_token_totals_match_usage(pipeline):
    envelope = pipeline.answer(PARK_Q, "workflow")
    trace = pipeline.get_trace(envelope.run_id)
    assert envelope.prompt_tokens == sum(u.prompt_tokens for u in trace.usage)
    assert envelope.completion_tokens == sum(u.completion_tokens for u in trace.usage)


def test_empty_question_rejected(pipeline):
    with pytest.raises(ValueError):
        pipeline.answer("   ", "workflow")
    with pytest.raises(ValueError):
        pipeline.answer(PARK_Q, "reflect")


def test_baseline_has_no_plan_and_no_charts(pipeline):
    envelope = pipeline.answer(PARK_Q, "baseline")
    assert envelope.mode == "baseline"
    assert envelope.charts == []
    trace = pipeline.get_trace(envelope.run_id)
    assert trace.plan is None


def test_unresolvable_entity_degrades_to_disclaimer(fixture_corpus):
    mock = StageMock().on(
        "hlpm",
        {"tags": [{"text": "Zzyzx Institute", "type": "INSTITUTION"}], "outline": ["Find it"]},
    )
    pipeline = Pipeline(fixture_corpus, gateway_for(mock))
    envelope = pipeline.answer("Papers from Zzyzx Institute", "workflow")
    assert "No data" in envelope.answer_markdown
    assert any("Zzyzx Institute" in w for w in envelope.warnings)


def test_invalid_plan_degrades_to_disclaimer(fixture_corpus):
    cyclic = {
        "steps": [
            {"id": 1, "tool": "article_search", "subtask": "a", "depends_on": [2], "params": {}},
            {"id": 2, "tool": "article_search", "subtask": "b", "depends_on": [1], "params": {}},
        ]
    }
    mock = StageMock()
    mock.on("hlpm", {"tags": [], "outline": ["Do something"]})
    mock.on("dpm", cyclic)
    pipeline = Pipeline(fixture_corpus, gateway_for(mock))
    envelope = pipeline.answer("Anything at all", "workflow")
    assert "No data" in envelope.answer_markdown
    assert any("detailed planning failed" in w for w in envelope.warnings)


def test_run_id_is_content_addressed(pipeline):
    first = pipeline.answer(PARK_Q, "workflow")
    second = pipeline.answer(PARK_Q, "workflow")
    assert first.run_id == second.run_id
    other_mode = pipeline.answer(PARK_Q, "baseline")
    assert other_mode.run_id != first.run_id


def test_answer_is_deterministic_with_mock(pipeline):
    first = pipeline.answer(PARK_Q, "workflow").to_json(include_timings=False)
    second = pipeline.answer(PARK_Q, "workflow").to_json(include_timings=False)
    assert json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)


def test_chart_question_produces_validated_specs(pipeline):
    envelope = pipeline.answer("Which SDG has the most documents related to Sustainable Energy?", "workflow")
    assert envelope.charts, envelope.warnings
    trace = pipeline.get_trace(envelope.run_id)
    from sqa.visualizer import validate_chart_spec

    for spec in envelope.charts:
        assert validate_chart_spec(spec, trace) == []


def test_every_minisuite_question_has_a_distinct_form_mix():
    forms = Counter(q.form for q in MINI_SUITE)
    assert sum(forms.values()) == 20
    assert set(forms) == {
        "FACT_BASED", "SINGLE_INTENT", "UNION", "MULTIPLE_INTENT", "COMPARATIVE_SUPERLATIVE",
    }
    assert min(forms.values()) >= 3


# ---------------------------------------------------------------------------
# HTTP API


@pytest.fixture()
def client(pipeline):
    return TestClient(create_app(pipeline))


def test_healthz(client):
    body = client.get("/healthz").json()
    assert body["status"] == "ok"
    assert body["corpus"]["articles"] == 500


def test_answer_endpoint_and_trace_endpoint(client):
    reply = client.post("/v1/answer", json={"question": PARK_Q, "mode": "workflow"})
    assert reply.status_code == 200
    body = reply.json()
    assert body["mode"] == "workflow"
    assert body["references"]

    trace_reply = client.get(f"/v1/runs/{body['run_id']}/trace")
    assert trace_reply.status_code == 200
    trace_body = trace_reply.json()
    assert trace_body["mode"] == "workflow"
    assert trace_body["plan"] is not None
    assert set(trace_body["results"]) == {"1", "2"}

    assert client.get("/v1/runs/nope/trace").status_code == 404


def test_answer_endpoint_rejects_empty_question(client):
    reply = client.post("/v1/answer", json={"question": "  ", "mode": "workflow"})
    assert reply.status_code == 400


def test_resolve_endpoint(client):
    reply = client.get(
        "/v1/entities/resolve", params={"q": "Univ of Oxford", "type": "INSTITUTION", "k": 3}
    )
    assert reply.status_code == 200
    body = reply.json()
    assert body["candidates"][0]["entity"]["id"] == "I01"
    assert client.get("/v1/entities/resolve", params={"q": "x", "type": "NOPE"}).status_code == 400


def test_provider_unavailable_maps_to_503(fixture_corpus):
    from sqa.gateway import MockProvider

    class AlwaysDown(MockProvider):
        def complete(self, request):
            from sqa.errors import TransientProviderError

            raise TransientProviderError("down")

    pipeline = Pipeline(fixture_corpus, gateway_for(AlwaysDown()))
    client = TestClient(create_app(pipeline))
    reply = client.post("/v1/answer", json={"question": PARK_Q, "mode": "workflow"})
    assert reply.status_code == 503
