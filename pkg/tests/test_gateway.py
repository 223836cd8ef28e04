import json

import httpx
import pytest

from sqa.errors import (
    EmptyCompletionError,
    InvalidArgumentsError,
    InvalidToolError,
    MockScriptMiss,
    ProviderUnavailableError,
)
from sqa.gateway import (
    PLANNING_TOOLS,
    ChatRequest,
    Gateway,
    HttpProvider,
    Message,
    MockProvider,
    MockReply,
    ProviderProfile,
    fingerprint,
    validate_arguments,
)
from sqa.gateway.toolschema import ARTICLE_SEARCH_SCHEMA, FACETED_SEARCH_SCHEMA


def make_gateway(provider, **kwargs):
    profile = ProviderProfile(name="utility_model", provider=provider)
    return Gateway({"utility_model": profile}, backoff_base_s=0.0, **kwargs)


def req(content, tools=(), response_format="free_text"):
    return ChatRequest(
        system_prompt="You are a test assistant.",
        messages=(Message(role="user", content=content),),
        tool_schemas=tuple(tools),
        response_format=response_format,
    )


def test_scripted_reply_is_returned_exactly():
    request = req("hello")
    mock = MockProvider()
    mock.add_response(request, MockReply(text="scripted reply R", completion_tokens=3, prompt_tokens=5))
    gateway = make_gateway(mock)
    completion = gateway.chat(request, "utility_model")
    assert completion.text == "scripted reply R"
    assert completion.usage.prompt_tokens == 5
    assert completion.usage.completion_tokens == 3


def test_fail_twice_then_succeed_counts_retries():
    request = req("flaky")
    mock = MockProvider()
    mock.add_response(request, MockReply(text="ok"))
    mock.fail_times(request, 2)
    gateway = make_gateway(mock)
    session = gateway.session()
    completion = session.chat(request, "utility_model", stage="test")
    assert completion.text == "ok"
    assert completion.retries == 2
    assert session.calls[0].retries == 2


def test_retries_exhausted_is_provider_unavailable():
    request = req("always down")
    mock = MockProvider()
    mock.add_response(request, MockReply(text="never seen"))
    mock.fail_times(request, 99)
    gateway = make_gateway(mock, retries=3)
    with pytest.raises(ProviderUnavailableError):
        gateway.chat(request, "utility_model")


def test_truncation_flag_passes_through():
    request = req("long")
    mock = MockProvider()
    mock.add_response(request, MockReply(text="cut off", truncated=True))
    completion = make_gateway(mock).chat(request, "utility_model")
    assert completion.truncated


def test_empty_output_is_an_error():
    request = req("empty")
    mock = MockProvider()
    mock.add_response(request, MockReply(text=""))
    with pytest.raises(EmptyCompletionError):
        make_gateway(mock).chat(request, "utility_model")


def test_unscripted_request_is_a_script_miss():
    with pytest.raises(MockScriptMiss):
        make_gateway(MockProvider()).chat(req("never scripted"), "utility_model")


def test_usage_totals_accumulate_in_session():
    mock = MockProvider()
    gateway = make_gateway(mock)
    session = gateway.session()
    for i in range(3):
        request = req(f"msg {i}")
        mock.add_response(request, MockReply(text="x", prompt_tokens=10, completion_tokens=i))
        session.chat(request, "utility_model")
    assert session.total_prompt_tokens == 30
    assert session.total_completion_tokens == 0 + 1 + 2
    assert len(session.calls) == 3


def test_script_file_round_trip(tmp_path):
    request = req("persisted")
    mock = MockProvider()
    fp = mock.add_response(request, MockReply(text="from file", latency_ms=7))
    mock.fail_times("deadbeef", 1)
    path = tmp_path / "script.json"
    mock.dump_script(path)

    loaded = MockProvider.from_script(path)
    assert loaded.complete(request).text == "from file"
    obj = json.loads(path.read_text())
    assert fp in obj["responses"]
    assert obj["failures"] == {"deadbeef": 1}


def test_tool_call_valid_invocation():
    args = {"facet_type": "AUTHOR", "filters": [{"type": "AUTHOR", "id": "A1"}], "top_n": 5}
    request = req("facet please", tools=PLANNING_TOOLS)
    mock = MockProvider()
    mock.add_response(
        request,
        MockReply(tool_calls=[{"name": "faceted_article_search", "arguments": args}]),
    )
    invocation = make_gateway(mock).tool_call(request, "utility_model")
    assert invocation.name == "faceted_article_search"
    assert invocation.arguments["top_n"] == 5


def test_unknown_tool_fails_after_repair():
    request = req("bad tool", tools=PLANNING_TOOLS)
    mock = MockProvider()
    mock.add_response(
        request, MockReply(tool_calls=[{"name": "entity_lookup", "arguments": {}}])
    )
    # The repair re-prompt is also answered with the bad tool.
    mock.add_rule(
        lambda r: any("tool call was invalid" in m.content for m in r.messages),
        MockReply(tool_calls=[{"name": "entity_lookup", "arguments": {}}]),
    )
    with pytest.raises(InvalidToolError):
        make_gateway(mock).tool_call(request, "utility_model")


def test_word_year_fails_after_repair():
    bad_args = {"filters": [], "year_range": {"min": "twenty-twenty", "max": 2024}}
    request = req("word year", tools=PLANNING_TOOLS)
    mock = MockProvider()
    mock.add_response(
        request, MockReply(tool_calls=[{"name": "article_search", "arguments": bad_args}])
    )
    mock.add_rule(
        lambda r: any("tool call was invalid" in m.content for m in r.messages),
        MockReply(tool_calls=[{"name": "article_search", "arguments": bad_args}]),
    )
    with pytest.raises(InvalidArgumentsError):
        make_gateway(mock).tool_call(request, "utility_model")


def test_repair_prompt_can_fix_the_call():
    request = req("fixable", tools=PLANNING_TOOLS)
    good = {"filters": [{"type": "AUTHOR", "id": "A1"}]}
    mock = MockProvider()
    mock.add_response(
        request, MockReply(tool_calls=[{"name": "article_search", "arguments": {"filters": "#"}}])
    )
    mock.add_rule(
        lambda r: any("tool call was invalid" in m.content for m in r.messages),
        MockReply(tool_calls=[{"name": "article_search", "arguments": good}]),
    )
    invocation = make_gateway(mock).tool_call(request, "utility_model")
    assert invocation.arguments == good


def test_numeric_string_year_is_tolerated_in_lenient_validation():
    args = {"filters": [], "year_range": {"min": "2020", "max": "2023"}}
    errors = validate_arguments(
        ARTICLE_SEARCH_SCHEMA.parameters, args, coerce_numeric_strings=True
    )
    assert errors == []
    errors_strict = validate_arguments(
        ARTICLE_SEARCH_SCHEMA.parameters, args, coerce_numeric_strings=False
    )
    assert errors_strict


def test_placeholders_pass_schema_validation():
    args = {
        "filters": [{"type": "AUTHOR", "id": "$step1.top_entity_id"}],
        "article_ids": "$step1.article_ids",
    }
    errors = validate_arguments(
        ARTICLE_SEARCH_SCHEMA.parameters, args, allow_placeholders=True
    )
    assert errors == []


def test_facet_schema_requires_facet_type():
    errors = validate_arguments(FACETED_SEARCH_SCHEMA.parameters, {"top_n": 3})
    assert any("facet_type" in e for e in errors)


def test_fingerprint_depends_only_on_system_and_messages():
    r1 = req("same", tools=PLANNING_TOOLS)
    r2 = req("same")
    assert fingerprint(r1) == fingerprint(r2)
    assert fingerprint(req("other")) != fingerprint(r1)


def test_http_provider_parses_openai_shape():
    def handler(request: httpx.Request) -> httpx.Response:
        body = json.loads(request.content)
        assert body["model"] == "test-model"
        return httpx.Response(
            200,
            json={
                "choices": [
                    {
                        "message": {
                            "content": "hi",
                            "tool_calls": [
                                {
                                    "function": {
                                        "name": "article_search",
                                        "arguments": json.dumps({"filters": []}),
                                    }
                                }
                            ],
                        },
                        "finish_reason": "stop",
                    }
                ],
                "usage": {"prompt_tokens": 11, "completion_tokens": 4},
            },
        )

    provider = HttpProvider(
        base_url="https://api.test/v1",
        model_id="test-model",
        transport=httpx.MockTransport(handler),
    )
    reply = provider.complete(req("api", tools=PLANNING_TOOLS))
    assert reply.text == "hi"
    assert reply.tool_calls[0]["name"] == "article_search"
    assert reply.prompt_tokens == 11


def test_chat_request_invariants():
    with pytest.raises(ValueError):
        ChatRequest(system_prompt="s", messages=())
    with pytest.raises(ValueError):
        req_bad = ChatRequest(
            system_prompt="s",
            messages=(Message(role="user", content="x"),),
            temperature=3.0,
        )


def test_token_budget_sleeps_until_window_rollover():
    clock_now = [0.0]
    sleeps = []

    def fake_clock():
        return clock_now[0]

    def fake_sleep(seconds):
        sleeps.append(seconds)
        clock_now[0] += seconds

    mock = MockProvider()
    profile = ProviderProfile(
        name="utility_model", provider=mock, tokens_per_minute=100
    )
    gateway = Gateway(
        {"utility_model": profile}, backoff_base_s=0.0, clock=fake_clock, sleep=fake_sleep
    )
    for i in range(3):
        request = req(f"budget {i}")
        mock.add_response(request, MockReply(text="x", prompt_tokens=40, completion_tokens=20))
        gateway.chat(request, "utility_model")
    # 3 calls x 60 tokens = 180 > 100: the budget forces at least one
    # sleep to the end of the minute window.
    assert sleeps and all(0 < s <= 60.0 for s in sleeps)
