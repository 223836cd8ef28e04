"""Deterministic scripted provider, plus helpers for recording scripts.

A mock script is a JSON object of the form:

    {
      "responses": {"<fingerprint>": {"text": "...", "tool_calls": [...],
                                       "prompt_tokens": 12, "completion_tokens": 34,
                                       "latency_ms": 0, "truncated": false}},
      "failures": {"<fingerprint>": 2}
    }

where the fingerprint is the stable hash of system prompt plus messages
(see ``sqa.gateway.types.fingerprint``) and a failure count makes the
provider raise that many transient errors before answering. Tests may
also register match rules programmatically instead of precomputing
fingerprints.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from ..errors import MockScriptMiss, TransientProviderError
from .types import ChatRequest, fingerprint


@dataclass
class MockReply:
    text: str = ""
    tool_calls: list[dict] = field(default_factory=list)
    prompt_tokens: int | None = None
    completion_tokens: int | None = None
    latency_ms: int = 0
    truncated: bool = False

    def to_json(self) -> dict:
        return {
            "text": self.text,
            "tool_calls": self.tool_calls,
            "prompt_tokens": self.prompt_tokens,
            "completion_tokens": self.completion_tokens,
            "latency_ms": self.latency_ms,
            "truncated": self.truncated,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MockReply":
        return cls(
            text=obj.get("text", ""),
            tool_calls=list(obj.get("tool_calls", [])),
            prompt_tokens=obj.get("prompt_tokens"),
            completion_tokens=obj.get("completion_tokens"),
            latency_ms=obj.get("latency_ms", 0),
            truncated=obj.get("truncated", False),
        )


Rule = tuple[Callable[[ChatRequest], bool], Callable[[ChatRequest], MockReply]]


class MockProvider:
    """Answers requests from a fingerprint map and ordered match rules."""

    kind = "mock"

    def __init__(self, responses: dict[str, MockReply] | None = None, name: str = "mock"):
        self.name = name
        self.responses: dict[str, MockReply] = dict(responses or {})
        self.failures: dict[str, int] = {}
        self.rules: list[Rule] = []
        self._lock = threading.Lock()

    @classmethod
    def from_script(cls, path: str | Path, name: str = "mock") -> "MockProvider":
        obj = json.loads(Path(path).read_text("utf-8"))
        provider = cls(
            {fp: MockReply.from_json(reply) for fp, reply in obj.get("responses", {}).items()},
            name=name,
        )
        provider.failures = {fp: int(n) for fp, n in obj.get("failures", {}).items()}
        return provider

    def dump_script(self, path: str | Path) -> None:
        obj = {
            "responses": {fp: reply.to_json() for fp, reply in self.responses.items()},
            "failures": dict(self.failures),
        }
        Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True), "utf-8")

    def add_response(self, request_or_fp: ChatRequest | str, reply: MockReply) -> str:
        fp = request_or_fp if isinstance(request_or_fp, str) else fingerprint(request_or_fp)
        self.responses[fp] = reply
        return fp

    def add_rule(
        self,
        matcher: Callable[[ChatRequest], bool],
        reply: MockReply | Callable[[ChatRequest], MockReply],
    ) -> None:
        produce = reply if callable(reply) else (lambda _req, _r=reply: _r)
        self.rules.append((matcher, produce))

    def fail_times(self, request_or_fp: ChatRequest | str, count: int) -> None:
        fp = request_or_fp if isinstance(request_or_fp, str) else fingerprint(request_or_fp)
        self.failures[fp] = count

    def complete(self, request: ChatRequest) -> MockReply:
        fp = fingerprint(request)
        with self._lock:
            remaining = self.failures.get(fp, 0)
            if remaining > 0:
                self.failures[fp] = remaining - 1
                raise TransientProviderError(f"scripted transient failure for {fp[:12]}")
        if fp in self.responses:
            return self.responses[fp]
        for matcher, produce in self.rules:
            if matcher(request):
                return produce(request)
        raise MockScriptMiss(
            f"no scripted reply for fingerprint {fp} "
            f"(system prompt starts {request.system_prompt[:60]!r}, "
            f"last message starts {request.messages[-1].content[:80]!r})"
        )


class SequenceMock:
    """Answers requests strictly in order; used to record replayable scripts."""

    kind = "mock"

    def __init__(self, replies: list[MockReply], name: str = "sequence-mock"):
        self.name = name
        self._replies = list(replies)
        self._served: list[tuple[str, MockReply]] = []
        self._lock = threading.Lock()

    def complete(self, request: ChatRequest) -> MockReply:
        with self._lock:
            if not self._replies:
                raise MockScriptMiss(f"{self.name}: reply sequence exhausted")
            reply = self._replies.pop(0)
            self._served.append((fingerprint(request), reply))
        return reply

    @property
    def served(self) -> list[tuple[str, MockReply]]:
        return list(self._served)

    def remaining(self) -> int:
        return len(self._replies)


class RecordingProvider:
    """Wraps a provider and records fingerprint -> reply for script dumps."""

    kind = "mock"

    def __init__(self, inner):
        self.inner = inner
        self.name = getattr(inner, "name", "recorded")
        self.recorded: dict[str, MockReply] = {}
        self._lock = threading.Lock()

    def complete(self, request: ChatRequest) -> MockReply:
        reply = self.inner.complete(request)
        with self._lock:
            self.recorded[fingerprint(request)] = reply
        return reply

    def dump(self) -> dict:
        return {
            "responses": {fp: reply.to_json() for fp, reply in self.recorded.items()},
            "failures": {},
        }


def merge_scripts(*scripts: dict) -> dict:
    merged: dict = {"responses": {}, "failures": {}}
    for script in scripts:
        merged["responses"].update(script.get("responses", {}))
        merged["failures"].update(script.get("failures", {}))
    return merged
