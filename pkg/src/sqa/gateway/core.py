"""Provider-agnostic gateway: retries, limits, usage accounting.

Profiles map logical roles to providers. The pipeline distinguishes a
``planner_model`` profile (detailed planning) from a ``utility_model``
profile (everything else), so a stronger model can be used where plan
quality matters without naming any vendor in the core.

The gateway is shared state: callers must go through a session, which
records every call so a run can account for its own token usage, while
concurrency caps and token budgets are enforced per provider profile.
"""

from __future__ import annotations

import json
import logging
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from ..errors import (
    EmptyCompletionError,
    InvalidArgumentsError,
    InvalidToolError,
    ProviderUnavailableError,
    TransientProviderError,
)
from .http import HttpProvider
from .mock import MockProvider, MockReply
from .toolschema import validate_arguments
from .types import CallRecord, ChatRequest, Completion, Message, ToolInvocation, Usage

logger = logging.getLogger(__name__)

DEFAULT_RETRIES = 3
DEFAULT_BACKOFF_BASE_S = 0.25

PLANNER_PROFILE = "planner_model"
UTILITY_PROFILE = "utility_model"


def _estimate_tokens(text: str) -> int:
    # Crude but deterministic; only used when a reply does not state usage.
    return max(1, len(text) // 4) if text else 0


@dataclass
class ProviderProfile:
    name: str
    provider: object  # anything with .complete(ChatRequest) -> MockReply
    max_concurrency: int = 4
    tokens_per_minute: int | None = None

    def __post_init__(self):
        self._semaphore = threading.Semaphore(self.max_concurrency)
        self._budget_lock = threading.Lock()
        self._window_start = 0.0
        self._window_tokens = 0


class GatewaySession:
    """Per-run view of the gateway; accumulates call records."""

    def __init__(self, gateway: "Gateway"):
        self._gateway = gateway
        self._lock = threading.Lock()
        self.calls: list[CallRecord] = []

    def record(self, record: CallRecord) -> None:
        with self._lock:
            self.calls.append(record)

    @property
    def total_prompt_tokens(self) -> int:
        with self._lock:
            return sum(c.prompt_tokens for c in self.calls)

    @property
    def total_completion_tokens(self) -> int:
        with self._lock:
            return sum(c.completion_tokens for c in self.calls)

    def chat(self, request: ChatRequest, profile: str, stage: str = "chat") -> Completion:
        return self._gateway.chat(request, profile, stage=stage, session=self)

    def tool_call(self, request: ChatRequest, profile: str, stage: str = "tool_call") -> ToolInvocation:
        return self._gateway.tool_call(request, profile, stage=stage, session=self)


class Gateway:
    def __init__(
        self,
        profiles: dict[str, ProviderProfile],
        retries: int = DEFAULT_RETRIES,
        backoff_base_s: float = DEFAULT_BACKOFF_BASE_S,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.profiles = profiles
        self.retries = retries
        self.backoff_base_s = backoff_base_s
        self._clock = clock
        self._sleep = sleep

    def session(self) -> GatewaySession:
        return GatewaySession(self)

    def profile(self, name: str) -> ProviderProfile:
        if name not in self.profiles:
            raise KeyError(f"no provider profile named {name!r}")
        return self.profiles[name]

    def _respect_token_budget(self, profile: ProviderProfile, tokens: int) -> None:
        if profile.tokens_per_minute is None:
            return
        with profile._budget_lock:
            now = self._clock()
            if now - profile._window_start >= 60.0:
                profile._window_start = now
                profile._window_tokens = 0
            profile._window_tokens += tokens
            overflow = profile._window_tokens - profile.tokens_per_minute
            if overflow > 0:
                wait = 60.0 - (now - profile._window_start)
                if wait > 0:
                    logger.debug("token budget reached for %s; sleeping %.2fs", profile.name, wait)
                    self._sleep(wait)
                profile._window_start = self._clock()
                profile._window_tokens = 0

    def chat(
        self,
        request: ChatRequest,
        profile_name: str,
        stage: str = "chat",
        session: GatewaySession | None = None,
    ) -> Completion:
        profile = self.profile(profile_name)
        attempts = 0
        started = self._clock()
        with profile._semaphore:
            while True:
                try:
                    reply = profile.provider.complete(request)
                    break
                except TransientProviderError as exc:
                    attempts += 1
                    if attempts > self.retries:
                        raise ProviderUnavailableError(
                            f"profile {profile_name}: {self.retries} retries exhausted ({exc})"
                        ) from exc
                    self._sleep(self.backoff_base_s * (2 ** (attempts - 1)))

        scripted = getattr(profile.provider, "kind", "") == "mock"
        completion = self._to_completion(reply, request, attempts, started, scripted)
        if not completion.text and not completion.tool_invocations:
            raise EmptyCompletionError(f"profile {profile_name}: provider returned no output")
        self._respect_token_budget(
            profile, completion.usage.prompt_tokens + completion.usage.completion_tokens
        )
        if session is not None:
            session.record(
                CallRecord(
                    stage=stage,
                    profile=profile_name,
                    prompt_tokens=completion.usage.prompt_tokens,
                    completion_tokens=completion.usage.completion_tokens,
                    latency_ms=completion.latency_ms,
                    retries=completion.retries,
                )
            )
        return completion

    def _to_completion(
        self, reply: MockReply, request: ChatRequest, retries: int, started: float, scripted: bool
    ) -> Completion:
        # Scripted providers state their latency so replays stay
        # identical; live providers are measured.
        if scripted:
            latency_ms = reply.latency_ms
        else:
            latency_ms = int((self._clock() - started) * 1000)
        if reply.prompt_tokens is not None:
            prompt_tokens = reply.prompt_tokens
        else:
            prompt_tokens = _estimate_tokens(
                request.system_prompt + "".join(m.content for m in request.messages)
            )
        completion_tokens = (
            reply.completion_tokens
            if reply.completion_tokens is not None
            else _estimate_tokens(reply.text or json.dumps(reply.tool_calls))
        )
        invocations = tuple(
            ToolInvocation(name=c.get("name", ""), arguments=c.get("arguments", {}))
            for c in reply.tool_calls
        )
        return Completion(
            text=reply.text,
            tool_invocations=invocations,
            usage=Usage(prompt_tokens=prompt_tokens, completion_tokens=completion_tokens),
            latency_ms=latency_ms,
            retries=retries,
            truncated=reply.truncated,
        )

    def tool_call(
        self,
        request: ChatRequest,
        profile_name: str,
        stage: str = "tool_call",
        session: GatewaySession | None = None,
        coerce_numeric_strings: bool = True,
    ) -> ToolInvocation:
        """One validated tool invocation, with a single repair re-prompt.

        The reply must contain exactly one invocation naming an exposed
        tool with schema-conformant arguments. On any violation the
        validation errors are appended to the conversation and the model
        gets one more chance before the call fails.
        """
        if not request.tool_schemas:
            raise ValueError("tool_call requires at least one tool schema")
        schemas = {t.name: t for t in request.tool_schemas}

        completion = self.chat(request, profile_name, stage=stage, session=session)
        problems, invocation = self._check_invocation(completion, schemas, coerce_numeric_strings)
        if not problems:
            return invocation

        repair = request.with_messages(
            Message(
                role="assistant",
                content=json.dumps(
                    [
                        {"name": inv.name, "arguments": dict(inv.arguments)}
                        for inv in completion.tool_invocations
                    ]
                )
                if completion.tool_invocations
                else completion.text,
            ),
            Message(
                role="user",
                content=(
                    "The tool call was invalid:\n- "
                    + "\n- ".join(problems)
                    + "\nRespond again with exactly one valid tool call."
                ),
            ),
        )
        completion = self.chat(repair, profile_name, stage=f"{stage}_repair", session=session)
        problems, invocation = self._check_invocation(completion, schemas, coerce_numeric_strings)
        if not problems:
            return invocation
        if invocation is not None and invocation.name not in schemas:
            raise InvalidToolError(f"tool {invocation.name!r} is not exposed; " + "; ".join(problems))
        raise InvalidArgumentsError("; ".join(problems))

    @staticmethod
    def _check_invocation(
        completion: Completion,
        schemas: dict[str, object],
        coerce_numeric_strings: bool,
    ) -> tuple[list[str], ToolInvocation | None]:
        if len(completion.tool_invocations) != 1:
            return (
                [f"expected exactly one tool invocation, got {len(completion.tool_invocations)}"],
                completion.tool_invocations[0] if completion.tool_invocations else None,
            )
        invocation = completion.tool_invocations[0]
        schema = schemas.get(invocation.name)
        if schema is None:
            return ([f"unknown tool {invocation.name!r}"], invocation)
        errors = validate_arguments(
            schema.parameters,
            dict(invocation.arguments),
            coerce_numeric_strings=coerce_numeric_strings,
            allow_placeholders=True,
        )
        return (errors, invocation)
