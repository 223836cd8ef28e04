"""Request/response types shared by every provider implementation."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Literal, Mapping

Role = Literal["user", "assistant", "tool"]


@dataclass(frozen=True)
class Message:
    role: Role
    content: str


@dataclass(frozen=True)
class ToolSchema:
    """A named tool contract: JSON-schema-style parameter description."""

    name: str
    description: str
    parameters: Mapping[str, Any]


@dataclass(frozen=True)
class ChatRequest:
    system_prompt: str
    messages: tuple[Message, ...]
    tool_schemas: tuple[ToolSchema, ...] = ()
    response_format: Literal["free_text", "json_object"] = "free_text"
    temperature: float = 0.0  # pipeline default everywhere
    max_tokens: int = 2048

    def __post_init__(self):
        if not self.messages:
            raise ValueError("a chat request needs at least one message")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError(f"temperature must be in [0, 2], got {self.temperature}")
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be positive")

    def with_messages(self, *extra: Message) -> "ChatRequest":
        return ChatRequest(
            system_prompt=self.system_prompt,
            messages=self.messages + tuple(extra),
            tool_schemas=self.tool_schemas,
            response_format=self.response_format,
            temperature=self.temperature,
            max_tokens=self.max_tokens,
        )


def fingerprint(request: ChatRequest) -> str:
    """Stable hash of system prompt plus messages, for mock scripting."""
    payload = {
        "system": request.system_prompt,
        "messages": [{"role": m.role, "content": m.content} for m in request.messages],
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class Usage:
    prompt_tokens: int
    completion_tokens: int

    def __post_init__(self):
        if self.prompt_tokens < 0 or self.completion_tokens < 0:
            raise ValueError("token counts must be non-negative")


@dataclass(frozen=True)
class ToolInvocation:
    name: str
    arguments: Mapping[str, Any]


@dataclass(frozen=True)
class Completion:
    text: str
    tool_invocations: tuple[ToolInvocation, ...]
    usage: Usage
    latency_ms: int
    retries: int = 0
    truncated: bool = False


@dataclass
class CallRecord:
    """One provider round-trip, accumulated into the run trace."""

    stage: str
    profile: str
    prompt_tokens: int
    completion_tokens: int
    latency_ms: int
    retries: int

    def to_json(self) -> dict:
        return {
            "stage": self.stage,
            "profile": self.profile,
            "prompt_tokens": self.prompt_tokens,
            "completion_tokens": self.completion_tokens,
            "latency_ms": self.latency_ms,
            "retries": self.retries,
        }
