"""Minimal chat-completions HTTP provider.

Speaks the widely adopted OpenAI-style wire format so any compatible
endpoint can back a profile. The API key is read from the environment
variable named in the profile config, never from the config itself.
"""

from __future__ import annotations

import json
import os

import httpx

from ..errors import EmptyCompletionError, TransientProviderError
from .mock import MockReply
from .types import ChatRequest


class HttpProvider:
    kind = "http"

    def __init__(
        self,
        base_url: str,
        model_id: str,
        api_key_env: str = "",
        timeout_s: float = 30.0,
        name: str = "http",
        transport: httpx.BaseTransport | None = None,
    ):
        self.name = name
        self.base_url = base_url.rstrip("/")
        self.model_id = model_id
        self.api_key_env = api_key_env
        self.timeout_s = timeout_s
        self._client = httpx.Client(timeout=timeout_s, transport=transport)

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        if self.api_key_env:
            key = os.environ.get(self.api_key_env, "")
            if key:
                headers["Authorization"] = f"Bearer {key}"
        return headers

    def complete(self, request: ChatRequest) -> MockReply:
        messages = [{"role": "system", "content": request.system_prompt}]
        messages += [{"role": m.role, "content": m.content} for m in request.messages]
        body: dict = {
            "model": self.model_id,
            "messages": messages,
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }
        if request.response_format == "json_object":
            body["response_format"] = {"type": "json_object"}
        if request.tool_schemas:
            body["tools"] = [
                {
                    "type": "function",
                    "function": {
                        "name": t.name,
                        "description": t.description,
                        "parameters": dict(t.parameters),
                    },
                }
                for t in request.tool_schemas
            ]

        try:
            response = self._client.post(
                f"{self.base_url}/chat/completions", json=body, headers=self._headers()
            )
        except httpx.HTTPError as exc:
            raise TransientProviderError(f"{self.name}: transport error: {exc}") from exc
        if response.status_code >= 500 or response.status_code == 429:
            raise TransientProviderError(f"{self.name}: status {response.status_code}")
        if response.status_code >= 400:
            raise EmptyCompletionError(
                f"{self.name}: provider rejected the request ({response.status_code}): "
                f"{response.text[:200]}"
            )

        payload = response.json()
        choice = (payload.get("choices") or [{}])[0]
        message = choice.get("message", {})
        tool_calls = []
        for call in message.get("tool_calls") or []:
            fn = call.get("function", {})
            try:
                arguments = json.loads(fn.get("arguments", "{}"))
            except json.JSONDecodeError:
                arguments = {"_raw": fn.get("arguments", "")}
            tool_calls.append({"name": fn.get("name", ""), "arguments": arguments})
        usage = payload.get("usage", {})
        return MockReply(
            text=message.get("content") or "",
            tool_calls=tool_calls,
            prompt_tokens=usage.get("prompt_tokens", 0),
            completion_tokens=usage.get("completion_tokens", 0),
            truncated=choice.get("finish_reason") == "length",
        )
