"""Provider configuration loading.

Config file shape:

    {
      "profiles": {
        "planner_model": {"kind": "mock", "script": "planner.json"},
        "utility_model": {
          "kind": "http",
          "base_url": "https://api.example.com/v1",
          "api_key_env": "EXAMPLE_API_KEY",
          "model_id": "some-model",
          "max_concurrency": 4,
          "tokens_per_minute": null
        }
      },
      "retries": 3,
      "backoff_base_s": 0.25
    }

Mock script paths are resolved relative to the config file. API keys are
only ever read from the named environment variable.
"""

from __future__ import annotations

import json
from pathlib import Path

from .core import DEFAULT_BACKOFF_BASE_S, DEFAULT_RETRIES, Gateway, ProviderProfile
from .http import HttpProvider
from .mock import MockProvider


def load_gateway(path: str | Path) -> Gateway:
    path = Path(path)
    config = json.loads(path.read_text("utf-8"))
    profiles: dict[str, ProviderProfile] = {}
    for name, spec in config.get("profiles", {}).items():
        kind = spec.get("kind", "mock")
        if kind == "mock":
            script = spec.get("script")
            if script:
                provider = MockProvider.from_script(path.parent / script, name=name)
            else:
                provider = MockProvider(name=name)
        elif kind == "http":
            provider = HttpProvider(
                base_url=spec["base_url"],
                model_id=spec.get("model_id", ""),
                api_key_env=spec.get("api_key_env", ""),
                timeout_s=spec.get("timeout_s", 30.0),
                name=name,
            )
        else:
            raise ValueError(f"profile {name!r}: unknown provider kind {kind!r}")
        profiles[name] = ProviderProfile(
            name=name,
            provider=provider,
            max_concurrency=spec.get("max_concurrency", 4),
            tokens_per_minute=spec.get("tokens_per_minute"),
        )
    return Gateway(
        profiles,
        retries=config.get("retries", DEFAULT_RETRIES),
        backoff_base_s=config.get("backoff_base_s", DEFAULT_BACKOFF_BASE_S),
    )
