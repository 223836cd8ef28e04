from .config import load_gateway
from .core import PLANNER_PROFILE, UTILITY_PROFILE, Gateway, GatewaySession, ProviderProfile
from .http import HttpProvider
from .mock import MockProvider, MockReply, RecordingProvider, SequenceMock, merge_scripts
from .toolschema import (
    ARTICLE_SEARCH_SCHEMA,
    FACETED_SEARCH_SCHEMA,
    PLACEHOLDER_RE,
    PLANNING_TOOL_NAMES,
    PLANNING_TOOLS,
    is_placeholder,
    schema_for,
    validate_arguments,
)
from .types import (
    CallRecord,
    ChatRequest,
    Completion,
    Message,
    ToolInvocation,
    ToolSchema,
    Usage,
    fingerprint,
)

__all__ = [
    "ARTICLE_SEARCH_SCHEMA",
    "FACETED_SEARCH_SCHEMA",
    "PLACEHOLDER_RE",
    "PLANNER_PROFILE",
    "PLANNING_TOOLS",
    "PLANNING_TOOL_NAMES",
    "UTILITY_PROFILE",
    "CallRecord",
    "ChatRequest",
    "Completion",
    "Gateway",
    "GatewaySession",
    "HttpProvider",
    "Message",
    "MockProvider",
    "MockReply",
    "ProviderProfile",
    "RecordingProvider",
    "SequenceMock",
    "ToolInvocation",
    "ToolSchema",
    "Usage",
    "fingerprint",
    "is_placeholder",
    "load_gateway",
    "merge_scripts",
    "schema_for",
    "validate_arguments",
]
