"""High-level planning: NER over the question, an abstract outline, and
entity-id resolution.

One model call produces tags and outline; resolution then runs locally
against the corpus with no further model involvement. Tags the model
gets wrong (unknown types, text not present in the question) are
dropped with warnings rather than trusted.
"""

from __future__ import annotations

import json
import logging
import re

from ..corpus import EntityType
from ..errors import PlannerParseError
from ..gateway.core import UTILITY_PROFILE, GatewaySession
from ..resolver import EntityResolver
from .prompts import build_hlpm_request, repair_request
from .types import Resolutions, Tag, TaggedQuestion

logger = logging.getLogger(__name__)

# Outline lines must stay abstract: no tool names, no parameter keys,
# no placeholder syntax. Plain-English words like "limit" are allowed.
_OUTLINE_LINT = re.compile(
    r"article_search|faceted_article_search|facet_type|entity_filters|year_range"
    r"|facet_metrics|article_ids|top_n|depends_on|\$step\d",
    re.IGNORECASE,
)


def parse_json_reply(text: str) -> dict:
    """Parse a JSON object reply, tolerating a fenced code block."""
    cleaned = text.strip()
    if cleaned.startswith("```"):
        cleaned = re.sub(r"^```[a-zA-Z]*\n?", "", cleaned)
        cleaned = re.sub(r"\n?```$", "", cleaned.strip())
    obj = json.loads(cleaned)
    if not isinstance(obj, dict):
        raise json.JSONDecodeError("expected a JSON object", cleaned, 0)
    return obj


def _chat_json(session: GatewaySession, request, stage: str, profile: str) -> dict:
    completion = session.chat(request, profile, stage=stage)
    try:
        return parse_json_reply(completion.text)
    except json.JSONDecodeError as exc:
        repair = repair_request(request, completion.text, f"not valid JSON ({exc.msg})")
        retry = session.chat(repair, profile, stage=f"{stage}_repair")
        try:
            return parse_json_reply(retry.text)
        except json.JSONDecodeError as exc2:
            raise PlannerParseError(
                f"{stage}: model output is not valid JSON after one repair ({exc2.msg})"
            ) from exc2


def _locate_tags(question: str, raw_tags: list, warnings: list[str]) -> list[Tag]:
    candidates: list[Tag] = []
    for item in raw_tags:
        if not isinstance(item, dict):
            warnings.append(f"dropped malformed tag {item!r}")
            continue
        text, type_name = item.get("text"), item.get("type")
        if not isinstance(text, str) or not text:
            warnings.append(f"dropped tag with missing text: {item!r}")
            continue
        try:
            etype = EntityType(str(type_name).upper())
        except ValueError:
            warnings.append(f"dropped tag {text!r} with unsupported type {type_name!r}")
            continue
        start = question.find(text)
        if start < 0:
            warnings.append(f"dropped tag {text!r}: not found in the question")
            continue
        candidates.append(Tag(text=text, type=etype, span=(start, start + len(text))))

    # Overlaps keep the longer span; ties keep the earlier one.
    chosen: list[Tag] = []
    for tag in sorted(candidates, key=lambda t: (-(t.span[1] - t.span[0]), t.span[0])):
        if any(t.span[0] < tag.span[1] and tag.span[0] < t.span[1] for t in chosen):
            warnings.append(f"dropped tag {tag.text!r}: overlaps a longer tag")
            continue
        chosen.append(tag)
    chosen.sort(key=lambda t: t.span[0])
    return chosen


def run_hlpm(
    question: str,
    session: GatewaySession,
    resolver: EntityResolver,
    profile: str = UTILITY_PROFILE,
) -> tuple[TaggedQuestion, Resolutions]:
    if not question.strip():
        raise ValueError("question must be non-empty")

    obj = _chat_json(session, build_hlpm_request(question), "hlpm", profile)
    warnings: list[str] = []
    raw_tags = obj.get("tags", [])
    if not isinstance(raw_tags, list):
        warnings.append("model returned non-list tags; treated as none")
        raw_tags = []
    raw_outline = obj.get("outline", [])
    if not isinstance(raw_outline, list):
        warnings.append("model returned non-list outline; treated as empty")
        raw_outline = []

    outline: list[str] = []
    for line in raw_outline:
        line = str(line)
        if _OUTLINE_LINT.search(line):
            warnings.append(f"dropped outline line with implementation detail: {line!r}")
            continue
        outline.append(line)

    tags = _locate_tags(question, raw_tags, warnings)
    tagged = TaggedQuestion(question=question, tags=tags, outline=outline, warnings=warnings)

    resolutions = Resolutions()
    for tag in tags:
        if tag.text in resolutions.resolved:
            continue
        ranked = resolver.resolve(tag.text, tag.type)
        if ranked.best is None:
            resolutions.unresolved.append((tag.text, tag.type))
            tagged.warnings.append(
                f"no {tag.type.value} matched {tag.text!r}; carrying it as unresolved"
            )
        else:
            resolutions.resolved[tag.text] = ranked.best

    # Post hoc on every run: the resolution map must never carry an id
    # the corpus does not know (resolution never invents entities).
    for ref in resolutions.resolved.values():
        assert resolver.corpus.get_entity(ref.id, ref.type) is not None
    return tagged, resolutions
