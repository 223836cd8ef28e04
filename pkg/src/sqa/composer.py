"""Grounded answer composition and reference auditing.

The writing model sees only the question and the retrieved step data.
Its output is then audited: every markdown link must point at an entity
known to the corpus or at data present in the trace, and anything else
is stripped to plain text and recorded. Stripping (rather than retrying)
keeps latency flat and makes the no-unverifiable-links guarantee
structural.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field

from .corpus import ARTICLE_LINK_LABEL, LABEL_TO_TYPE, Corpus
from .errors import CompositionError, EmptyCompletionError
from .executor.trace import RunTrace
from .gateway.core import UTILITY_PROFILE, GatewaySession
from .planner.prompts import build_compose_request

logger = logging.getLogger(__name__)

NO_DATA_DISCLAIMER = (
    "### No data retrieved\n\n"
    "No data could be retrieved for this question, so no answer can be "
    "given. Nothing below is inferred from model knowledge.\n"
)

_LINK = re.compile(r"\[([^\]\n]+)\]\(([^)\s]+)\)")


@dataclass(frozen=True)
class Reference:
    text: str
    type: str
    id: str

    def to_json(self) -> dict:
        return {"text": self.text, "type": self.type, "id": self.id}


@dataclass
class RefAudit:
    total_refs: int = 0
    resolved_refs: int = 0
    stripped_refs: list[tuple[str, str]] = field(default_factory=list)  # (link target, reason)

    def __post_init__(self):
        assert self.resolved_refs + len(self.stripped_refs) == self.total_refs

    def to_json(self) -> dict:
        return {
            "total_refs": self.total_refs,
            "resolved_refs": self.resolved_refs,
            "stripped_refs": [{"link": l, "reason": r} for l, r in self.stripped_refs],
        }


@dataclass
class ComposedResponse:
    markdown: str
    references: list[Reference]
    audit: RefAudit
    token_count: int

    def to_json(self) -> dict:
        return {
            "markdown": self.markdown,
            "references": [r.to_json() for r in self.references],
            "audit": self.audit.to_json(),
            "token_count": self.token_count,
        }


def _link_resolves(
    target: str, article_ids: set[str], entity_pairs: set[tuple[str, str]], corpus: Corpus
) -> tuple[bool, str, str, str]:
    """Returns (resolves, reason-if-not, type label, id)."""
    if "/" not in target:
        return False, "link target is not of the form Type/ID", "", ""
    label, _, ident = target.partition("/")
    if label == ARTICLE_LINK_LABEL:
        if ident in article_ids:
            return True, "", label, ident
        return False, "article id not in retrieved data", label, ident
    etype = LABEL_TO_TYPE.get(label)
    if etype is None:
        return False, f"unknown reference type {label!r}", label, ident
    if corpus.get_entity(ident, etype) is not None:
        return True, "", label, ident
    if (etype.value, ident) in entity_pairs:
        return True, "", label, ident
    return False, "id not in retrieved data", label, ident


def verify_references(markdown: str, trace: RunTrace, corpus: Corpus) -> RefAudit:
    """Audit every markdown link against the trace and entity table."""
    article_ids, entity_pairs = trace.article_ids(), trace.entity_ids()
    total, resolved, stripped = 0, 0, []
    for match in _LINK.finditer(markdown):
        total += 1
        ok, reason, _, _ = _link_resolves(match.group(2), article_ids, entity_pairs, corpus)
        if ok:
            resolved += 1
        else:
            stripped.append((match.group(2), reason))
    return RefAudit(total_refs=total, resolved_refs=resolved, stripped_refs=stripped)


def _strip_and_collect(
    markdown: str, trace: RunTrace, corpus: Corpus
) -> tuple[str, list[Reference], RefAudit]:
    article_ids, entity_pairs = trace.article_ids(), trace.entity_ids()
    references: list[Reference] = []
    seen: set[tuple[str, str]] = set()
    total, resolved, stripped = 0, 0, []

    def replace(match: re.Match) -> str:
        nonlocal total, resolved
        total += 1
        text, target = match.group(1), match.group(2)
        ok, reason, label, ident = _link_resolves(target, article_ids, entity_pairs, corpus)
        if not ok:
            stripped.append((target, reason))
            logger.info("stripped unverifiable link %s (%s)", target, reason)
            return text
        resolved += 1
        if (label, ident) not in seen:
            seen.add((label, ident))
            references.append(Reference(text=text, type=label, id=ident))
        return match.group(0)

    cleaned = _LINK.sub(replace, markdown)
    audit = RefAudit(total_refs=total, resolved_refs=resolved, stripped_refs=stripped)
    return cleaned, references, audit


def compose(
    question: str,
    trace: RunTrace,
    session: GatewaySession,
    corpus: Corpus,
    profile: str = UTILITY_PROFILE,
) -> ComposedResponse:
    """One writing-model call over the trace, then audit and strip."""
    if not trace.ok_results:
        # Nothing usable was retrieved: state that deterministically
        # instead of asking a model to not invent an answer.
        failures = [
            f"- step {r.step_id}: {r.status}" + (f" ({r.error})" if r.error else "")
            for _, r in sorted(trace.results.items())
        ]
        markdown = NO_DATA_DISCLAIMER
        if failures:
            markdown += "\nStep outcomes:\n" + "\n".join(failures) + "\n"
        return ComposedResponse(
            markdown=markdown,
            references=[],
            audit=RefAudit(),
            token_count=0,
        )

    request = build_compose_request(question, trace.step_digests())
    try:
        completion = session.chat(request, profile, stage="compose")
    except EmptyCompletionError as exc:
        raise CompositionError(f"writing model produced no output: {exc}") from exc
    cleaned, references, audit = _strip_and_collect(completion.text, trace, corpus)
    return ComposedResponse(
        markdown=cleaned,
        references=references,
        audit=audit,
        token_count=completion.usage.completion_tokens,
    )
