"""Evaluation questions and seeded sampling from a DBLP-QuAD dump.

The sampler never redistributes anything: it reads a user-supplied copy
of the dataset, filters out template ids known to be incompatible with
this system's data model, and draws a fixed number of questions per
source category with a seeded RNG. Source categories map onto this
system's question forms; single-fact and multi-fact both land on
FACT_BASED, whose filter-style extras make it the same form here.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from ..errors import SamplingError

QUESTION_FORMS = (
    "FACT_BASED",
    "SINGLE_INTENT",
    "UNION",
    "MULTIPLE_INTENT",
    "COMPARATIVE_SUPERLATIVE",
)

# Source categories sampled from DBLP-QuAD, in report order.
SAMPLED_CATEGORIES = (
    "SINGLE_FACT",
    "MULTI_FACT",
    "DOUBLE_INTENT",
    "UNION",
    "COMPARATIVE_SUPERLATIVE",
)

_CATEGORY_ALIASES = {
    "SINGLE_FACT": "SINGLE_FACT",
    "MULTI_FACT": "MULTI_FACT",
    "DOUBLE_INTENT": "DOUBLE_INTENT",
    "UNION": "UNION",
    "COMPARATIVE_SUPERLATIVE": "COMPARATIVE_SUPERLATIVE",
    "SUPERLATIVE_COMPARATIVE": "COMPARATIVE_SUPERLATIVE",
    "COMPARISON": "COMPARATIVE_SUPERLATIVE",
}

CATEGORY_TO_FORM = {
    "SINGLE_FACT": "FACT_BASED",
    "MULTI_FACT": "FACT_BASED",
    "DOUBLE_INTENT": "MULTIPLE_INTENT",
    "UNION": "UNION",
    "COMPARATIVE_SUPERLATIVE": "COMPARATIVE_SUPERLATIVE",
}

# Template ids excluded from sampling; maintained by hand as templates
# incompatible with this data model turn up.
DEFAULT_EXCLUDED_TEMPLATES: frozenset[str] = frozenset()


@dataclass(frozen=True)
class EvalQuestion:
    id: str
    question: str
    form: str
    source: str  # "user" | "dblp_quad"

    def __post_init__(self):
        if self.form not in QUESTION_FORMS:
            raise ValueError(f"unknown question form {self.form!r}")
        if self.source not in ("user", "dblp_quad"):
            raise ValueError(f"unknown source {self.source!r}")

    def to_json(self) -> dict:
        return {"id": self.id, "question": self.question, "form": self.form, "source": self.source}


def _normalize_category(raw: str) -> str | None:
    key = "".join(ch if ch.isalnum() else "_" for ch in raw.strip().upper())
    key = "_".join(part for part in key.split("_") if part)
    return _CATEGORY_ALIASES.get(key)


def _iter_source_questions(path: Path) -> Iterable[dict]:
    text = path.read_text("utf-8")
    stripped = text.lstrip()
    if stripped.startswith("{") or stripped.startswith("["):
        obj = json.loads(text)
        items = obj.get("questions", obj) if isinstance(obj, dict) else obj
        yield from items
    else:
        for line in text.splitlines():
            if line.strip():
                yield json.loads(line)


def sample_dataset(
    dblp_quad_path: str | Path,
    per_category: int,
    seed: int,
    excluded_templates: frozenset[str] = DEFAULT_EXCLUDED_TEMPLATES,
) -> list[EvalQuestion]:
    if per_category < 0:
        raise SamplingError(f"per_category must be >= 0, got {per_category}")
    if per_category == 0:
        return []

    by_category: dict[str, list[tuple[str, str]]] = {c: [] for c in SAMPLED_CATEGORIES}
    for item in _iter_source_questions(Path(dblp_quad_path)):
        if not isinstance(item, dict):
            continue
        category = _normalize_category(str(item.get("query_type", "")))
        if category is None:
            continue
        if str(item.get("template_id", "")) in excluded_templates:
            continue
        question = item.get("question")
        if isinstance(question, dict):
            question = question.get("string", "")
        if not isinstance(question, str) or not question.strip():
            continue
        qid = str(item.get("id", f"{category}-{len(by_category[category])}"))
        by_category[category].append((qid, question))

    rng = random.Random(seed)
    sampled: list[EvalQuestion] = []
    for category in SAMPLED_CATEGORIES:
        pool = sorted(by_category[category])
        if len(pool) < per_category:
            raise SamplingError(
                f"category {category} has only {len(pool)} usable questions, "
                f"need {per_category}"
            )
        for qid, question in rng.sample(pool, per_category):
            sampled.append(
                EvalQuestion(
                    id=qid,
                    question=question,
                    form=CATEGORY_TO_FORM[category],
                    source="dblp_quad",
                )
            )
    return sampled


def load_questions(path: str | Path) -> list[EvalQuestion]:
    """Read an EvalQuestion JSONL file."""
    questions = []
    for line in Path(path).read_text("utf-8").splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        questions.append(
            EvalQuestion(
                id=str(obj["id"]),
                question=obj["question"],
                form=obj["form"],
                source=obj.get("source", "user"),
            )
        )
    return questions


def save_questions(questions: list[EvalQuestion], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for q in questions:
            fh.write(json.dumps(q.to_json()) + "\n")
