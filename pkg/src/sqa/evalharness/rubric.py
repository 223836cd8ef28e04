"""Rubric loading: four fixed criteria, five levels each.

The rubric file is user-supplied JSON: {"criteria": {name: [five level
descriptions]}}. A compact default rubric ships for offline runs and
tests; replace it with your own wording for real grading campaigns.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from ..errors import EvalInputError

CRITERIA = ("Coverage", "Coherence", "Verifiability", "Validity")
LEVELS = 5


@dataclass(frozen=True)
class Rubric:
    criteria: Mapping[str, tuple[str, ...]]

    def levels(self, criterion: str) -> tuple[str, ...]:
        return self.criteria[criterion]

    def to_json(self) -> dict:
        return {"criteria": {c: list(l) for c, l in self.criteria.items()}}


def load_rubric(path: str | Path) -> Rubric:
    obj = json.loads(Path(path).read_text("utf-8"))
    return rubric_from_json(obj)


def rubric_from_json(obj) -> Rubric:
    criteria = obj.get("criteria") if isinstance(obj, dict) else None
    if not isinstance(criteria, dict):
        raise EvalInputError("rubric must be an object with a 'criteria' map")
    if set(criteria) != set(CRITERIA):
        raise EvalInputError(f"rubric criteria must be exactly {CRITERIA}, got {sorted(criteria)}")
    parsed = {}
    for name, levels in criteria.items():
        if not isinstance(levels, list) or len(levels) != LEVELS:
            raise EvalInputError(f"criterion {name!r} must have exactly {LEVELS} level texts")
        if not all(isinstance(l, str) and l.strip() for l in levels):
            raise EvalInputError(f"criterion {name!r} has empty level text")
        parsed[name] = tuple(levels)
    return Rubric(criteria=parsed)


def default_rubric() -> Rubric:
    return Rubric(
        criteria={
            "Coverage": (
                "Misses one or more key aspects of the question entirely.",
                "Addresses the question only partially; noticeable gaps remain.",
                "Touches every aspect of the question but handles some of them poorly.",
                "Answers every aspect of the question, including ambiguous parts, with fitting data requests.",
                "Answers everything asked and adds relevant, in-scope insight beyond the literal question.",
            ),
            "Coherence": (
                "Disorganized and hard to read; formatting absent or misused.",
                "Readable in places but weakly structured; formatting often inappropriate.",
                "Readable and mostly organized, though headings, tables, or lists are sometimes misapplied.",
                "Flows well and applies formatting effectively where it helps.",
                "Excellently organized: overview first, then data and analysis, then conclusions and references, with formatting used precisely.",
            ),
            "Verifiability": (
                "No references at all; claims stand unsupported.",
                "References are rare; most claims are unsupported.",
                "References appear inconsistently; several claims lack support.",
                "A reference section and in-text links are usually present where relevant; most claims trace to the data.",
                "References and in-text links are always present where relevant; every claim traces to the retrieved data.",
            ),
            "Validity": (
                "Conclusions contradict or ignore the retrieved data.",
                "Some claims misread the retrieved data.",
                "Main claims follow from the data, but parts of the analysis do not hold up.",
                "Nearly all claims follow from the data; minor useful data points go unused.",
                "Every claim is a sound reading of the data and the relevant retrieved data is used appropriately.",
            ),
        }
    )
