from .dpm import run_dpm
from .hlpm import parse_json_reply, run_hlpm
from .types import Plan, PlanShapeError, PlanStep, Resolutions, Tag, TaggedQuestion, plan_from_json
from .validate import ValidationReport, Violation, iter_placeholders, validate_plan

__all__ = [
    "Plan",
    "PlanShapeError",
    "PlanStep",
    "Resolutions",
    "Tag",
    "TaggedQuestion",
    "ValidationReport",
    "Violation",
    "iter_placeholders",
    "parse_json_reply",
    "plan_from_json",
    "run_dpm",
    "run_hlpm",
    "validate_plan",
]
