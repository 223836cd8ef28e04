from .baseline import run_baseline
from .run import STEP_CONCURRENCY_CAP, PlanExecutor, ToolRunner
from .substitute import substitute_placeholders
from .trace import DIGEST_ROW_CAP, RunTrace, StepResult

__all__ = [
    "DIGEST_ROW_CAP",
    "STEP_CONCURRENCY_CAP",
    "PlanExecutor",
    "RunTrace",
    "StepResult",
    "ToolRunner",
    "run_baseline",
    "substitute_placeholders",
]
