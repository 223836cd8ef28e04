from .critical import detect_critical_error
from .dataset import (
    QUESTION_FORMS,
    SAMPLED_CATEGORIES,
    EvalQuestion,
    load_questions,
    sample_dataset,
    save_questions,
)
from .judge import Abstention, judge_response
from .pooling import DEFAULT_EPSILON, JudgeVerdict, PooledScore, pool_jury
from .report import build_report, load_oracles, run_evaluation
from .rubric import CRITERIA, Rubric, default_rubric, load_rubric, rubric_from_json
from .stats import AgreementResult, StatTestResult, mann_whitney_u, weighted_kappa

__all__ = [
    "CRITERIA",
    "DEFAULT_EPSILON",
    "QUESTION_FORMS",
    "SAMPLED_CATEGORIES",
    "Abstention",
    "AgreementResult",
    "EvalQuestion",
    "JudgeVerdict",
    "PooledScore",
    "Rubric",
    "StatTestResult",
    "build_report",
    "default_rubric",
    "detect_critical_error",
    "judge_response",
    "load_oracles",
    "load_questions",
    "load_rubric",
    "mann_whitney_u",
    "pool_jury",
    "rubric_from_json",
    "run_evaluation",
    "sample_dataset",
    "save_questions",
    "weighted_kappa",
]
