import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from sqa.cli import main
from sqa.gateway import RecordingProvider
from sqa.service import Pipeline

from conftest import FIXTURE_PATH
from miniqa import MINI_SUITE, minisuite_mock
from stage_mock import StageMock, gateway_for

PARK_Q = "Mention the co-authors of Chang Yun Park."


def record_minisuite_script(fixture_corpus, questions, modes=("workflow", "baseline")):
    """Run the scripted pipeline once while recording every request
    fingerprint, producing a replayable script file."""
    recorder = RecordingProvider(minisuite_mock())
    pipeline = Pipeline(fixture_corpus, gateway_for(recorder))
    for question in questions:
        for mode in modes:
            pipeline.answer(question, mode)
    return recorder.dump()


@pytest.fixture(scope="module")
def replay_config(fixture_corpus, tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    script = record_minisuite_script(fixture_corpus, [q.question for q in MINI_SUITE[:3]])
    (root / "script.json").write_text(json.dumps(script))
    config = {
        "profiles": {
            "planner_model": {"kind": "mock", "script": "script.json"},
            "utility_model": {"kind": "mock", "script": "script.json"},
        }
    }
    path = root / "providers.json"
    path.write_text(json.dumps(config))
    return path


def test_ingest_prints_stats():
    result = CliRunner().invoke(main, ["ingest", str(FIXTURE_PATH)])
    assert result.exit_code == 0, result.output
    stats = json.loads(result.output)
    assert stats["articles"] == 500


def test_ingest_rejects_bad_file(tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text("{broken\n")
    result = CliRunner().invoke(main, ["ingest", str(bad)])
    assert result.exit_code != 0
    assert "line 1" in result.output


def test_ask_replays_bit_identically(replay_config):
    args = ["ask", PARK_Q, "--corpus", str(FIXTURE_PATH), "--providers", str(replay_config)]
    first = CliRunner().invoke(main, args)
    second = CliRunner().invoke(main, args)
    assert first.exit_code == 0, first.output
    assert first.output == second.output
    assert "](Author/" in first.output


def test_ask_json_envelope_shape(replay_config):
    args = [
        "ask", PARK_Q, "--corpus", str(FIXTURE_PATH), "--providers", str(replay_config), "--json",
    ]
    result = CliRunner().invoke(main, args)
    assert result.exit_code == 0, result.output
    body = json.loads(result.output)
    assert body["mode"] == "workflow"
    assert body["references"]
    assert "timings" in body
    # JSON output is deterministic apart from measured timings.
    again = json.loads(CliRunner().invoke(main, args).output)
    body.pop("timings"), again.pop("timings")
    assert body == again


def test_ask_baseline_mode(replay_config):
    args = [
        "ask", PARK_Q, "--corpus", str(FIXTURE_PATH), "--providers", str(replay_config),
        "--mode", "baseline",
    ]
    result = CliRunner().invoke(main, args)
    assert result.exit_code == 0, result.output


def test_eval_cli_writes_report(fixture_corpus, tmp_path):
    # Record: pipeline runs plus serial judging for two questions.
    from sqa.evalharness import EvalQuestion, default_rubric, save_questions
    from sqa.evalharness.report import run_evaluation

    questions = [
        EvalQuestion(id="q01", question=MINI_SUITE[0].question, form=MINI_SUITE[0].form, source="user"),
        EvalQuestion(id="q02", question=MINI_SUITE[1].question, form=MINI_SUITE[1].form, source="user"),
    ]
    judge_stage_mock = StageMock().on("judge", {"score": 4, "confidence": 0.8})
    pipeline_recorder = RecordingProvider(minisuite_mock())
    judge_recorders = {name: RecordingProvider(judge_stage_mock) for name in ("judge_a", "judge_b")}
    gateway = gateway_for(pipeline_recorder, extra_profiles=judge_recorders)
    pipeline = Pipeline(fixture_corpus, gateway)
    run_evaluation(
        questions,
        pipeline.run_for_eval,
        default_rubric(),
        sorted(judge_recorders),
        judge_session_factory=gateway.session,
        serial_judging=True,
    )

    # Replay through the CLI with fingerprint scripts.
    from sqa.gateway.mock import merge_scripts

    (tmp_path / "pipeline.json").write_text(json.dumps(pipeline_recorder.dump()))
    judge_script = merge_scripts(*(r.dump() for r in judge_recorders.values()))
    (tmp_path / "judges.json").write_text(json.dumps(judge_script))
    config = {
        "profiles": {
            "planner_model": {"kind": "mock", "script": "pipeline.json"},
            "utility_model": {"kind": "mock", "script": "pipeline.json"},
            "judge_a": {"kind": "mock", "script": "judges.json"},
            "judge_b": {"kind": "mock", "script": "judges.json"},
        }
    }
    (tmp_path / "providers.json").write_text(json.dumps(config))

    dataset = tmp_path / "questions.jsonl"
    save_questions(questions, dataset)
    oracles = tmp_path / "oracles.jsonl"
    oracles.write_text(
        "\n".join(
            json.dumps({"id": q.id, "params": mq.oracle})
            for q, mq in zip(questions, MINI_SUITE[:2])
        )
    )
    out = tmp_path / "report.json"
    result = CliRunner().invoke(
        main,
        [
            "eval",
            "--dataset", str(dataset),
            "--oracles", str(oracles),
            "--judges", "judge_a,judge_b",
            "--corpus", str(FIXTURE_PATH),
            "--providers", str(tmp_path / "providers.json"),
            "--out", str(out),
            "--serial-judging",
        ],
    )
    assert result.exit_code == 0, result.output
    report = json.loads(out.read_text())
    assert report["questions"] == 2
    assert set(report["criteria"]) == {"Coverage", "Coherence", "Verifiability", "Validity"}
    for block in report["criteria"].values():
        assert block["workflow"]["n"] == 2
        assert "significance" in block
    assert "judge_a|judge_b" in report["judge_agreement"]["Coverage"]
    assert report["critical_errors"] == {"workflow": 0, "baseline": 0}


def test_ask_charts_svg_writes_files(fixture_corpus, tmp_path):
    chart_q = next(q for q in MINI_SUITE if q.wants_chart)
    script = record_minisuite_script(fixture_corpus, [chart_q.question], modes=("workflow",))
    (tmp_path / "script.json").write_text(json.dumps(script))
    (tmp_path / "providers.json").write_text(
        json.dumps(
            {
                "profiles": {
                    "planner_model": {"kind": "mock", "script": "script.json"},
                    "utility_model": {"kind": "mock", "script": "script.json"},
                }
            }
        )
    )
    out_dir = tmp_path / "charts"
    result = CliRunner().invoke(
        main,
        [
            "ask", chart_q.question,
            "--corpus", str(FIXTURE_PATH),
            "--providers", str(tmp_path / "providers.json"),
            "--charts", "svg",
            "--charts-dir", str(out_dir),
        ],
    )
    assert result.exit_code == 0, result.output
    written = list(out_dir.glob("chart_*.svg"))
    assert written
    assert written[0].read_text().startswith("<svg")
