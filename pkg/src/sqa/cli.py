"""Command-line front door.

    sqa ingest <corpus.jsonl>
    sqa ask "<question>" --corpus <path> --providers <config.json>
                         [--mode workflow|baseline] [--json] [--charts svg]
    sqa serve --corpus <path> --providers <config.json> --port <n>
    sqa eval --dataset <q.jsonl> --rubric <r.json> --oracles <o.jsonl>
             --judges <profile,profile,...> --corpus <path>
             --providers <config.json> --out report.json

SQA_LOG_LEVEL controls logging (default WARNING).
"""

from __future__ import annotations

import json
import logging
import os
import sys
from pathlib import Path

import click

from .corpus import ingest_corpus
from .errors import SqaError
from .evalharness.dataset import load_questions
from .evalharness.report import load_oracles, run_evaluation
from .evalharness.rubric import default_rubric, load_rubric
from .gateway.config import load_gateway
from .service import Pipeline


def _setup_logging() -> None:
    level = os.environ.get("SQA_LOG_LEVEL", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))


def _pipeline(corpus: str, providers: str) -> Pipeline:
    return Pipeline(ingest_corpus(corpus), load_gateway(providers))


@click.group()
def main():
    """Scientometric question answering over a local corpus."""
    _setup_logging()


@main.command()
@click.argument("corpus_path", type=click.Path(exists=True, dir_okay=False))
def ingest(corpus_path):
    """Validate a corpus file and print its stats."""
    try:
        corpus = ingest_corpus(corpus_path)
    except SqaError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(json.dumps(corpus.stats.to_json(), indent=2, sort_keys=True))


@main.command()
@click.argument("question")
@click.option("--corpus", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--providers", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--mode", type=click.Choice(["workflow", "baseline"]), default="workflow")
@click.option("--json", "as_json", is_flag=True, help="emit the full answer envelope as JSON")
@click.option(
    "--charts",
    type=click.Choice(["svg"]),
    default=None,
    help="additionally render chart specs as SVG files next to the answer",
)
@click.option("--charts-dir", type=click.Path(file_okay=False), default=".")
def ask(question, corpus, providers, mode, as_json, charts, charts_dir):
    """Answer one question and print the result."""
    pipeline = _pipeline(corpus, providers)
    try:
        envelope = pipeline.answer(question, mode)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    except SqaError as exc:
        raise click.ClickException(str(exc)) from exc

    if charts == "svg" and envelope.charts:
        from .charts_svg import render_chart_svg

        out_dir = Path(charts_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for i, spec in enumerate(envelope.charts, 1):
            path = out_dir / f"chart_{envelope.run_id}_{i}.svg"
            path.write_text(render_chart_svg(spec), "utf-8")
            click.echo(f"wrote {path}", err=True)

    if as_json:
        click.echo(json.dumps(envelope.to_json(), indent=2, sort_keys=True))
        return
    click.echo(envelope.answer_markdown)
    if envelope.references:
        click.echo("")
        for ref in envelope.references:
            click.echo(f"[{ref.text}]({ref.type}/{ref.id})")
    if envelope.charts:
        click.echo(f"\n({len(envelope.charts)} chart spec(s); use --json or --charts svg)")


@main.command()
@click.option("--corpus", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--providers", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--port", type=int, default=8080)
@click.option("--host", default="127.0.0.1")
def serve(corpus, providers, port, host):
    """Run the HTTP service."""
    import uvicorn

    from .webapp import create_app

    app = create_app(_pipeline(corpus, providers))
    uvicorn.run(app, host=host, port=port)


@main.command(name="eval")
@click.option("--dataset", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--rubric", "rubric_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--oracles", "oracles_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--judges", required=True, help="comma-separated provider profile names")
@click.option("--corpus", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--providers", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--alpha", type=float, default=0.05)
@click.option("--epsilon", type=float, default=0.05)
@click.option("--serial-judging", is_flag=True, help="grade one call at a time (for scripting)")
def eval_cmd(
    dataset, rubric_path, oracles_path, judges, corpus, providers, out_path, alpha, epsilon, serial_judging
):
    """Run both pipeline modes over a dataset and write the report."""
    pipeline = _pipeline(corpus, providers)
    questions = load_questions(dataset)
    rubric = load_rubric(rubric_path) if rubric_path else default_rubric()
    oracles = load_oracles(oracles_path) if oracles_path else None
    jury = [name.strip() for name in judges.split(",") if name.strip()]
    report = run_evaluation(
        questions,
        pipeline.run_for_eval,
        rubric,
        jury,
        judge_session_factory=pipeline.gateway.session,
        oracles=oracles,
        builder=pipeline.builder,
        engine=pipeline.engine,
        alpha=alpha,
        epsilon=epsilon,
        serial_judging=serial_judging,
    )
    Path(out_path).write_text(json.dumps(report, indent=2, sort_keys=True), "utf-8")
    click.echo(f"wrote {out_path}")


if __name__ == "__main__":
    main()
