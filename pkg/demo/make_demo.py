#!/usr/bin/env python3
"""Regenerate the offline demo: a provider config plus a fingerprint
script covering the bundled mini-suite questions over the test corpus.

Run from the repository root:

    python3 demo/make_demo.py

Then ask away with no network and no keys:

    sqa ask "Mention the co-authors of Chang Yun Park." \
        --corpus tests/data/corpus_500.jsonl --providers demo/providers.json
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from sqa.corpus import ingest_corpus
from sqa.gateway import RecordingProvider
from sqa.service import Pipeline

from miniqa import MINI_SUITE, minisuite_mock
from stage_mock import gateway_for


def main():
    recorder = RecordingProvider(minisuite_mock())
    pipeline = Pipeline(ingest_corpus(ROOT / "tests/data/corpus_500.jsonl"), gateway_for(recorder))
    for mq in MINI_SUITE:
        for mode in ("workflow", "baseline"):
            pipeline.answer(mq.question, mode)
    out = Path(__file__).parent
    (out / "script.json").write_text(json.dumps(recorder.dump(), indent=1, sort_keys=True))
    (out / "providers.json").write_text(
        json.dumps(
            {
                "profiles": {
                    "planner_model": {"kind": "mock", "script": "script.json"},
                    "utility_model": {"kind": "mock", "script": "script.json"},
                }
            },
            indent=2,
        )
    )
    questions = (out / "questions.txt")
    questions.write_text("".join(f"{mq.question}\n" for mq in MINI_SUITE))
    print(f"wrote {out / 'script.json'}, {out / 'providers.json'}, {questions}")


if __name__ == "__main__":
    main()
