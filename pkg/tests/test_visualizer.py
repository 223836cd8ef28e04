import json
import random

from sqa.corpus import EntityType
from sqa.executor.trace import RunTrace, StepResult
from sqa.gateway import MockReply
from sqa.search import ArticleResultSet, ArticleRow, FacetResultSet, FacetRow
from sqa.visualizer import (
    ChartSpec,
    decide_plots,
    generate_charts,
    parse_chart_spec,
    validate_chart_spec,
)

from stage_mock import StageMock, gateway_for


def facet_trace(rows):
    payload = FacetResultSet(
        facet_type=EntityType.AUTHOR,
        rows=tuple(
            FacetRow(id=i, name=i, document_count=c, metrics={"total_citations": t})
            for i, c, t in rows
        ),
        total_matched=sum(c for _, c, _ in rows),
    )
    trace = RunTrace(mode="workflow", plan=None)
    trace.results[1] = StepResult(
        step_id=1,
        tool="faceted_article_search",
        assembled_query="ALL",
        payload=payload,
        status="ok" if rows else "empty",
    )
    return trace


FIVE_ROWS = [("A1", 9, 100), ("A2", 7, 90), ("A3", 5, 50), ("A4", 3, 30), ("A5", 1, 10)]


def spec_dict(values=(9, 7, 5, 3, 1), chart_type="bar", labels=None, source=(1,)):
    series_labels = labels or ["documents"]
    return {
        "chart_type": chart_type,
        "title": "Top authors",
        "x": {"label": "author", "categories": ["A1", "A2", "A3", "A4", "A5"]},
        "series": [{"label": lbl, "values": list(values)} for lbl in series_labels],
        "source_step_ids": list(source),
    }


def test_decision_scripted_true():
    trace = facet_trace(FIVE_ROWS)
    mock = StageMock().on(
        "vm_decide", {"wanted": True, "rationale": "five comparable rows", "chart_types": ["bar"]}
    )
    decision = decide_plots("q", "answer", trace, gateway_for(mock).session())
    assert decision.wanted and decision.chart_types == ["bar"]


def test_single_row_forces_false_without_model_call():
    trace = facet_trace([("A1", 3, 10)])
    mock = StageMock()  # an unscripted call would raise
    session = gateway_for(mock).session()
    decision = decide_plots("q", "answer", trace, session)
    assert not decision.wanted
    assert session.calls == []


def test_failed_trace_forces_false():
    trace = RunTrace(mode="workflow", plan=None)
    trace.results[1] = StepResult(
        step_id=1, tool="article_search", assembled_query=None, payload=None,
        status="failed", error="boom",
    )
    decision = decide_plots("q", "answer", trace, gateway_for(StageMock()).session())
    assert not decision.wanted


def test_malformed_decision_defaults_to_false():
    trace = facet_trace(FIVE_ROWS)
    mock = StageMock().on("vm_decide", MockReply(text="not json"))
    decision = decide_plots("q", "answer", trace, gateway_for(mock).session())
    assert not decision.wanted


def test_valid_spec_returned_unchanged():
    trace = facet_trace(FIVE_ROWS)
    mock = StageMock().on("vm_charts", {"charts": [spec_dict()]})
    from sqa.visualizer import PlotDecision

    charts, warnings = generate_charts(
        PlotDecision(wanted=True, rationale="", chart_types=["bar"]),
        "q", trace, gateway_for(mock).session(),
    )
    assert len(charts) == 1
    assert charts[0].series[0][1] == (9, 7, 5, 3, 1)
    assert validate_chart_spec(charts[0], trace) == []


def test_length_mismatch_repaired_in_second_round():
    trace = facet_trace(FIVE_ROWS)
    mock = StageMock()
    mock.on("vm_charts", {"charts": [spec_dict()]}, contains="invalid")
    mock.on("vm_charts", {"charts": [spec_dict(values=(9, 7, 5, 3))]})
    from sqa.visualizer import PlotDecision

    session = gateway_for(mock).session()
    charts, _ = generate_charts(
        PlotDecision(wanted=True, rationale="", chart_types=["bar"]), "q", trace, session
    )
    assert len(charts) == 1
    assert len(session.calls) == 2


def test_untraceable_value_dropped_after_three_rounds():
    trace = facet_trace(FIVE_ROWS)
    mock = StageMock().on("vm_charts", {"charts": [spec_dict(values=(9999, 7, 5, 3, 1))]})
    from sqa.visualizer import PlotDecision

    session = gateway_for(mock).session()
    charts, warnings = generate_charts(
        PlotDecision(wanted=True, rationale="", chart_types=["bar"]), "q", trace, session
    )
    assert charts == []
    assert len(session.calls) == 3  # the bounded repair loop
    assert any("no valid chart specs" in w for w in warnings)


def test_validate_rules():
    trace = facet_trace(FIVE_ROWS)
    ok_spec, errors = parse_chart_spec(spec_dict())
    assert errors == [] and validate_chart_spec(ok_spec, trace) == []

    pie_neg, _ = parse_chart_spec(
        {
            "chart_type": "pie",
            "title": "t",
            "x": {"label": "a", "categories": ["A1", "A2"]},
            "series": [{"label": "s", "values": [9, -7]}],
            "source_step_ids": [1],
        }
    )
    assert any("non-negative" in v for v in validate_chart_spec(pie_neg, trace))

    dup, _ = parse_chart_spec(spec_dict(labels=["a", "a"], chart_type="grouped_bar"))
    assert any("duplicate series label" in v for v in validate_chart_spec(dup, trace))

    bad_source, _ = parse_chart_spec(spec_dict(source=(9,)))
    assert any("not in the trace" in v for v in validate_chart_spec(bad_source, trace))


def test_fifty_adversarial_specs_never_leak_invalid():
    rng = random.Random(21)
    trace = facet_trace(FIVE_ROWS)
    from sqa.visualizer import PlotDecision

    corruptions = [
        lambda s: {**s, "chart_type": "scatter3d"},
        lambda s: {**s, "series": [{"label": "s", "values": [9, 7]}]},
        lambda s: {**s, "series": [{"label": "s", "values": [9, 7, 5, 3, 12345]}]},
        lambda s: {**s, "x": {"label": "a", "categories": []}},
        lambda s: {**s, "series": []},
        lambda s: {**s, "source_step_ids": [42]},
        lambda s: s,  # sometimes valid
    ]
    for i in range(50):
        raw = corruptions[rng.randrange(len(corruptions))](spec_dict())
        mock = StageMock().on("vm_charts", {"charts": [raw]})
        session = gateway_for(mock).session()
        charts, _ = generate_charts(
            PlotDecision(wanted=True, rationale="", chart_types=["bar"]), "q", trace, session
        )
        rounds = sum(1 for c in session.calls if c.stage.startswith("vm_charts_round"))
        assert rounds <= 3
        for chart in charts:
            assert validate_chart_spec(chart, trace) == []
            for _, values in chart.series:
                assert all(v in trace.numeric_cells() for v in values)


def test_svg_renderer_produces_wellformed_markup():
    import xml.etree.ElementTree as ET

    from sqa.charts_svg import render_chart_svg

    for ctype in ("bar", "grouped_bar", "line", "pie"):
        labels = ["a", "b"] if ctype == "grouped_bar" else ["a"]
        if ctype == "pie":
            labels = ["a"]
        spec, errors = parse_chart_spec(spec_dict(chart_type=ctype, labels=labels))
        assert errors == []
        svg = render_chart_svg(spec)
        root = ET.fromstring(svg)
        assert root.tag.endswith("svg")
