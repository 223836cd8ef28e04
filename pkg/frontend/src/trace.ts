// Expandable execution-trace panel: plan, per-step status and timings,
// warnings. Collapsed by default; the trace is fetched lazily on first
// expansion so the answer view stays cheap.

import type { ApiClient } from "./api";
import type { RunTrace } from "./types";

export function renderTracePanel(runId: string, api: ApiClient): HTMLElement {
  const details = document.createElement("details");
  details.className = "trace-panel";
  const summary = document.createElement("summary");
  summary.textContent = "Execution trace";
  details.appendChild(summary);

  const body = document.createElement("div");
  body.className = "trace-body";
  details.appendChild(body);

  let loaded = false;
  details.addEventListener("toggle", () => {
    if (!details.open || loaded) return;
    loaded = true;
    api
      .trace(runId)
      .then((trace) => body.appendChild(renderTrace(trace)))
      .catch((err: unknown) => {
        const msg = document.createElement("p");
        msg.className = "trace-error";
        msg.textContent = `Trace unavailable: ${String(err)}`;
        body.appendChild(msg);
      });
  });
  return details;
}

export function renderTrace(trace: RunTrace): HTMLElement {
  const root = document.createElement("div");
  root.className = "trace";

  if (trace.plan) {
    const planTitle = document.createElement("h4");
    planTitle.textContent = "Plan";
    root.appendChild(planTitle);
    const list = document.createElement("ol");
    for (const step of trace.plan.steps) {
      const li = document.createElement("li");
      const deps = step.depends_on.length ? ` (after ${step.depends_on.join(", ")})` : "";
      li.textContent = `${step.tool}: ${step.subtask}${deps}`;
      list.appendChild(li);
    }
    root.appendChild(list);
  }

  const stepsTitle = document.createElement("h4");
  stepsTitle.textContent = `Steps — ${trace.wall_clock_ms} ms total`;
  root.appendChild(stepsTitle);

  const table = document.createElement("table");
  table.className = "trace-steps";
  const head = document.createElement("tr");
  for (const label of ["step", "tool", "status", "ms", "query"]) {
    const th = document.createElement("th");
    th.textContent = label;
    head.appendChild(th);
  }
  table.appendChild(head);
  for (const key of Object.keys(trace.results).sort((a, b) => Number(a) - Number(b))) {
    const step = trace.results[key]!;
    const tr = document.createElement("tr");
    tr.className = `trace-step-${step.status}`;
    const cells = [
      String(step.step_id),
      step.tool,
      step.status + (step.error ? `: ${step.error}` : ""),
      String(step.timing_ms),
      step.assembled_query ?? "—",
    ];
    for (const value of cells) {
      const td = document.createElement("td");
      td.textContent = value;
      tr.appendChild(td);
    }
    table.appendChild(tr);
  }
  root.appendChild(table);

  const allWarnings = [
    ...trace.warnings,
    ...Object.values(trace.results).flatMap((s) => s.warnings),
  ];
  if (allWarnings.length > 0) {
    const warnTitle = document.createElement("h4");
    warnTitle.textContent = "Warnings";
    root.appendChild(warnTitle);
    const ul = document.createElement("ul");
    ul.className = "trace-warnings";
    for (const warning of allWarnings) {
      const li = document.createElement("li");
      li.textContent = warning;
      ul.appendChild(li);
    }
    root.appendChild(ul);
  }
  return root;
}
