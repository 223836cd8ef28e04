// One answered question: rendered markdown, charts, references count,
// and the collapsed trace panel. The client displays exactly what the
// envelope carries; it computes nothing.

import type { ApiClient } from "./api";
import { renderChart } from "./charts";
import { renderMarkdown } from "./markdown";
import { renderTracePanel } from "./trace";
import type { AnswerEnvelope } from "./types";

export function renderAnswer(envelope: AnswerEnvelope, api: ApiClient): HTMLElement {
  const container = document.createElement("article");
  container.className = "answer";
  container.dataset.runId = envelope.run_id;
  container.dataset.mode = envelope.mode;

  container.appendChild(renderMarkdown(envelope.answer_markdown));

  if (envelope.charts.length > 0) {
    const chartRegion = document.createElement("section");
    chartRegion.className = "charts";
    for (const spec of envelope.charts) {
      chartRegion.appendChild(renderChart(spec));
    }
    container.appendChild(chartRegion);
  }

  container.appendChild(renderTracePanel(envelope.run_id, api));

  attachEntityLookups(container, api);
  return container;
}

function attachEntityLookups(container: HTMLElement, api: ApiClient): void {
  for (const anchor of Array.from(container.querySelectorAll<HTMLAnchorElement>("a.entity-link"))) {
    anchor.addEventListener("click", (event) => {
      event.preventDefault();
      const type = anchor.dataset.entityType ?? "";
      const name = anchor.textContent ?? "";
      void api
        .resolve(name, linkTypeToEntityType(type))
        .then((result) => {
          const existing = anchor.nextElementSibling;
          if (existing?.classList.contains("entity-popup")) {
            existing.remove();
            return;
          }
          const popup = document.createElement("span");
          popup.className = "entity-popup";
          popup.textContent = result.candidates
            .map((c) => `${c.entity.name} (${c.entity.id}, ${c.score.toFixed(2)})`)
            .join(" · ");
          anchor.insertAdjacentElement("afterend", popup);
        })
        .catch(() => {
          /* lookup failures leave the link untouched */
        });
    });
  }
}

export function linkTypeToEntityType(label: string): string {
  return label === "SubjectArea" ? "SUBJECT_AREA" : label.toUpperCase();
}
