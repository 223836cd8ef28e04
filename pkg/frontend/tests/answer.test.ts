import { describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api";
import { linkTypeToEntityType, renderAnswer } from "../src/answer";
import type { AnswerEnvelope } from "../src/types";
import envelopeJson from "./fixtures/figure_envelope.json";

const envelope = envelopeJson as AnswerEnvelope;

function api(): ApiClient {
  return new ApiClient("http://service.test");
}

describe("renderAnswer on the figure-style fixture envelope", () => {
  it("renders tables and the reference section with one link per reference", () => {
    const el = renderAnswer(envelope, api());
    expect(el.querySelector("table.data-table")).not.toBeNull();
    expect(el.querySelectorAll("table.data-table tbody tr")).toHaveLength(5);
    const headings = Array.from(el.querySelectorAll("h3")).map((h) => h.textContent);
    expect(headings).toContain("References");
    // Every reference in the envelope appears as exactly one DOM link.
    const links = el.querySelectorAll("a.entity-link, a.paper-link");
    expect(links).toHaveLength(envelope.references.length);
  });

  it("renders the chart with series lengths matching the spec", () => {
    const el = renderAnswer(envelope, api());
    const bars = el.querySelectorAll("rect.chart-bar");
    expect(bars).toHaveLength(envelope.charts[0]!.x.categories.length);
  });

  it("keeps the trace panel collapsed by default", () => {
    const el = renderAnswer(envelope, api());
    const details = el.querySelector<HTMLDetailsElement>("details.trace-panel");
    expect(details).not.toBeNull();
    expect(details!.open).toBe(false);
  });

  it("displays only numbers that exist verbatim in the envelope", () => {
    const el = renderAnswer(envelope, api());
    const envelopeBlob = JSON.stringify(envelope);
    const walker = document.createTreeWalker(el, NodeFilter.SHOW_TEXT);
    const numbers: string[] = [];
    while (walker.nextNode()) {
      numbers.push(...((walker.currentNode.textContent ?? "").match(/\d+(?:\.\d+)?/g) ?? []));
    }
    expect(numbers.length).toBeGreaterThan(0);
    for (const token of numbers) {
      expect(envelopeBlob, `rendered number ${token} missing from envelope`).toContain(token);
    }
  });

  it("is deterministic: two renders produce identical DOM", () => {
    const first = renderAnswer(envelope, api()).innerHTML;
    const second = renderAnswer(envelope, api()).innerHTML;
    expect(first).toBe(second);
    expect(first).toMatchSnapshot();
  });

  it("renders no chart region when the envelope has no charts", () => {
    const bare: AnswerEnvelope = { ...envelope, charts: [] };
    const el = renderAnswer(bare, api());
    expect(el.querySelector("section.charts")).toBeNull();
  });

  it("entity links resolve through the API on click", async () => {
    const client = api();
    const resolveMock = vi.spyOn(client, "resolve").mockResolvedValue({
      query_name: "Sustainable Energy",
      type: "TOPIC",
      candidates: [
        { entity: { id: "T01", type: "TOPIC", name: "Sustainable Energy" }, score: 1.0 },
      ],
    });
    const el = renderAnswer(envelope, client);
    document.body.appendChild(el);
    const link = Array.from(el.querySelectorAll<HTMLAnchorElement>("a.entity-link")).find(
      (a) => a.dataset.entityId === "T01",
    )!;
    link.click();
    await vi.waitFor(() => {
      expect(el.querySelector(".entity-popup")).not.toBeNull();
    });
    expect(resolveMock).toHaveBeenCalledWith("Sustainable Energy", "TOPIC");
    expect(el.querySelector(".entity-popup")?.textContent).toContain("T01");
    document.body.removeChild(el);
  });
});

describe("linkTypeToEntityType", () => {
  it("maps display labels onto wire entity types", () => {
    expect(linkTypeToEntityType("SubjectArea")).toBe("SUBJECT_AREA");
    expect(linkTypeToEntityType("Author")).toBe("AUTHOR");
    expect(linkTypeToEntityType("SDG")).toBe("SDG");
  });
});
