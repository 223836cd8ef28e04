// Markdown subset renderer: headings, tables, lists, paragraphs, and
// inline links/bold/code. This is the documented subset the service
// emits; anything else stays literal text. All content lands via
// textContent, never innerHTML.

const ENTITY_LINK_TYPES = new Set([
  "Author",
  "Institution",
  "Venue",
  "Topic",
  "SubjectArea",
  "SDG",
]);

export interface LinkInfo {
  text: string;
  type: string;
  id: string;
}

export function parseLinkTarget(target: string): { type: string; id: string } | null {
  const slash = target.indexOf("/");
  if (slash <= 0) return null;
  const type = target.slice(0, slash);
  const id = target.slice(slash + 1);
  if (!ENTITY_LINK_TYPES.has(type) && type !== "Paper") return null;
  if (!id) return null;
  return { type, id };
}

function renderInline(container: HTMLElement, text: string): void {
  // links first, then bold/code inside the remaining plain segments
  const linkRe = /\[([^\]\n]+)\]\(([^)\s]+)\)/g;
  let last = 0;
  let match: RegExpExecArray | null;
  while ((match = linkRe.exec(text)) !== null) {
    renderEmphasis(container, text.slice(last, match.index));
    appendLink(container, match[1], match[2]);
    last = match.index + match[0].length;
  }
  renderEmphasis(container, text.slice(last));
}

function renderEmphasis(container: HTMLElement, text: string): void {
  const re = /\*\*([^*]+)\*\*|`([^`]+)`/g;
  let last = 0;
  let match: RegExpExecArray | null;
  while ((match = re.exec(text)) !== null) {
    if (match.index > last) {
      container.appendChild(document.createTextNode(text.slice(last, match.index)));
    }
    if (match[1] !== undefined) {
      const strong = document.createElement("strong");
      strong.textContent = match[1];
      container.appendChild(strong);
    } else {
      const code = document.createElement("code");
      code.textContent = match[2] ?? "";
      container.appendChild(code);
    }
    last = match.index + match[0].length;
  }
  if (last < text.length) {
    container.appendChild(document.createTextNode(text.slice(last)));
  }
}

function appendLink(container: HTMLElement, text: string, target: string): void {
  const parsed = parseLinkTarget(target);
  const anchor = document.createElement("a");
  anchor.textContent = text;
  if (parsed && ENTITY_LINK_TYPES.has(parsed.type)) {
    // Entity links deep-link into the resolver endpoint.
    anchor.className = "entity-link";
    anchor.dataset.entityType = parsed.type;
    anchor.dataset.entityId = parsed.id;
    anchor.href = `#entity/${parsed.type}/${parsed.id}`;
  } else if (parsed) {
    anchor.className = "paper-link";
    anchor.dataset.paperId = parsed.id;
    anchor.href = `#paper/${parsed.id}`;
  } else {
    anchor.className = "external-link";
    anchor.href = target;
  }
  container.appendChild(anchor);
}

function isTableSeparator(line: string): boolean {
  const t = line.trim();
  if (!t.startsWith("|")) return false;
  const stripped = t.replace(/[|\s:\-]/g, "");
  return stripped.length === 0 && t.includes("-");
}

function splitRow(line: string): string[] {
  let work = line.trim();
  if (work.startsWith("|")) work = work.slice(1);
  if (work.endsWith("|")) work = work.slice(0, -1);
  return work.split("|").map((cell) => cell.trim());
}

export function renderMarkdown(markdown: string): HTMLElement {
  const root = document.createElement("div");
  root.className = "markdown-body";
  const lines = markdown.replace(/\r\n/g, "\n").split("\n");
  let i = 0;

  while (i < lines.length) {
    const line = lines[i] ?? "";
    const trimmed = line.trim();

    if (trimmed === "") {
      i += 1;
      continue;
    }

    const heading = /^(#{1,6})\s+(.*)$/.exec(trimmed);
    if (heading) {
      const el = document.createElement(`h${heading[1]!.length}`);
      renderInline(el as HTMLElement, heading[2] ?? "");
      root.appendChild(el);
      i += 1;
      continue;
    }

    if (trimmed.startsWith("|") && i + 1 < lines.length && isTableSeparator(lines[i + 1] ?? "")) {
      const table = document.createElement("table");
      table.className = "data-table";
      const thead = document.createElement("thead");
      const headRow = document.createElement("tr");
      for (const cell of splitRow(trimmed)) {
        const th = document.createElement("th");
        renderInline(th, cell);
        headRow.appendChild(th);
      }
      thead.appendChild(headRow);
      table.appendChild(thead);
      const tbody = document.createElement("tbody");
      i += 2;
      while (i < lines.length && (lines[i] ?? "").trim().startsWith("|")) {
        const tr = document.createElement("tr");
        for (const cell of splitRow(lines[i] ?? "")) {
          const td = document.createElement("td");
          renderInline(td, cell);
          tr.appendChild(td);
        }
        tbody.appendChild(tr);
        i += 1;
      }
      table.appendChild(tbody);
      root.appendChild(table);
      continue;
    }

    const unordered = /^[-*]\s+(.*)$/.exec(trimmed);
    const ordered = /^\d+\.\s+(.*)$/.exec(trimmed);
    if (unordered || ordered) {
      const tag = unordered ? "ul" : "ol";
      const list = document.createElement(tag);
      while (i < lines.length) {
        const itemLine = (lines[i] ?? "").trim();
        const item = (unordered ? /^[-*]\s+(.*)$/ : /^\d+\.\s+(.*)$/).exec(itemLine);
        if (!item) break;
        const li = document.createElement("li");
        renderInline(li, item[1] ?? "");
        list.appendChild(li);
        i += 1;
      }
      root.appendChild(list);
      continue;
    }

    const p = document.createElement("p");
    renderInline(p, trimmed);
    root.appendChild(p);
    i += 1;
  }
  return root;
}
