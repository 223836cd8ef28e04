// Page wiring: corpus banner, question form, mode toggle, answer feed.

import { ApiClient } from "./api";
import { renderAnswer } from "./answer";
import { ChatSession, type Mode } from "./session";

export function mountApp(root: HTMLElement, api: ApiClient = new ApiClient()): ChatSession {
  const session = new ChatSession(api);

  const banner = document.createElement("header");
  banner.className = "corpus-banner";
  banner.textContent = "connecting…";
  root.appendChild(banner);
  void api
    .health()
    .then(({ corpus }) => {
      const entityBits = Object.entries(corpus.entities)
        .map(([type, count]) => `${count} ${type.toLowerCase()}s`)
        .join(", ");
      banner.textContent = `corpus: ${corpus.articles} articles — ${entityBits}`;
    })
    .catch(() => {
      banner.textContent = "service unreachable";
    });

  const feed = document.createElement("main");
  feed.className = "feed";
  root.appendChild(feed);

  const form = document.createElement("form");
  form.className = "ask-form";
  const input = document.createElement("input");
  input.type = "text";
  input.placeholder = "Ask about authors, institutions, topics…";
  input.className = "question-input";
  const modeToggle = document.createElement("select");
  modeToggle.className = "mode-toggle";
  for (const mode of ["workflow", "baseline"] as const) {
    const option = document.createElement("option");
    option.value = mode;
    option.textContent = mode;
    modeToggle.appendChild(option);
  }
  modeToggle.addEventListener("change", () => session.setMode(modeToggle.value as Mode));
  const button = document.createElement("button");
  button.type = "submit";
  button.textContent = "Ask";
  form.append(input, modeToggle, button);
  root.appendChild(form);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const question = input.value.trim();
    if (!question || session.inFlight) return;
    input.value = "";
    button.disabled = true;

    const turnEl = document.createElement("section");
    turnEl.className = "turn";
    const q = document.createElement("p");
    q.className = "question";
    q.textContent = `${question} [${session.mode}]`;
    turnEl.appendChild(q);
    feed.appendChild(turnEl);

    void session.ask(question).then((turn) => {
      button.disabled = false;
      if (turn.envelope) {
        turnEl.appendChild(renderAnswer(turn.envelope, api));
      } else {
        const failure = document.createElement("p");
        failure.className = "answer-error";
        failure.textContent = turn.error ?? "request failed";
        turnEl.appendChild(failure);
      }
    });
  });

  return session;
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  mountApp(document.getElementById("app")!);
}
