// Chat session state: ordered question/answer turns, a mode toggle
// that affects only subsequent questions, and a single-flight guard so
// one session never has two answer requests racing.

import type { ApiClient } from "./api";
import type { AnswerEnvelope } from "./types";

export type Mode = "workflow" | "baseline";

export interface Turn {
  question: string;
  mode: Mode;
  envelope: AnswerEnvelope | null; // null while pending or after failure
  error?: string;
}

export class ChatSession {
  readonly turns: Turn[] = [];
  private busy = false;

  constructor(
    private readonly api: ApiClient,
    public mode: Mode = "workflow",
  ) {}

  get inFlight(): boolean {
    return this.busy;
  }

  setMode(mode: Mode): void {
    this.mode = mode; // only future turns pick this up
  }

  async ask(question: string): Promise<Turn> {
    if (this.busy) {
      throw new Error("a question is already in flight for this session");
    }
    const turn: Turn = { question, mode: this.mode, envelope: null };
    this.turns.push(turn);
    this.busy = true;
    try {
      turn.envelope = await this.api.answer(question, turn.mode);
    } catch (err) {
      turn.error = String(err);
    } finally {
      this.busy = false;
    }
    return turn;
  }
}
