// Wire-format mirrors of the answer service's JSON payloads.

export interface Reference {
  text: string;
  type: string;
  id: string;
}

export interface ChartSeries {
  label: string;
  values: number[];
}

export interface ChartSpec {
  chart_type: string;
  title: string;
  x: { label: string; categories: string[] };
  series: ChartSeries[];
  source_step_ids: number[];
}

export interface AnswerEnvelope {
  question: string;
  mode: "workflow" | "baseline";
  answer_markdown: string;
  references: Reference[];
  charts: ChartSpec[];
  run_id: string;
  warnings: string[];
  tokens: { prompt: number; completion: number };
  timings?: { wall_clock_ms: number; steps_ms: Record<string, number> };
}

export interface TraceStep {
  step_id: number;
  tool: string;
  assembled_query: string | null;
  status: "ok" | "empty" | "failed";
  error: string | null;
  timing_ms: number;
  warnings: string[];
}

export interface RunTrace {
  mode: string;
  plan: { steps: { id: number; tool: string; subtask: string; depends_on: number[] }[] } | null;
  results: Record<string, TraceStep>;
  wall_clock_ms: number;
  warnings: string[];
}

export interface CorpusStats {
  articles: number;
  entities: Record<string, number>;
}

export interface ResolveCandidate {
  entity: { id: string; type: string; name: string };
  score: number;
}

export interface ResolveResult {
  query_name: string;
  type: string;
  candidates: ResolveCandidate[];
}
