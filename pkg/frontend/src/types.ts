/** Wire types mirroring the /api/v1 payloads. */

export interface SpanSide {
  tokens: [number, number];
  chars: [number, number];
}

export interface SpanPair {
  group: number;
  length: number;
  left: SpanSide;
  rights: SpanSide[];
}

export interface SummarizeResult {
  model: string;
  summary: string | null;
  selected: number[] | null;
  spans: SpanPair[];
  error: string | null;
}

export interface Agreement {
  models: string[];
  matrix: number[][];
  measure: string;
}

export interface SummarizeResponse {
  results: SummarizeResult[];
  agreement: Agreement | null;
}

export interface PluginInfo {
  id: string;
  origin: "builtin" | "remote";
  manifest: {
    name: string;
    type: "summarizer" | "measure";
    version: string;
    source: string;
    citation: string;
    arguments: Array<{
      name: string;
      kind: string;
      default: unknown;
      choices?: unknown[];
      min?: number;
      max?: number;
    }>;
  };
}

export interface EvaluateResponse {
  run_id: string;
  measures: string[];
  aggregates: Record<string, Record<string, number>>;
  errors: Array<Record<string, unknown>>;
}

export interface RunDetail {
  run_id: string;
  created: string;
  measures: string[];
  models: string[];
  aggregates: Record<string, Record<string, number>>;
  example_ids: number[];
  errors: Array<Record<string, unknown>>;
}

export interface PlotPoint {
  example_id: number;
  x: number;
  y: number;
}

export interface Histogram {
  edges: number[];
  counts: number[];
}

export interface PlotResponse {
  model: string;
  x: string;
  y: string;
  points: PlotPoint[];
  histogram_x: Histogram;
  histogram_y: Histogram;
  pearson: number | null;
  spearman: number | null;
}

export interface ExampleDetail {
  example_id: number;
  document: string;
  reference: string;
  candidates: Record<string, { text: string; spans_vs_reference: SpanPair[] }>;
  scores: Record<string, Record<string, number>>;
}
