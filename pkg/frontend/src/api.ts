/** Thin typed client for /api/v1. The UI holds no scoring logic: every
 * number rendered traces back to one of these responses. */

import {
  EvaluateResponse,
  ExampleDetail,
  PlotResponse,
  PluginInfo,
  RunDetail,
  SummarizeResponse,
} from "./types.js";

const BASE = "/api/v1";

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // keep the status text
    }
    throw new Error(`HTTP ${response.status}: ${detail}`);
  }
  return response.json() as Promise<T>;
}

export interface SummarizeRequest {
  text?: string;
  url?: string;
  title?: string;
  models: string[];
  budget?: { mode: "ratio" | "sentences" | "words"; value: number };
  focus?: string;
  overlap?: { min_n: number; preserve_duplicates: boolean; ignore_stopwords: boolean };
}

export async function summarize(request: SummarizeRequest): Promise<SummarizeResponse> {
  const response = await fetch(`${BASE}/summarize`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(request),
  });
  return asJson(response);
}

export async function evaluate(file: File, measures: string[]): Promise<EvaluateResponse> {
  const form = new FormData();
  form.append("file", file);
  form.append("measures", measures.join(","));
  const response = await fetch(`${BASE}/evaluate`, { method: "POST", body: form });
  return asJson(response);
}

export async function listPlugins(type?: "summarizer" | "measure"): Promise<PluginInfo[]> {
  const qs = type ? `?type=${type}` : "";
  return asJson(await fetch(`${BASE}/plugins${qs}`));
}

export async function listRuns(): Promise<string[]> {
  const body = await asJson<{ runs: string[] }>(await fetch(`${BASE}/runs`));
  return body.runs;
}

export async function runDetail(runId: string): Promise<RunDetail> {
  return asJson(await fetch(`${BASE}/runs/${encodeURIComponent(runId)}`));
}

export async function runPlot(
  runId: string,
  model: string,
  x: string,
  y: string,
  bins = 10,
): Promise<PlotResponse> {
  const qs = new URLSearchParams({ model, x, y, bins: String(bins) });
  return asJson(await fetch(`${BASE}/runs/${encodeURIComponent(runId)}/plot?${qs}`));
}

export async function runExample(
  runId: string,
  exampleId: number,
  minN = 2,
): Promise<ExampleDetail> {
  const qs = new URLSearchParams({ min_n: String(minN) });
  return asJson(
    await fetch(`${BASE}/runs/${encodeURIComponent(runId)}/examples/${exampleId}?${qs}`),
  );
}

export function exportUrl(runId: string, format: "csv" | "latex"): string {
  return `${BASE}/runs/${encodeURIComponent(runId)}/export?format=${format}`;
}
