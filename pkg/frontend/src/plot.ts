/** Plot selection model: brushing picks example ids, the detail panel
 * fetches each selected example's texts. Stale responses are discarded by
 * request sequence numbers. */

import { ExampleDetail, PlotPoint } from "./types.js";

export interface BrushRegion {
  x0: number;
  x1: number;
  y0: number;
  y1: number;
}

export interface PlotSelection {
  x: string;
  y: string;
  brush: BrushRegion | null;
  selected: number[];
}

function normalize(region: BrushRegion): BrushRegion {
  return {
    x0: Math.min(region.x0, region.x1),
    x1: Math.max(region.x0, region.x1),
    y0: Math.min(region.y0, region.y1),
    y1: Math.max(region.y0, region.y1),
  };
}

/** Ids of the points inside the brushed region (inclusive bounds).
 * A null brush clears the selection. */
export function brushSelect(points: PlotPoint[], brush: BrushRegion | null): number[] {
  if (!brush) return [];
  const r = normalize(brush);
  return points
    .filter((p) => p.x >= r.x0 && p.x <= r.x1 && p.y >= r.y0 && p.y <= r.y1)
    .map((p) => p.example_id);
}

/** Enforce the invariant that selected ids are a subset of plotted ids. */
export function clampSelection(selection: number[], points: PlotPoint[]): number[] {
  const plotted = new Set(points.map((p) => p.example_id));
  return selection.filter((id) => plotted.has(id));
}

export interface DetailEntry {
  exampleId: number;
  document: string;
  reference: string;
  candidates: Record<string, string>;
}

export interface DetailPanel {
  entries: DetailEntry[];
}

export type ExampleFetcher = (exampleId: number) => Promise<ExampleDetail>;

/** Request sequencing so a slow earlier response can never overwrite a
 * newer one. */
export function makeSequencer(): { next: () => number; isCurrent: (seq: number) => boolean } {
  let counter = 0;
  return {
    next: () => ++counter,
    isCurrent: (seq: number) => seq === counter,
  };
}

/** Build the linked detail panel for the current selection; an empty
 * selection yields an empty panel (the cleared state). */
export async function buildDetailPanel(
  selected: number[],
  fetcher: ExampleFetcher,
): Promise<DetailPanel> {
  const entries = await Promise.all(
    selected.map(async (id) => {
      const detail = await fetcher(id);
      const candidates: Record<string, string> = {};
      for (const [model, candidate] of Object.entries(detail.candidates)) {
        candidates[model] = candidate.text;
      }
      return {
        exampleId: detail.example_id,
        document: detail.document,
        reference: detail.reference,
        candidates,
      };
    }),
  );
  return { entries };
}
