/** Pure highlight model: turns a text plus its span pairs into colored
 * segments. All numbers come from the service; the UI only slices. */

import { colorForGroup, Palette } from "./palettes.js";
import { SpanPair } from "./types.js";

export interface OverlapOptions {
  minN: number;
  preserveDuplicates: boolean;
  ignoreStopwords: boolean;
}

export const DEFAULT_OVERLAP: OverlapOptions = {
  minN: 2,
  preserveDuplicates: false,
  ignoreStopwords: false,
};

export interface Segment {
  text: string;
  /** null for unhighlighted stretches. */
  group: number | null;
  color: string | null;
}

/** Client-side slider filter; the service already applied its own min_n,
 * raising the slider past the longest span zeroes the highlights. */
export function filterSpans(spans: SpanPair[], minN: number): SpanPair[] {
  return spans.filter((s) => s.length >= minN);
}

export function maxSpanLength(spans: SpanPair[]): number {
  return spans.reduce((acc, s) => Math.max(acc, s.length), 0);
}

interface CharSpan {
  start: number;
  end: number;
  group: number;
}

function collectCharSpans(spans: SpanPair[], side: "left" | "right"): CharSpan[] {
  const out: CharSpan[] = [];
  for (const pair of spans) {
    if (side === "left") {
      out.push({ start: pair.left.chars[0], end: pair.left.chars[1], group: pair.group });
    } else {
      for (const r of pair.rights) {
        out.push({ start: r.chars[0], end: r.chars[1], group: pair.group });
      }
    }
  }
  return out.sort((a, b) => a.start - b.start || a.end - b.end);
}

function spansValid(text: string, spans: CharSpan[]): boolean {
  let cursor = 0;
  for (const s of spans) {
    if (s.start < cursor || s.end > text.length || s.start >= s.end) return false;
    cursor = s.end;
  }
  return true;
}

/** Segments covering the whole text; on any offset mismatch the text is
 * returned unhighlighted and the problem goes to the console channel. */
export function buildHighlightModel(
  text: string,
  spans: SpanPair[],
  side: "left" | "right",
  palette: Palette,
  options: OverlapOptions = DEFAULT_OVERLAP,
): Segment[] {
  const charSpans = collectCharSpans(filterSpans(spans, options.minN), side);
  if (!spansValid(text, charSpans)) {
    console.error("overlap spans do not fit the text; rendering without highlights");
    return [{ text, group: null, color: null }];
  }
  const segments: Segment[] = [];
  let cursor = 0;
  for (const s of charSpans) {
    if (s.start > cursor) {
      segments.push({ text: text.slice(cursor, s.start), group: null, color: null });
    }
    segments.push({
      text: text.slice(s.start, s.end),
      group: s.group,
      color: colorForGroup(palette, s.group),
    });
    cursor = s.end;
  }
  if (cursor < text.length) {
    segments.push({ text: text.slice(cursor), group: null, color: null });
  }
  return segments;
}

export function highlightedGroupCount(segments: Segment[]): number {
  return new Set(segments.filter((s) => s.group !== null).map((s) => s.group)).size;
}
