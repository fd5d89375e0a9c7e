/** Small DOM helpers plus highlight-segment rendering. */

import { Segment } from "./overlap.js";
import { Palette } from "./palettes.js";

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: Array<Node | string> = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

export function renderSegments(segments: Segment[], palette: Palette): DocumentFragment {
  const fragment = document.createDocumentFragment();
  for (const segment of segments) {
    if (segment.group === null || !segment.color) {
      fragment.append(segment.text);
    } else {
      const mark = el("mark", { class: "overlap", "data-group": String(segment.group) }, [
        segment.text,
      ]);
      mark.style.backgroundColor = segment.color;
      mark.style.color = palette.text;
      fragment.append(mark);
    }
  }
  return fragment;
}

export function formatScore(value: number): string {
  return value.toFixed(4);
}
