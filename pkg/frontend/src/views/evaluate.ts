/** Evaluation view: dataset upload, aggregate table, the interactive
 * scatter plot with brush selection, and the linked detail panel. */

import * as api from "../api.js";
import { buildHighlightModel } from "../overlap.js";
import { paletteById } from "../palettes.js";
import {
  BrushRegion,
  PlotSelection,
  brushSelect,
  buildDetailPanel,
  clampSelection,
  makeSequencer,
} from "../plot.js";
import { clear, el, formatScore, renderSegments } from "../render.js";
import { ViewState } from "../state.js";
import { ExampleDetail, PlotResponse, RunDetail } from "../types.js";

const PLOT_W = 420;
const PLOT_H = 300;
const PAD = 36;

export function mountEvaluateView(root: HTMLElement, state: ViewState): void {
  let run: RunDetail | null = null;
  let plot: PlotResponse | null = null;
  let selection: PlotSelection = { x: "", y: "", brush: null, selected: [] };
  const sequencer = makeSequencer();

  const fileInput = el("input", { type: "file", accept: ".jsonl,application/jsonl" });
  const measuresInput = el("input", { type: "text", value: "rouge,bleu" });
  const submit = el("button", { type: "button" }, ["Evaluate"]);
  const status = el("p", { class: "status", role: "status" });
  const aggregates = el("div", { class: "aggregates" });
  const modelSelect = el("select", { "aria-label": "Model" });
  const xSelect = el("select", { "aria-label": "X measure" });
  const ySelect = el("select", { "aria-label": "Y measure" });
  const plotHost = el("div", { class: "plot-host" });
  const detailHost = el("div", { class: "detail-panel" });
  const exportLinks = el("p", { class: "exports" });

  submit.addEventListener("click", () => {
    const file = fileInput.files?.[0];
    if (!file) {
      status.textContent = "Choose a JSONL dataset first.";
      return;
    }
    const measures = measuresInput.value.split(",").map((m) => m.trim()).filter(Boolean);
    status.textContent = "Scoring...";
    api.evaluate(file, measures).then(async (response) => {
      run = await api.runDetail(response.run_id);
      status.textContent = `Run ${run.run_id} scored.`;
      renderRun();
    }).catch((err: unknown) => {
      status.textContent = String(err);
    });
  });

  function subScores(detail: RunDetail): string[] {
    const names = new Set<string>();
    for (const bucket of Object.values(detail.aggregates)) {
      for (const name of Object.keys(bucket)) names.add(name);
    }
    return Array.from(names).sort();
  }

  function renderRun(): void {
    if (!run) return;
    clear(aggregates);
    const columns = subScores(run);
    const table = el("table", { class: "aggregate-table" });
    table.append(el("tr", {}, [
      el("th", {}, ["model"]),
      ...columns.map((c) => el("th", {}, [c])),
    ]));
    for (const model of run.models) {
      table.append(el("tr", {}, [
        el("td", {}, [model]),
        ...columns.map((c) => {
          const value = run!.aggregates[model]?.[c];
          return el("td", {}, [value === undefined ? "-" : formatScore(value)]);
        }),
      ]));
    }
    aggregates.append(table);

    clear(exportLinks);
    exportLinks.append(
      el("a", { href: api.exportUrl(run.run_id, "csv"), download: "" }, ["CSV"]),
      " | ",
      el("a", { href: api.exportUrl(run.run_id, "latex"), download: "" }, ["LaTeX"]),
    );

    for (const select of [modelSelect, xSelect, ySelect]) clear(select);
    for (const model of run.models) {
      modelSelect.append(el("option", { value: model }, [model]));
    }
    for (const name of columns) {
      xSelect.append(el("option", { value: name }, [name]));
      ySelect.append(el("option", { value: name }, [name]));
    }
    if (columns.length > 1) (ySelect as HTMLSelectElement).selectedIndex = 1;
    refreshPlot();
  }

  function refreshPlot(): void {
    if (!run) return;
    const seq = sequencer.next();
    const model = (modelSelect as HTMLSelectElement).value;
    const x = (xSelect as HTMLSelectElement).value;
    const y = (ySelect as HTMLSelectElement).value;
    api.runPlot(run.run_id, model, x, y).then((response) => {
      if (!sequencer.isCurrent(seq)) return; // stale response discarded
      plot = response;
      // axis change clears the selection
      selection = { x, y, brush: null, selected: [] };
      renderPlot();
      void renderDetail();
    }).catch((err: unknown) => {
      if (sequencer.isCurrent(seq)) status.textContent = String(err);
    });
  }

  for (const select of [modelSelect, xSelect, ySelect]) {
    select.addEventListener("change", refreshPlot);
  }

  function scale(value: number, lo: number, hi: number, size: number): number {
    if (hi === lo) return size / 2;
    return ((value - lo) / (hi - lo)) * size;
  }

  function renderPlot(): void {
    clear(plotHost);
    if (!plot) return;
    const xs = plot.points.map((p) => p.x);
    const ys = plot.points.map((p) => p.y);
    const [xLo, xHi] = [Math.min(...xs, 0), Math.max(...xs, 1e-9)];
    const [yLo, yHi] = [Math.min(...ys, 0), Math.max(...ys, 1e-9)];

    const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    svg.setAttribute("viewBox", `0 0 ${PLOT_W + PAD * 2} ${PLOT_H + PAD * 2}`);
    svg.setAttribute("class", "scatter");

    const toPx = (p: { x: number; y: number }) => ({
      px: PAD + scale(p.x, xLo, xHi, PLOT_W),
      py: PAD + PLOT_H - scale(p.y, yLo, yHi, PLOT_H),
    });

    for (const point of plot.points) {
      const { px, py } = toPx(point);
      const dot = document.createElementNS("http://www.w3.org/2000/svg", "circle");
      dot.setAttribute("cx", String(px));
      dot.setAttribute("cy", String(py));
      dot.setAttribute("r", "4");
      dot.setAttribute(
        "class",
        selection.selected.includes(point.example_id) ? "dot selected" : "dot",
      );
      dot.setAttribute("data-example", String(point.example_id));
      svg.append(dot);
    }

    let dragStart: { px: number; py: number } | null = null;
    const rect = document.createElementNS("http://www.w3.org/2000/svg", "rect");
    rect.setAttribute("class", "brush");
    rect.setAttribute("visibility", "hidden");
    svg.append(rect);

    const toData = (px: number, py: number) => ({
      x: xLo + ((px - PAD) / PLOT_W) * (xHi - xLo),
      y: yLo + ((PAD + PLOT_H - py) / PLOT_H) * (yHi - yLo),
    });

    svg.addEventListener("pointerdown", (event) => {
      const bounds = svg.getBoundingClientRect();
      dragStart = { px: event.clientX - bounds.left, py: event.clientY - bounds.top };
    });
    svg.addEventListener("pointermove", (event) => {
      if (!dragStart) return;
      const bounds = svg.getBoundingClientRect();
      const px = event.clientX - bounds.left;
      const py = event.clientY - bounds.top;
      rect.setAttribute("visibility", "visible");
      rect.setAttribute("x", String(Math.min(px, dragStart.px)));
      rect.setAttribute("y", String(Math.min(py, dragStart.py)));
      rect.setAttribute("width", String(Math.abs(px - dragStart.px)));
      rect.setAttribute("height", String(Math.abs(py - dragStart.py)));
    });
    svg.addEventListener("pointerup", (event) => {
      if (!dragStart || !plot) return;
      const bounds = svg.getBoundingClientRect();
      const a = toData(dragStart.px, dragStart.py);
      const b = toData(event.clientX - bounds.left, event.clientY - bounds.top);
      dragStart = null;
      rect.setAttribute("visibility", "hidden");
      const brush: BrushRegion = { x0: a.x, x1: b.x, y0: a.y, y1: b.y };
      selection = {
        ...selection,
        brush,
        selected: clampSelection(brushSelect(plot.points, brush), plot.points),
      };
      renderPlot();
      void renderDetail();
    });

    plotHost.append(svg);
    renderHistogram(plotHost, "x", plot.histogram_x.counts);
    renderHistogram(plotHost, "y", plot.histogram_y.counts);
    if (plot.pearson !== null && plot.spearman !== null) {
      plotHost.append(el("p", { class: "correlations" }, [
        `pearson ${plot.pearson.toFixed(4)}, spearman ${plot.spearman.toFixed(4)}`,
      ]));
    }
  }

  function renderHistogram(host: HTMLElement, axis: string, counts: number[]): void {
    const peak = Math.max(...counts, 1);
    const bars = el("div", { class: `histogram histogram-${axis}` });
    for (const count of counts) {
      const bar = el("div", { class: "bar", title: String(count) });
      bar.style.height = `${(count / peak) * 40}px`;
      bars.append(bar);
    }
    host.append(bars);
  }

  async function renderDetail(): Promise<void> {
    clear(detailHost);
    if (!run) return;
    if (selection.selected.length === 0) {
      detailHost.append(el("p", { class: "empty" }, ["Brush the plot to inspect examples."]));
      return;
    }
    const palette = paletteById(state.schemeId);
    const fetcher = (id: number): Promise<ExampleDetail> =>
      api.runExample(run!.run_id, id, state.overlap.minN);
    const panel = await buildDetailPanel(selection.selected, fetcher);
    for (const entry of panel.entries) {
      const section = el("section", { class: "example-detail" });
      section.append(el("h4", {}, [`Example ${entry.exampleId}`]));
      section.append(el("p", { class: "doc" }, [entry.document]));
      section.append(el("p", { class: "ref" }, [`Reference: ${entry.reference}`]));
      const detail = await fetcher(entry.exampleId);
      for (const [model, candidate] of Object.entries(detail.candidates)) {
        const segments = buildHighlightModel(
          candidate.text, candidate.spans_vs_reference, "left", palette, state.overlap,
        );
        section.append(el("p", { class: "candidate" }, [
          `${model}: `, renderSegments(segments, palette),
        ]));
      }
      detailHost.append(section);
    }
  }

  root.append(
    el("section", { class: "panel" }, [
      el("h2", {}, ["Evaluate"]),
      el("label", {}, ["Dataset ", fileInput]),
      el("label", {}, ["Measures ", measuresInput]),
      submit,
      status,
      aggregates,
      exportLinks,
      el("div", { class: "plot-controls" }, [
        el("label", {}, ["Model ", modelSelect]),
        el("label", {}, ["X ", xSelect]),
        el("label", {}, ["Y ", ySelect]),
      ]),
      plotHost,
      detailHost,
    ]),
  );
}
