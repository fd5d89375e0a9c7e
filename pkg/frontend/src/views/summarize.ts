/** Summarization view: input, model picks, per-model summary cards with
 * overlap highlighting, and the clickable agreement matrix. */

import { defaultReference, viewAgainstReference } from "../agreement.js";
import * as api from "../api.js";
import { buildHighlightModel } from "../overlap.js";
import { PALETTES, paletteById } from "../palettes.js";
import { clear, el, formatScore, renderSegments } from "../render.js";
import { ViewState, setMinN, setReference, setScheme } from "../state.js";
import { SummarizeResponse } from "../types.js";

interface SummarizeViewContext {
  state: ViewState;
  response: SummarizeResponse | null;
  sourceText: string;
}

export function mountSummarizeView(root: HTMLElement, state: ViewState): void {
  const ctx: SummarizeViewContext = { state, response: null, sourceText: "" };

  const textInput = el("textarea", {
    class: "source-input",
    placeholder: "Paste a document, or enter a URL below",
    rows: "8",
  });
  const urlInput = el("input", { type: "url", placeholder: "https://..." });
  const focusInput = el("input", { type: "text", placeholder: "Focus (guided models)" });
  const ratioInput = el("input", {
    type: "number", min: "0.05", max: "1", step: "0.05", value: "0.2",
  });
  const modelsBox = el("div", { class: "model-picks" });
  const submit = el("button", { type: "button" }, ["Summarize"]);
  const status = el("p", { class: "status", role: "status" });
  const results = el("div", { class: "results" });

  const minNSlider = el("input", {
    type: "range", min: "1", max: "10", value: String(ctx.state.overlap.minN),
  });
  const minNLabel = el("span", {}, [String(ctx.state.overlap.minN)]);
  const schemeSelect = el("select", { "aria-label": "Color scheme" });
  for (const palette of PALETTES) {
    schemeSelect.append(el("option", { value: palette.id }, [palette.label]));
  }

  void api.listPlugins("summarizer").then((plugins) => {
    for (const plugin of plugins) {
      const box = el("input", { type: "checkbox", value: plugin.id, id: `pick-${plugin.id}` });
      modelsBox.append(
        el("label", { for: `pick-${plugin.id}` }, [box, ` ${plugin.id} (${plugin.origin})`]),
      );
    }
  }).catch((err: unknown) => {
    status.textContent = `Could not load models: ${String(err)}`;
  });

  minNSlider.addEventListener("input", () => {
    ctx.state = setMinN(ctx.state, Number(minNSlider.value));
    minNLabel.textContent = minNSlider.value;
    redraw();
  });
  schemeSelect.addEventListener("change", () => {
    ctx.state = setScheme(ctx.state, schemeSelect.value);
    redraw();
  });

  submit.addEventListener("click", () => {
    const models = Array.from(
      modelsBox.querySelectorAll<HTMLInputElement>("input:checked"),
    ).map((box) => box.value);
    if (models.length === 0) {
      status.textContent = "Pick at least one model.";
      return;
    }
    const guided = models.includes("biased_textrank");
    if (guided && !focusInput.value.trim()) {
      status.textContent = "Guided models need a focus before submitting.";
      return;
    }
    const request: api.SummarizeRequest = {
      models,
      budget: { mode: "ratio", value: Number(ratioInput.value) },
      overlap: {
        min_n: 1, // fetch everything; the slider filters client-side
        preserve_duplicates: ctx.state.overlap.preserveDuplicates,
        ignore_stopwords: ctx.state.overlap.ignoreStopwords,
      },
    };
    if (focusInput.value.trim()) request.focus = focusInput.value.trim();
    if (textInput.value.trim()) request.text = textInput.value;
    else if (urlInput.value.trim()) request.url = urlInput.value.trim();
    else {
      status.textContent = "Provide a document or a URL.";
      return;
    }
    ctx.sourceText = textInput.value;
    status.textContent = "Summarizing...";
    api.summarize(request).then((response) => {
      ctx.response = response;
      if (response.agreement) {
        ctx.state = setReference(
          ctx.state, defaultReference(response.agreement), response.agreement.models,
        );
      }
      status.textContent = "";
      redraw();
    }).catch((err: unknown) => {
      status.textContent = String(err);
    });
  });

  function redraw(): void {
    clear(results);
    if (!ctx.response) return;
    const palette = paletteById(ctx.state.schemeId);

    for (const result of ctx.response.results) {
      const card = el("article", { class: "summary-card" });
      card.append(el("h3", {}, [result.model]));
      if (result.error !== null || result.summary === null) {
        card.append(el("p", { class: "error" }, [result.error ?? "no summary"]));
      } else {
        const segments = buildHighlightModel(
          result.summary, result.spans, "left", palette, ctx.state.overlap,
        );
        card.append(el("p", { class: "summary-text" }, [renderSegments(segments, palette)]));
      }
      results.append(card);
    }

    const agreement = ctx.response.agreement;
    if (agreement && ctx.state.agreementReference) {
      const view = viewAgainstReference(agreement, ctx.state.agreementReference);
      const table = el("table", { class: "agreement" });
      const header = el("tr", {}, [el("th", {}, ["model"]), el("th", {}, [view.measure])]);
      table.append(header);
      for (const row of view.rows) {
        const pick = el("button", { type: "button", class: "reference-pick" }, [row.model]);
        pick.addEventListener("click", () => {
          ctx.state = setReference(ctx.state, row.model, agreement.models);
          redraw();
        });
        const tr = el("tr", { class: row.isReference ? "is-reference" : "" }, [
          el("td", {}, [pick]),
          el("td", {}, [row.isReference ? "reference" : formatScore(row.score)]),
        ]);
        table.append(tr);
      }
      results.append(el("section", {}, [el("h3", {}, ["Content agreement"]), table]));
    }
  }

  root.append(
    el("section", { class: "panel" }, [
      el("h2", {}, ["Summarize"]),
      textInput,
      el("label", {}, ["URL ", urlInput]),
      el("label", {}, ["Ratio ", ratioInput]),
      el("label", {}, ["Focus ", focusInput]),
      el("div", { class: "controls" }, [
        el("label", {}, ["Min n-gram ", minNSlider, minNLabel]),
        el("label", {}, ["Scheme ", schemeSelect]),
      ]),
      modelsBox,
      submit,
      status,
      results,
    ]),
  );
}
