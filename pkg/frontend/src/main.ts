/** Entry point: hash routing between the two views, shared view state. */

import { clear, el } from "./render.js";
import { initialState } from "./state.js";
import { mountEvaluateView } from "./views/evaluate.js";
import { mountSummarizeView } from "./views/summarize.js";

function route(): "summarize" | "evaluate" {
  return location.hash === "#/evaluate" ? "evaluate" : "summarize";
}

function main(): void {
  const state = initialState();
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app container");

  const nav = el("nav", {}, [
    el("a", { href: "#/summarize" }, ["Summarize"]),
    " | ",
    el("a", { href: "#/evaluate" }, ["Evaluate"]),
  ]);

  const view = el("div", { class: "view" });
  root.append(nav, view);

  function render(): void {
    clear(view);
    state.active = route();
    if (state.active === "evaluate") mountEvaluateView(view, state);
    else mountSummarizeView(view, state);
  }

  window.addEventListener("hashchange", render);
  render();
}

main();
