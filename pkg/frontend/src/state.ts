/** Client-side view state with its invariants enforced at the setters. */

import { PALETTES } from "./palettes.js";
import { DEFAULT_OVERLAP, OverlapOptions } from "./overlap.js";

export type ViewName = "summarize" | "evaluate";

export interface ViewState {
  active: ViewName;
  selectedModels: string[];
  selectedMeasures: string[];
  overlap: OverlapOptions;
  /** Exactly one reference model in agreement mode. */
  agreementReference: string | null;
  schemeId: string;
}

export function initialState(): ViewState {
  return {
    active: "summarize",
    selectedModels: [],
    selectedMeasures: [],
    overlap: { ...DEFAULT_OVERLAP },
    agreementReference: null,
    schemeId: PALETTES[0].id,
  };
}

export function setMinN(state: ViewState, minN: number): ViewState {
  return {
    ...state,
    overlap: { ...state.overlap, minN: Math.max(1, Math.floor(minN)) },
  };
}

export function setScheme(state: ViewState, schemeId: string): ViewState {
  if (!PALETTES.some((p) => p.id === schemeId)) {
    throw new Error(`unknown scheme: ${schemeId}`);
  }
  return { ...state, schemeId };
}

export function setReference(state: ViewState, model: string, models: string[]): ViewState {
  if (!models.includes(model)) {
    throw new Error(`reference ${model} is not among the summarized models`);
  }
  return { ...state, agreementReference: model };
}
