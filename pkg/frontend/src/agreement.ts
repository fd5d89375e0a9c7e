/** Agreement matrix view model: one summary acts as the reference and
 * every other summary is read against it. All scores come straight from
 * the service's matrix; re-referencing is a column lookup, not a re-fetch. */

import { Agreement } from "./types.js";

export interface AgreementRow {
  model: string;
  /** Content agreement of this model's summary against the reference. */
  score: number;
  isReference: boolean;
}

export interface AgreementView {
  measure: string;
  reference: string;
  rows: AgreementRow[];
}

/** Rows for the given reference selection. The matrix is oriented
 * candidate-row by reference-column, so picking summary j as reference
 * reads column j. */
export function viewAgainstReference(agreement: Agreement, reference: string): AgreementView {
  const j = agreement.models.indexOf(reference);
  if (j < 0) {
    throw new Error(`reference ${reference} is not among the models`);
  }
  const rows = agreement.models.map((model, i) => ({
    model,
    score: agreement.matrix[i][j],
    isReference: i === j,
  }));
  return { measure: agreement.measure, reference, rows };
}

export function defaultReference(agreement: Agreement): string {
  return agreement.models[0];
}
