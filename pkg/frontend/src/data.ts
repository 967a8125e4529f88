/** Payload validation and the ranking math shared with the pipeline core.
 *
 * Relevance is recomputed client-side from the shipped log-probability and
 * log-lift fields as `lambda * log_prob + (1 - lambda) * log_lift`, with
 * the endpoints taken exactly; ties break by term position, which equals
 * vocabulary order because terms arrive sorted. Rankings therefore match
 * the core's output for any lambda, within the shipped term set.
 */

import type { ExplorerState, TermStats, VisData } from "./types";

export const SCHEMA_VERSION = 1;

export class SchemaError extends Error {}

function fail(message: string): never {
  throw new SchemaError(message);
}

function isFiniteNumber(x: unknown): x is number {
  return typeof x === "number" && Number.isFinite(x);
}

function checkPerTopicArray(value: unknown, k: number, label: string): number[] {
  if (!Array.isArray(value) || value.length !== k || !value.every(isFiniteNumber)) {
    fail(`${label} must be an array of ${k} numbers`);
  }
  return value as number[];
}

/** Validate a parsed JSON payload into VisData; throws SchemaError. */
export function parseVisData(raw: unknown): VisData {
  if (typeof raw !== "object" || raw === null) {
    fail("payload is not a JSON object");
  }
  const obj = raw as Record<string, unknown>;
  if (obj.schema_version !== SCHEMA_VERSION) {
    fail(
      `unsupported schema_version ${JSON.stringify(obj.schema_version)}, ` +
      `expected ${SCHEMA_VERSION}`,
    );
  }
  if (typeof obj.question !== "string") fail("question must be a string");
  if (!isFiniteNumber(obj.lambda_default) || obj.lambda_default < 0 || obj.lambda_default > 1) {
    fail("lambda_default must be a number in [0, 1]");
  }
  const stats = obj.corpus_stats as Record<string, unknown> | undefined;
  if (typeof stats !== "object" || stats === null) fail("corpus_stats missing");
  for (const key of ["documents", "answers", "tokens", "vocabulary"]) {
    if (!isFiniteNumber((stats as Record<string, unknown>)[key])) {
      fail(`corpus_stats.${key} missing`);
    }
  }
  if (!Array.isArray(obj.topics) || obj.topics.length === 0) {
    fail("topics must be a non-empty array");
  }
  const k = obj.topics.length;
  for (const t of obj.topics as Record<string, unknown>[]) {
    for (const key of ["id", "display_rank", "proportion", "x", "y"]) {
      if (!isFiniteNumber(t[key])) fail(`topic field ${key} missing`);
    }
  }
  if (!Array.isArray(obj.terms)) fail("terms must be an array");
  for (const t of obj.terms as Record<string, unknown>[]) {
    if (typeof t.term !== "string") fail("term name must be a string");
    if (!isFiniteNumber(t.overall_freq)) fail(`term ${t.term}: overall_freq missing`);
    for (const key of ["est_freq", "log_prob", "log_lift", "conditional"]) {
      checkPerTopicArray(t[key], k, `term ${t.term}: ${key}`);
    }
  }
  return raw as unknown as VisData;
}

export function clampLambda(value: number): number {
  if (!Number.isFinite(value)) return 0;
  return Math.min(1, Math.max(0, value));
}

/** Relevance of one term for one topic at the given blend. */
export function relevance(term: TermStats, topicId: number, lambda: number): number {
  if (lambda === 0) return term.log_lift[topicId];
  if (lambda === 1) return term.log_prob[topicId];
  return lambda * term.log_prob[topicId] + (1 - lambda) * term.log_lift[topicId];
}

/** Indices of all shipped terms, by descending relevance for the topic. */
export function rankTerms(data: VisData, topicId: number, lambda: number): number[] {
  const order = data.terms.map((_, i) => i);
  const scores = data.terms.map((t) => relevance(t, topicId, lambda));
  order.sort((a, b) => (scores[b] - scores[a]) || (a - b));
  return order;
}

export function topTerms(
  data: VisData, topicId: number, lambda: number, limit: number,
): TermStats[] {
  return rankTerms(data, topicId, lambda).slice(0, limit).map((i) => data.terms[i]);
}

/** Terms by overall corpus frequency, for the no-topic-selected view. */
export function byOverallFrequency(data: VisData): TermStats[] {
  const order = data.terms.map((_, i) => i);
  order.sort(
    (a, b) => (data.terms[b].overall_freq - data.terms[a].overall_freq) || (a - b),
  );
  return order.map((i) => data.terms[i]);
}

export function findTerm(data: VisData, name: string): TermStats | null {
  for (const t of data.terms) {
    if (t.term === name) return t;
  }
  return null;
}

export function initialState(data: VisData): ExplorerState {
  return {
    selectedTopic: null,
    selectedTerm: null,
    lambda: clampLambda(data.lambda_default),
  };
}

/** Select a term by name; unknown names leave the state unchanged. */
export function selectTerm(
  state: ExplorerState, data: VisData, name: string | null,
): { state: ExplorerState; message: string | null } {
  if (name === null || state.selectedTerm === name) {
    return { state: { ...state, selectedTerm: null }, message: null };
  }
  if (findTerm(data, name) === null) {
    return { state, message: `unknown term: ${name}` };
  }
  return { state: { ...state, selectedTerm: name }, message: null };
}

export function selectTopic(state: ExplorerState, topicId: number | null): ExplorerState {
  const next = state.selectedTopic === topicId ? null : topicId;
  return { ...state, selectedTopic: next };
}

export function setLambda(state: ExplorerState, value: number): ExplorerState {
  return { ...state, lambda: clampLambda(value) };
}

/** Circle weights for the map: proportions, or P(t|term) when a term is selected. */
export function circleWeights(data: VisData, state: ExplorerState): number[] {
  if (state.selectedTerm !== null) {
    const term = findTerm(data, state.selectedTerm);
    if (term !== null) {
      return data.topics.map((t) => term.conditional[t.id]);
    }
  }
  return data.topics.map((t) => t.proportion);
}
