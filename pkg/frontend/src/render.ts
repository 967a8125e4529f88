/** SVG and panel rendering: pure functions of (data, state). */

import { byOverallFrequency, circleWeights, findTerm, topTerms } from "./data";
import type { ExplorerState, TermStats, VisData } from "./types";

const SVG_NS = "http://www.w3.org/2000/svg";
const MAP_SIZE = 460;
const MAP_PAD = 60;
const TERM_LIMIT = 30;
const BAR_WIDTH = 240;

export interface Handlers {
  onSelectTopic(topicId: number): void;
  onSelectTerm(term: string): void;
  onLambda(value: number): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document, tag: K, className?: string, text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function svgEl(doc: Document, tag: string, attrs: Record<string, string>): Element {
  const node = doc.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  return node;
}

function formatPercent(p: number): string {
  return (p * 100).toFixed(1) + "%";
}

function renderHeader(doc: Document, data: VisData): HTMLElement {
  const header = el(doc, "header", "header");
  header.appendChild(el(doc, "h1", "title", "Topic explorer"));
  header.appendChild(el(doc, "p", "question", data.question));
  const s = data.corpus_stats;
  header.appendChild(el(
    doc, "p", "corpus-stats",
    `${s.documents} documents, ${s.answers} answers, ` +
    `${s.tokens} tokens, ${s.vocabulary} terms`,
  ));
  return header;
}

function renderLambdaControl(
  doc: Document, state: ExplorerState, handlers: Handlers,
): HTMLElement {
  const wrap = el(doc, "div", "lambda-control");
  const label = el(doc, "label", "lambda-label",
    `relevance blend λ = ${state.lambda.toFixed(2)} `);
  const slider = el(doc, "input", "lambda-slider") as HTMLInputElement;
  slider.type = "range";
  slider.min = "0";
  slider.max = "1";
  slider.step = "0.01";
  slider.value = String(state.lambda);
  slider.id = "lambda-slider";
  slider.addEventListener("input", () => handlers.onLambda(Number(slider.value)));
  label.htmlFor = slider.id;
  wrap.appendChild(label);
  wrap.appendChild(slider);
  wrap.appendChild(el(
    doc, "span", "lambda-hint",
    "λ=1 ranks by in-topic probability, λ=0 by lift",
  ));
  return wrap;
}

function renderMap(
  doc: Document, data: VisData, state: ExplorerState, handlers: Handlers,
): HTMLElement {
  const panel = el(doc, "section", "map-panel");
  panel.appendChild(el(doc, "h2", undefined, "Intertopic distance map"));
  const svg = svgEl(doc, "svg", {
    viewBox: `0 0 ${MAP_SIZE} ${MAP_SIZE}`,
    width: String(MAP_SIZE),
    height: String(MAP_SIZE),
    class: "topic-map",
    role: "img",
  });

  const xs = data.topics.map((t) => t.x);
  const ys = data.topics.map((t) => t.y);
  const extent = Math.max(
    0.05,
    ...xs.map(Math.abs),
    ...ys.map(Math.abs),
  );
  const scale = (MAP_SIZE / 2 - MAP_PAD) / extent;
  const weights = circleWeights(data, state);
  const maxWeight = Math.max(1e-12, ...weights);
  const maxRadius = MAP_PAD * 0.9;

  svg.appendChild(svgEl(doc, "line", {
    x1: "0", y1: String(MAP_SIZE / 2), x2: String(MAP_SIZE),
    y2: String(MAP_SIZE / 2), class: "axis",
  }));
  svg.appendChild(svgEl(doc, "line", {
    x1: String(MAP_SIZE / 2), y1: "0", x2: String(MAP_SIZE / 2),
    y2: String(MAP_SIZE), class: "axis",
  }));

  data.topics.forEach((topic, i) => {
    const cx = MAP_SIZE / 2 + topic.x * scale;
    const cy = MAP_SIZE / 2 - topic.y * scale;
    // circle area tracks the weight
    const radius = maxRadius * Math.sqrt(weights[i] / maxWeight);
    const group = svgEl(doc, "g", {
      class: "topic-circle"
        + (state.selectedTopic === topic.id ? " selected" : "")
        + (weights[i] <= 1e-9 ? " empty" : ""),
      "data-topic-id": String(topic.id),
    });
    group.appendChild(svgEl(doc, "circle", {
      cx: String(cx), cy: String(cy), r: String(Math.max(radius, 2)),
    }));
    const label = svgEl(doc, "text", {
      x: String(cx), y: String(cy), class: "topic-label",
      "text-anchor": "middle", dy: "0.35em",
    });
    label.textContent = String(topic.display_rank);
    group.appendChild(label);
    group.appendChild(svgEl(doc, "title", {})).textContent =
      `topic ${topic.display_rank}: ${formatPercent(topic.proportion)} of tokens`;
    group.addEventListener("click", () => handlers.onSelectTopic(topic.id));
    svg.appendChild(group);
  });
  panel.appendChild(svg);
  const caption = state.selectedTerm === null
    ? "circle area ∝ share of corpus tokens"
    : `circle area ∝ P(topic | “${state.selectedTerm}”)`;
  panel.appendChild(el(doc, "p", "map-caption", caption));
  return panel;
}

function renderTermRow(
  doc: Document, state: ExplorerState, handlers: Handlers,
  term: TermStats, maxOverall: number,
): HTMLElement {
  const row = el(doc, "li", "term-row"
    + (state.selectedTerm === term.term ? " selected" : ""));
  row.setAttribute("data-term", term.term);
  const name = el(doc, "span", "term-name", term.term);
  row.appendChild(name);

  const bars = el(doc, "span", "term-bars");
  const overallWidth = BAR_WIDTH * term.overall_freq / maxOverall;
  const overall = el(doc, "span", "bar overall-bar");
  overall.style.width = `${overallWidth.toFixed(1)}px`;
  overall.title = `overall frequency: ${term.overall_freq}`;
  bars.appendChild(overall);
  if (state.selectedTopic !== null) {
    const within = term.est_freq[state.selectedTopic];
    const withinWidth = BAR_WIDTH * within / maxOverall;
    const red = el(doc, "span", "bar within-bar");
    red.style.width = `${withinWidth.toFixed(1)}px`;
    red.title = `estimated frequency within topic: ${within.toFixed(1)}`;
    bars.appendChild(red);
  }
  row.appendChild(bars);
  row.addEventListener("click", () => handlers.onSelectTerm(term.term));
  return row;
}

function renderTermPanel(
  doc: Document, data: VisData, state: ExplorerState, handlers: Handlers,
): HTMLElement {
  const panel = el(doc, "section", "term-panel");
  const selected = data.topics.find((t) => t.id === state.selectedTopic);
  const heading = selected === undefined
    ? "Most frequent terms (select a topic circle)"
    : `Top terms of topic ${selected.display_rank} `
      + `(${formatPercent(selected.proportion)} of tokens)`;
  panel.appendChild(el(doc, "h2", undefined, heading));

  const terms = selected === undefined
    ? byOverallFrequency(data).slice(0, TERM_LIMIT)
    : topTerms(data, selected.id, state.lambda, TERM_LIMIT);
  if (terms.length === 0) {
    panel.appendChild(el(doc, "p", "no-terms", "no terms"));
    return panel;
  }
  const maxOverall = Math.max(1, ...terms.map((t) => t.overall_freq));
  const list = el(doc, "ul", "term-list");
  for (const term of terms) {
    list.appendChild(renderTermRow(doc, state, handlers, term, maxOverall));
  }
  panel.appendChild(list);
  const legend = el(doc, "p", "bar-legend");
  legend.appendChild(el(doc, "span", "bar overall-bar legend-swatch"));
  legend.appendChild(doc.createTextNode(" overall frequency "));
  if (selected !== undefined) {
    legend.appendChild(el(doc, "span", "bar within-bar legend-swatch"));
    legend.appendChild(doc.createTextNode(" estimated frequency within topic"));
  }
  panel.appendChild(legend);
  return panel;
}

function renderConditionalPanel(
  doc: Document, data: VisData, state: ExplorerState,
): HTMLElement | null {
  if (state.selectedTerm === null) return null;
  const term = findTerm(data, state.selectedTerm);
  if (term === null) return null;
  const panel = el(doc, "section", "conditional-panel");
  panel.appendChild(el(
    doc, "h2", undefined, `Conditional topic distribution: “${term.term}”`,
  ));
  const list = el(doc, "ul", "conditional-list");
  for (const topic of data.topics) {
    const p = term.conditional[topic.id];
    const row = el(doc, "li", "conditional-row");
    row.appendChild(el(doc, "span", "conditional-topic",
      `topic ${topic.display_rank}`));
    const bar = el(doc, "span", "bar conditional-bar");
    bar.style.width = `${(BAR_WIDTH * p).toFixed(1)}px`;
    row.appendChild(bar);
    row.appendChild(el(doc, "span", "conditional-value", formatPercent(p)));
    list.appendChild(row);
  }
  panel.appendChild(list);
  return panel;
}

/** Rebuild the whole app view; cheap for the data sizes involved. */
export function renderApp(
  root: HTMLElement, data: VisData, state: ExplorerState,
  handlers: Handlers, message: string | null = null,
): void {
  const doc = root.ownerDocument;
  root.textContent = "";
  root.appendChild(renderHeader(doc, data));
  root.appendChild(renderLambdaControl(doc, state, handlers));
  if (message !== null) {
    root.appendChild(el(doc, "p", "status-message", message));
  }
  if (data.topics.length === 1) {
    root.appendChild(el(
      doc, "p", "single-topic-note",
      "Only one topic was fitted; the distance map collapses to a single point.",
    ));
  }
  const main = el(doc, "div", "panels");
  main.appendChild(renderMap(doc, data, state, handlers));
  main.appendChild(renderTermPanel(doc, data, state, handlers));
  const conditional = renderConditionalPanel(doc, data, state);
  if (conditional !== null) {
    main.appendChild(conditional);
  }
  root.appendChild(main);
}

/** Replace the app contents with a visible error panel. */
export function renderError(root: HTMLElement, message: string): void {
  const doc = root.ownerDocument;
  root.textContent = "";
  const panel = el(doc, "div", "error-panel");
  panel.appendChild(el(doc, "h1", undefined, "Cannot display this report"));
  panel.appendChild(el(doc, "p", "error-message", message));
  root.appendChild(panel);
}
