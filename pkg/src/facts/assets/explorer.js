"use strict";
(() => {
  // src/data.ts
  var SCHEMA_VERSION = 1;
  var SchemaError = class extends Error {
  };
  function fail(message) {
    throw new SchemaError(message);
  }
  function isFiniteNumber(x) {
    return typeof x === "number" && Number.isFinite(x);
  }
  function checkPerTopicArray(value, k, label) {
    if (!Array.isArray(value) || value.length !== k || !value.every(isFiniteNumber)) {
      fail(`${label} must be an array of ${k} numbers`);
    }
    return value;
  }
  function parseVisData(raw) {
    if (typeof raw !== "object" || raw === null) {
      fail("payload is not a JSON object");
    }
    const obj = raw;
    if (obj.schema_version !== SCHEMA_VERSION) {
      fail(
        `unsupported schema_version ${JSON.stringify(obj.schema_version)}, expected ${SCHEMA_VERSION}`
      );
    }
    if (typeof obj.question !== "string") fail("question must be a string");
    if (!isFiniteNumber(obj.lambda_default) || obj.lambda_default < 0 || obj.lambda_default > 1) {
      fail("lambda_default must be a number in [0, 1]");
    }
    const stats = obj.corpus_stats;
    if (typeof stats !== "object" || stats === null) fail("corpus_stats missing");
    for (const key of ["documents", "answers", "tokens", "vocabulary"]) {
      if (!isFiniteNumber(stats[key])) {
        fail(`corpus_stats.${key} missing`);
      }
    }
    if (!Array.isArray(obj.topics) || obj.topics.length === 0) {
      fail("topics must be a non-empty array");
    }
    const k = obj.topics.length;
    for (const t of obj.topics) {
      for (const key of ["id", "display_rank", "proportion", "x", "y"]) {
        if (!isFiniteNumber(t[key])) fail(`topic field ${key} missing`);
      }
    }
    if (!Array.isArray(obj.terms)) fail("terms must be an array");
    for (const t of obj.terms) {
      if (typeof t.term !== "string") fail("term name must be a string");
      if (!isFiniteNumber(t.overall_freq)) fail(`term ${t.term}: overall_freq missing`);
      for (const key of ["est_freq", "log_prob", "log_lift", "conditional"]) {
        checkPerTopicArray(t[key], k, `term ${t.term}: ${key}`);
      }
    }
    return raw;
  }
  function clampLambda(value) {
    if (!Number.isFinite(value)) return 0;
    return Math.min(1, Math.max(0, value));
  }
  function relevance(term, topicId, lambda) {
    if (lambda === 0) return term.log_lift[topicId];
    if (lambda === 1) return term.log_prob[topicId];
    return lambda * term.log_prob[topicId] + (1 - lambda) * term.log_lift[topicId];
  }
  function rankTerms(data, topicId, lambda) {
    const order = data.terms.map((_, i) => i);
    const scores = data.terms.map((t) => relevance(t, topicId, lambda));
    order.sort((a, b) => scores[b] - scores[a] || a - b);
    return order;
  }
  function topTerms(data, topicId, lambda, limit) {
    return rankTerms(data, topicId, lambda).slice(0, limit).map((i) => data.terms[i]);
  }
  function byOverallFrequency(data) {
    const order = data.terms.map((_, i) => i);
    order.sort(
      (a, b) => data.terms[b].overall_freq - data.terms[a].overall_freq || a - b
    );
    return order.map((i) => data.terms[i]);
  }
  function findTerm(data, name) {
    for (const t of data.terms) {
      if (t.term === name) return t;
    }
    return null;
  }
  function initialState(data) {
    return {
      selectedTopic: null,
      selectedTerm: null,
      lambda: clampLambda(data.lambda_default)
    };
  }
  function selectTerm(state, data, name) {
    if (name === null || state.selectedTerm === name) {
      return { state: { ...state, selectedTerm: null }, message: null };
    }
    if (findTerm(data, name) === null) {
      return { state, message: `unknown term: ${name}` };
    }
    return { state: { ...state, selectedTerm: name }, message: null };
  }
  function selectTopic(state, topicId) {
    const next = state.selectedTopic === topicId ? null : topicId;
    return { ...state, selectedTopic: next };
  }
  function setLambda(state, value) {
    return { ...state, lambda: clampLambda(value) };
  }
  function circleWeights(data, state) {
    if (state.selectedTerm !== null) {
      const term = findTerm(data, state.selectedTerm);
      if (term !== null) {
        return data.topics.map((t) => term.conditional[t.id]);
      }
    }
    return data.topics.map((t) => t.proportion);
  }

  // src/render.ts
  var SVG_NS = "http://www.w3.org/2000/svg";
  var MAP_SIZE = 460;
  var MAP_PAD = 60;
  var TERM_LIMIT = 30;
  var BAR_WIDTH = 240;
  function el(doc, tag, className, text) {
    const node = doc.createElement(tag);
    if (className) node.className = className;
    if (text !== void 0) node.textContent = text;
    return node;
  }
  function svgEl(doc, tag, attrs) {
    const node = doc.createElementNS(SVG_NS, tag);
    for (const [key, value] of Object.entries(attrs)) {
      node.setAttribute(key, value);
    }
    return node;
  }
  function formatPercent(p) {
    return (p * 100).toFixed(1) + "%";
  }
  function renderHeader(doc, data) {
    const header = el(doc, "header", "header");
    header.appendChild(el(doc, "h1", "title", "Topic explorer"));
    header.appendChild(el(doc, "p", "question", data.question));
    const s = data.corpus_stats;
    header.appendChild(el(
      doc,
      "p",
      "corpus-stats",
      `${s.documents} documents, ${s.answers} answers, ${s.tokens} tokens, ${s.vocabulary} terms`
    ));
    return header;
  }
  function renderLambdaControl(doc, state, handlers) {
    const wrap = el(doc, "div", "lambda-control");
    const label = el(
      doc,
      "label",
      "lambda-label",
      `relevance blend \u03BB = ${state.lambda.toFixed(2)} `
    );
    const slider = el(doc, "input", "lambda-slider");
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
      doc,
      "span",
      "lambda-hint",
      "\u03BB=1 ranks by in-topic probability, \u03BB=0 by lift"
    ));
    return wrap;
  }
  function renderMap(doc, data, state, handlers) {
    const panel = el(doc, "section", "map-panel");
    panel.appendChild(el(doc, "h2", void 0, "Intertopic distance map"));
    const svg = svgEl(doc, "svg", {
      viewBox: `0 0 ${MAP_SIZE} ${MAP_SIZE}`,
      width: String(MAP_SIZE),
      height: String(MAP_SIZE),
      class: "topic-map",
      role: "img"
    });
    const xs = data.topics.map((t) => t.x);
    const ys = data.topics.map((t) => t.y);
    const extent = Math.max(
      0.05,
      ...xs.map(Math.abs),
      ...ys.map(Math.abs)
    );
    const scale = (MAP_SIZE / 2 - MAP_PAD) / extent;
    const weights = circleWeights(data, state);
    const maxWeight = Math.max(1e-12, ...weights);
    const maxRadius = MAP_PAD * 0.9;
    svg.appendChild(svgEl(doc, "line", {
      x1: "0",
      y1: String(MAP_SIZE / 2),
      x2: String(MAP_SIZE),
      y2: String(MAP_SIZE / 2),
      class: "axis"
    }));
    svg.appendChild(svgEl(doc, "line", {
      x1: String(MAP_SIZE / 2),
      y1: "0",
      x2: String(MAP_SIZE / 2),
      y2: String(MAP_SIZE),
      class: "axis"
    }));
    data.topics.forEach((topic, i) => {
      const cx = MAP_SIZE / 2 + topic.x * scale;
      const cy = MAP_SIZE / 2 - topic.y * scale;
      const radius = maxRadius * Math.sqrt(weights[i] / maxWeight);
      const group = svgEl(doc, "g", {
        class: "topic-circle" + (state.selectedTopic === topic.id ? " selected" : "") + (weights[i] <= 1e-9 ? " empty" : ""),
        "data-topic-id": String(topic.id)
      });
      group.appendChild(svgEl(doc, "circle", {
        cx: String(cx),
        cy: String(cy),
        r: String(Math.max(radius, 2))
      }));
      const label = svgEl(doc, "text", {
        x: String(cx),
        y: String(cy),
        class: "topic-label",
        "text-anchor": "middle",
        dy: "0.35em"
      });
      label.textContent = String(topic.display_rank);
      group.appendChild(label);
      group.appendChild(svgEl(doc, "title", {})).textContent = `topic ${topic.display_rank}: ${formatPercent(topic.proportion)} of tokens`;
      group.addEventListener("click", () => handlers.onSelectTopic(topic.id));
      svg.appendChild(group);
    });
    panel.appendChild(svg);
    const caption = state.selectedTerm === null ? "circle area \u221D share of corpus tokens" : `circle area \u221D P(topic | \u201C${state.selectedTerm}\u201D)`;
    panel.appendChild(el(doc, "p", "map-caption", caption));
    return panel;
  }
  function renderTermRow(doc, state, handlers, term, maxOverall) {
    const row = el(doc, "li", "term-row" + (state.selectedTerm === term.term ? " selected" : ""));
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
  function renderTermPanel(doc, data, state, handlers) {
    const panel = el(doc, "section", "term-panel");
    const selected = data.topics.find((t) => t.id === state.selectedTopic);
    const heading = selected === void 0 ? "Most frequent terms (select a topic circle)" : `Top terms of topic ${selected.display_rank} (${formatPercent(selected.proportion)} of tokens)`;
    panel.appendChild(el(doc, "h2", void 0, heading));
    const terms = selected === void 0 ? byOverallFrequency(data).slice(0, TERM_LIMIT) : topTerms(data, selected.id, state.lambda, TERM_LIMIT);
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
    if (selected !== void 0) {
      legend.appendChild(el(doc, "span", "bar within-bar legend-swatch"));
      legend.appendChild(doc.createTextNode(" estimated frequency within topic"));
    }
    panel.appendChild(legend);
    return panel;
  }
  function renderConditionalPanel(doc, data, state) {
    if (state.selectedTerm === null) return null;
    const term = findTerm(data, state.selectedTerm);
    if (term === null) return null;
    const panel = el(doc, "section", "conditional-panel");
    panel.appendChild(el(
      doc,
      "h2",
      void 0,
      `Conditional topic distribution: \u201C${term.term}\u201D`
    ));
    const list = el(doc, "ul", "conditional-list");
    for (const topic of data.topics) {
      const p = term.conditional[topic.id];
      const row = el(doc, "li", "conditional-row");
      row.appendChild(el(
        doc,
        "span",
        "conditional-topic",
        `topic ${topic.display_rank}`
      ));
      const bar = el(doc, "span", "bar conditional-bar");
      bar.style.width = `${(BAR_WIDTH * p).toFixed(1)}px`;
      row.appendChild(bar);
      row.appendChild(el(doc, "span", "conditional-value", formatPercent(p)));
      list.appendChild(row);
    }
    panel.appendChild(list);
    return panel;
  }
  function renderApp(root, data, state, handlers, message = null) {
    const doc = root.ownerDocument;
    root.textContent = "";
    root.appendChild(renderHeader(doc, data));
    root.appendChild(renderLambdaControl(doc, state, handlers));
    if (message !== null) {
      root.appendChild(el(doc, "p", "status-message", message));
    }
    if (data.topics.length === 1) {
      root.appendChild(el(
        doc,
        "p",
        "single-topic-note",
        "Only one topic was fitted; the distance map collapses to a single point."
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
  function renderError(root, message) {
    const doc = root.ownerDocument;
    root.textContent = "";
    const panel = el(doc, "div", "error-panel");
    panel.appendChild(el(doc, "h1", void 0, "Cannot display this report"));
    panel.appendChild(el(doc, "p", "error-message", message));
    root.appendChild(panel);
  }

  // src/main.ts
  function start(root, data) {
    let state = initialState(data);
    let message = null;
    const handlers = {
      onSelectTopic(topicId) {
        state = selectTopic(state, topicId);
        message = null;
        redraw();
      },
      onSelectTerm(term) {
        const result = selectTerm(state, data, term);
        state = result.state;
        message = result.message;
        redraw();
      },
      onLambda(value) {
        state = setLambda(state, value);
        redraw();
      }
    };
    function redraw() {
      renderApp(root, data, state, handlers, message);
    }
    redraw();
  }
  function bootFromPayload(root, text) {
    let data;
    try {
      data = parseVisData(JSON.parse(text));
    } catch (err) {
      renderError(root, err instanceof Error ? err.message : String(err));
      return;
    }
    start(root, data);
  }
  function renderFilePicker(root) {
    const doc = root.ownerDocument;
    root.textContent = "";
    const panel = doc.createElement("div");
    panel.className = "picker-panel";
    const title = doc.createElement("h1");
    title.textContent = "Topic explorer";
    const hint = doc.createElement("p");
    hint.textContent = "No embedded data found. Open an exported visdata.json:";
    const input = doc.createElement("input");
    input.type = "file";
    input.accept = ".json,application/json";
    input.addEventListener("change", () => {
      const file = input.files && input.files[0];
      if (!file) return;
      const reader = new FileReader();
      reader.onload = () => bootFromPayload(root, String(reader.result));
      reader.readAsText(file);
    });
    panel.appendChild(title);
    panel.appendChild(hint);
    panel.appendChild(input);
    root.appendChild(panel);
  }
  function boot(doc) {
    const root = doc.getElementById("app");
    if (root === null) {
      return;
    }
    const payload = doc.getElementById("visdata");
    if (payload === null || payload.textContent === null || payload.textContent.trim() === "") {
      renderFilePicker(root);
      return;
    }
    bootFromPayload(root, payload.textContent);
  }
  if (typeof document !== "undefined") {
    if (document.readyState === "loading") {
      document.addEventListener("DOMContentLoaded", () => boot(document));
    } else {
      boot(document);
    }
  }
})();
