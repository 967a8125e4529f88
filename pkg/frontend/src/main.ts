/** Boot: read the embedded payload (or offer a file picker), keep state,
 * and re-render on every interaction. No network access at any point. */

import {
  initialState,
  parseVisData,
  selectTerm,
  selectTopic,
  setLambda,
} from "./data";
import { Handlers, renderApp, renderError } from "./render";
import type { ExplorerState, VisData } from "./types";

function start(root: HTMLElement, data: VisData): void {
  let state: ExplorerState = initialState(data);
  let message: string | null = null;

  const handlers: Handlers = {
    onSelectTopic(topicId: number): void {
      state = selectTopic(state, topicId);
      message = null;
      redraw();
    },
    onSelectTerm(term: string): void {
      const result = selectTerm(state, data, term);
      state = result.state;
      message = result.message;
      redraw();
    },
    onLambda(value: number): void {
      state = setLambda(state, value);
      redraw();
    },
  };

  function redraw(): void {
    renderApp(root, data, state, handlers, message);
  }

  redraw();
}

function bootFromPayload(root: HTMLElement, text: string): void {
  let data: VisData;
  try {
    data = parseVisData(JSON.parse(text));
  } catch (err) {
    renderError(root, err instanceof Error ? err.message : String(err));
    return;
  }
  start(root, data);
}

function renderFilePicker(root: HTMLElement): void {
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

export function boot(doc: Document): void {
  const root = doc.getElementById("app");
  if (root === null) {
    return;
  }
  const payload = doc.getElementById("visdata");
  if (payload === null || payload.textContent === null || payload.textContent.trim() === "") {
    renderFilePicker(root as HTMLElement);
    return;
  }
  bootFromPayload(root as HTMLElement, payload.textContent);
}

/* istanbul ignore next -- browser entry point */
if (typeof document !== "undefined") {
  if (document.readyState === "loading") {
    document.addEventListener("DOMContentLoaded", () => boot(document));
  } else {
    boot(document);
  }
}
