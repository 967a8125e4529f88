/** The emitted report must boot from its own embedded script bundle. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { JSDOM, VirtualConsole } from "jsdom";
import { describe, expect, it } from "vitest";

const HERE = dirname(fileURLToPath(import.meta.url));
const html = readFileSync(join(HERE, "fixtures", "report.html"), "utf-8");

async function loadReport(): Promise<{ dom: JSDOM; errors: unknown[] }> {
  const errors: unknown[] = [];
  const virtualConsole = new VirtualConsole();
  virtualConsole.on("jsdomError", (err: unknown) => errors.push(err));
  const dom = new JSDOM(html, { runScripts: "dangerously", virtualConsole });
  await new Promise<void>((resolve) => {
    if (dom.window.document.readyState === "complete") {
      resolve();
    } else {
      dom.window.addEventListener("load", () => resolve());
    }
  });
  return { dom, errors };
}

describe("emitted report", () => {
  it("renders the explorer from the embedded bundle without errors", async () => {
    const { dom, errors } = await loadReport();
    const doc = dom.window.document;
    expect(errors).toEqual([]);
    expect(doc.querySelectorAll(".topic-circle").length).toBeGreaterThan(0);
    expect(doc.querySelector(".error-panel")).toBeNull();
    expect(doc.querySelector("#lambda-slider")).not.toBeNull();
  });

  it("slider and term clicks work inside the booted report", async () => {
    const { dom, errors } = await loadReport();
    const win = dom.window;
    const doc = win.document;

    const circle = doc.querySelector(".topic-circle")!;
    circle.dispatchEvent(new win.MouseEvent("click", { bubbles: true }));
    const slider = doc.querySelector("#lambda-slider") as HTMLInputElement;
    slider.value = "0";
    slider.dispatchEvent(new win.Event("input", { bubbles: true }));
    const row = doc.querySelector(".term-row")!;
    row.dispatchEvent(new win.MouseEvent("click", { bubbles: true }));

    expect(errors).toEqual([]);
    expect(doc.querySelector(".conditional-panel")).not.toBeNull();
  });
});
