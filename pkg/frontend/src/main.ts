/** Browser entry point: a small launcher that picks a problem document and
 * hands off to `mountApp`. Everything testable lives in the other modules.
 */

import { ApiClient } from "./api.js";
import type { FetchLike } from "./api.js";
import { mountApp } from "./app.js";
import { SAMPLES } from "./samples.js";
import { escapeHtml } from "./render.js";

function launcher(root: HTMLElement, api: ApiClient): void {
  const options = SAMPLES.map(
    (sample) =>
      `<option value="${escapeHtml(sample.id)}">${escapeHtml(sample.title)}</option>`,
  ).join("");
  root.innerHTML =
    "<header><h1>Robust ranking workbench</h1></header>" +
    '<section class="launcher">' +
    "<p>Pick a sample problem or paste a problem document (JSON).</p>" +
    `<select id="sample">${options}</select>` +
    '<button type="button" id="load-sample">Load sample</button>' +
    '<textarea id="document" rows="8" placeholder="{ ... }"></textarea>' +
    '<button type="button" id="load-document">Load document</button>' +
    '<p class="launch-error" role="alert"></p>' +
    "</section>";

  const fail = (message: string): void => {
    const slot = root.querySelector(".launch-error");
    if (slot) {
      slot.textContent = message;
    }
  };

  root.querySelector("#load-sample")?.addEventListener("click", () => {
    const select = root.querySelector("#sample") as HTMLSelectElement | null;
    const sample = SAMPLES.find((entry) => entry.id === select?.value);
    if (sample) {
      mountApp(root, api, sample.document);
    }
  });

  root.querySelector("#load-document")?.addEventListener("click", () => {
    const area = root.querySelector("#document") as HTMLTextAreaElement | null;
    try {
      const parsed: unknown = JSON.parse(area ? area.value : "");
      mountApp(root, api, parsed);
    } catch {
      fail("Not valid JSON — paste a complete problem document.");
    }
  });
}

const root = document.getElementById("app");
if (root) {
  const fetchImpl: FetchLike = (input, init) => fetch(input, init);
  launcher(root, new ApiClient(fetchImpl));
}
