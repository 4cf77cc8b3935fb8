/** Pure view functions: application state in, HTML/SVG strings out.
 *
 * Interactive elements carry `data-action` attributes; the mounting layer
 * wires them with a single delegated listener, so everything here stays
 * trivially testable as strings.
 */

import { layoutHasse } from "./hasse.js";
import type { AppState, Selection } from "./state.js";
import { effectiveComparisons, hasStagedEdit } from "./state.js";
import type { CheckReport, Comparison } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function culpritRefs(check: CheckReport | null): Set<string> {
  const refs = new Set<string>();
  if (check) {
    for (const subset of check.minimal_comparison_subsets) {
      for (const ref of subset) {
        refs.add(ref);
      }
    }
  }
  return refs;
}

export function renderBanner(state: AppState): string {
  if (!state.check) {
    return '<div class="banner pending">Checking judgments…</div>';
  }
  if (state.check.feasible) {
    return '<div class="banner consistent">Judgments are consistent</div>';
  }
  const sets = state.check.minimal_comparison_subsets;
  const summary =
    sets.length > 0
      ? ` — smallest conflicting set: ${escapeHtml(sets[0]!.join(", "))}`
      : "";
  return `<div class="banner contradictory">Judgments are contradictory${summary}</div>`;
}

function comparisonItem(
  comparison: Comparison,
  culprits: Set<string>,
  stagedRemovals: string[],
): string {
  const classes = ["comparison"];
  if (culprits.has(comparison.ref)) {
    classes.push("culprit");
  }
  const removing = stagedRemovals.includes(comparison.ref);
  if (removing) {
    classes.push("staged-removal");
  }
  const ref = escapeHtml(comparison.ref);
  const action = removing ? "unstage-removal" : "stage-removal";
  const label = removing ? "keep" : "remove";
  return (
    `<li class="${classes.join(" ")}" data-ref="${ref}">` +
    `<span class="ref">${ref}</span>` +
    `<button type="button" data-action="${action}" data-ref="${ref}">${label}</button>` +
    `</li>`
  );
}

export function renderEditor(state: AppState): string {
  if (!state.session) {
    return '<section class="editor"></section>';
  }
  const culprits = culpritRefs(state.check);
  const items = state.session.comparisons
    .map((comparison) =>
      comparisonItem(comparison, culprits, state.stagedRemovals),
    )
    .join("");
  const additions = state.stagedAdditions
    .map((addition, index) => {
      const text = escapeHtml(
        `${addition.first} ${addition.kind === "strict" ? ">" : "~"} ${addition.second}`,
      );
      return (
        `<li class="staged-addition">` +
        `<span class="ref">${text}</span>` +
        `<button type="button" data-action="unstage-addition" data-index="${index}">drop</button>` +
        `</li>`
      );
    })
    .join("");
  const options = state.session.alternatives
    .map((name) => `<option value="${escapeHtml(name)}">${escapeHtml(name)}</option>`)
    .join("");
  const applyControls = hasStagedEdit(state)
    ? '<button type="button" data-action="apply-edit">Apply changes</button>' +
      '<button type="button" data-action="discard-staged">Discard</button>'
    : "";
  return (
    '<section class="editor">' +
    "<h2>Judgments</h2>" +
    `<ul class="comparisons">${items}</ul>` +
    (additions ? `<ul class="additions">${additions}</ul>` : "") +
    '<div class="add-form">' +
    `<select id="add-first">${options}</select>` +
    '<select id="add-kind">' +
    '<option value="strict">&gt;</option>' +
    '<option value="indifferent">~</option>' +
    "</select>" +
    `<select id="add-second">${options}</select>` +
    '<button type="button" data-action="stage-addition">Add</button>' +
    "</div>" +
    `<div class="apply-controls">${applyControls}</div>` +
    "</section>"
  );
}

export function renderBounds(state: AppState): string {
  if (!state.bounds) {
    return '<section class="bounds"></section>';
  }
  const rows = Object.entries(state.bounds.ranges)
    .map(([variable, range]) => {
      const [low, high] = range.display;
      const left = Math.max(0, Math.min(100, parseFloat(low) * 100));
      const right = Math.max(0, Math.min(100, parseFloat(high) * 100));
      const width = Math.max(0, right - left);
      return (
        `<div class="weight-range" data-variable="${escapeHtml(variable)}">` +
        `<span class="variable">${escapeHtml(variable)}</span>` +
        `<span class="range">${escapeHtml(low)} – ${escapeHtml(high)}</span>` +
        `<div class="bar"><div class="fill" style="left: ${left}%; width: ${width}%"></div></div>` +
        "</div>"
      );
    })
    .join("");
  return `<section class="bounds"><h2>Weight ranges</h2>${rows}</section>`;
}

function matrixTable(
  title: string,
  kind: string,
  alternatives: string[],
  rows: string[],
): string {
  const header = alternatives
    .map((name) => `<th>${escapeHtml(name)}</th>`)
    .join("");
  const body = rows
    .map((row, i) => {
      const first = alternatives[i]!;
      const cells = alternatives
        .map((second, j) => {
          const value = row[j] === "T";
          return (
            `<td class="cell ${value ? "true" : "false"}" data-action="select-pair" ` +
            `data-first="${escapeHtml(first)}" data-second="${escapeHtml(second)}">` +
            `${value ? "&#10003;" : "&#183;"}</td>`
          );
        })
        .join("");
      return `<tr><th>${escapeHtml(first)}</th>${cells}</tr>`;
    })
    .join("");
  return (
    `<div class="matrix" data-kind="${kind}">` +
    `<h3>${escapeHtml(title)}</h3>` +
    `<table><thead><tr><th></th>${header}</tr></thead><tbody>${body}</tbody></table>` +
    "</div>"
  );
}

export function renderRelations(state: AppState): string {
  if (!state.relations) {
    return '<section class="relations"></section>';
  }
  const { alternatives, necessary, possible } = state.relations;
  return (
    '<section class="relations">' +
    "<h2>Robust relations</h2>" +
    matrixTable("Always at least as good", "necessary", alternatives, necessary) +
    matrixTable("Sometimes at least as good", "possible", alternatives, possible) +
    "</section>"
  );
}

function selectionBody(selection: Selection): string {
  const [first, second] = selection.pair;
  const pairText = escapeHtml(`${first} over ${second}`);
  if (selection.reduct) {
    const report = selection.reduct;
    if (!report.holds) {
      return `<p class="verdict">${pairText}: not a robust preference.</p>`;
    }
    const sets = report.reducts
      .map(
        (reduct) =>
          `<li class="reduct-set">${escapeHtml(reduct.join(", "))}</li>`,
      )
      .join("");
    return (
      `<p class="verdict">${pairText}: holds for every compatible weighting.</p>` +
      "<p>Minimal judgment sets forcing it:</p>" +
      `<ul class="reducts">${sets}</ul>`
    );
  }
  if (selection.pairInfo) {
    const report = selection.pairInfo;
    const describe = (value: boolean | null, word: string): string =>
      value === null ? "" : `<li>${word}: ${value ? "yes" : "no"}</li>`;
    return (
      `<p class="verdict">${pairText}</p>` +
      `<ul class="pair-facts">${describe(report.necessary, "always at least as good")}${describe(report.possible, "sometimes at least as good")}</ul>`
    );
  }
  return `<p class="verdict">${pairText}: loading…</p>`;
}

export function renderSelection(state: AppState): string {
  if (!state.selection) {
    return '<section class="selection"></section>';
  }
  return (
    '<section class="selection"><h2>Explanation</h2>' +
    selectionBody(state.selection) +
    '<button type="button" data-action="clear-selection">Close</button>' +
    "</section>"
  );
}

export function renderHasse(state: AppState): string {
  if (!state.relations) {
    return '<section class="hasse"></section>';
  }
  const { alternatives, hasse_edges } = state.relations;
  const layout = layoutHasse(alternatives, hasse_edges);
  const width = 640;
  const height = Math.max(160, layout.layers.length * 90);
  const margin = 36;
  const scale = ({ x, y }: { x: number; y: number }): [number, number] => [
    margin + x * (width - 2 * margin),
    margin + y * (height - 2 * margin),
  ];
  const edges = hasse_edges
    .map(([from, to]) => {
      const [x1, y1] = scale(layout.positions[from]!);
      const [x2, y2] = scale(layout.positions[to]!);
      return (
        `<line class="edge" data-from="${escapeHtml(from)}" data-to="${escapeHtml(to)}" ` +
        `x1="${x1.toFixed(1)}" y1="${y1.toFixed(1)}" x2="${x2.toFixed(1)}" y2="${y2.toFixed(1)}" />`
      );
    })
    .join("");
  const nodes = alternatives
    .map((name) => {
      const [x, y] = scale(layout.positions[name]!);
      return (
        `<g class="node" data-name="${escapeHtml(name)}" transform="translate(${x.toFixed(1)}, ${y.toFixed(1)})">` +
        '<circle r="14" />' +
        `<text dy="4">${escapeHtml(name)}</text>` +
        "</g>"
      );
    })
    .join("");
  return (
    '<section class="hasse"><h2>Strict-preference diagram</h2>' +
    `<svg viewBox="0 0 ${width} ${height}" role="img">${edges}${nodes}</svg>` +
    "</section>"
  );
}

export function renderApp(state: AppState): string {
  const error = state.error
    ? `<div class="error" role="alert">${escapeHtml(state.error)}</div>`
    : "";
  const preview = hasStagedEdit(state)
    ? (() => {
        const { kept, added } = effectiveComparisons(state);
        const addedText = added.map(
          (a) => `${a.first} ${a.kind === "strict" ? ">" : "~"} ${a.second}`,
        );
        return `<p class="preview">After apply: ${escapeHtml(
          [...kept, ...addedText].join(", ") || "(none)",
        )}</p>`;
      })()
    : "";
  return (
    "<header><h1>Robust ranking workbench</h1></header>" +
    error +
    `<section class="banner-area">${renderBanner(state)}</section>` +
    renderEditor(state) +
    preview +
    '<div class="results">' +
    renderBounds(state) +
    renderRelations(state) +
    renderHasse(state) +
    renderSelection(state) +
    "</div>"
  );
}
