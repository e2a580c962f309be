/** DOM rendering of the alignment matrix and the two sentence panes.
 * Source tokens run down the left edge, target tokens across the top; each
 * cell marks membership of (source i, target j) in a unit or suggestion.
 */

import type { Palette, SuggestionRecord } from "./api.js";
import type { EditorStore } from "./state.js";

export interface MatrixCallbacks {
  onCellDown: (i: number, j: number) => void;
  onCellEnter: (i: number, j: number) => void;
  onCellUp: () => void;
  onUnitContextMenu: (unitIndex: number, x: number, y: number) => void;
  onAcceptSuggestion: (suggestion: SuggestionRecord) => void;
  onReloadConflict: () => void;
}

export function relationColor(palette: Palette, relation: string): string {
  const entry = palette.colors[relation];
  if (entry) return entry.hex;
  // structural labels are not in the drop-list palette
  if (relation === "unaligned_explicitation") return "#c8e6c9";
  if (relation === "unaligned_reduction") return "#e0e0e0";
  if (relation === "no_type") return "#f0f0f0";
  return "#ffffff";
}

function tokenClass(store: EditorStore, side: "src" | "tgt", index: number): string {
  const classes = ["token"];
  const owner = store.tokenUnit(side, index);
  if (owner === null) classes.push("token--uncovered");
  if (owner !== null && owner === store.selectedUnit) classes.push("token--selected");
  for (const violation of store.violations) {
    if (violation.locus === `${side}[${index}]`) classes.push("token--violation");
  }
  return classes.join(" ");
}

export function renderSentencePanes(
  store: EditorStore,
  palette: Palette,
  container: HTMLElement,
): void {
  container.textContent = "";
  if (!store.sentence) return;
  for (const side of ["src", "tgt"] as const) {
    const pane = document.createElement("div");
    pane.className = `pane pane--${side}`;
    const tokens = side === "src" ? store.sentence.srcTokens : store.sentence.tgtTokens;
    tokens.forEach((surface, index) => {
      const span = document.createElement("span");
      span.className = tokenClass(store, side, index);
      span.dataset.side = side;
      span.dataset.index = String(index);
      span.textContent = surface;
      const owner = store.tokenUnit(side, index);
      if (owner !== null) {
        span.style.backgroundColor = relationColor(palette, store.units[owner].relation);
        span.title = store.units[owner].relation;
      }
      pane.appendChild(span);
      pane.appendChild(document.createTextNode(" "));
    });
    container.appendChild(pane);
  }
}

export function renderMatrix(
  store: EditorStore,
  palette: Palette,
  container: HTMLElement,
  callbacks: MatrixCallbacks,
): void {
  container.textContent = "";
  if (!store.sentence) return;
  const { srcTokens, tgtTokens } = store.sentence;

  const table = document.createElement("table");
  table.className = "matrix";

  const head = document.createElement("tr");
  head.appendChild(document.createElement("th"));
  tgtTokens.forEach((surface, j) => {
    const th = document.createElement("th");
    th.className = "matrix__colhead";
    th.textContent = surface;
    th.dataset.tgt = String(j);
    head.appendChild(th);
  });
  table.appendChild(head);

  srcTokens.forEach((surface, i) => {
    const row = document.createElement("tr");
    const rowHead = document.createElement("th");
    rowHead.className = "matrix__rowhead";
    rowHead.textContent = surface;
    rowHead.dataset.src = String(i);
    row.appendChild(rowHead);
    tgtTokens.forEach((_, j) => {
      const cell = document.createElement("td");
      const state = store.cellState(i, j);
      const classes = ["cell", `cell--${state}`];
      if (store.inSelection(i, j)) classes.push("cell--selecting");
      const unitIndex = store.unitIndexAt(i, j);
      if (unitIndex !== null) {
        cell.style.backgroundColor = relationColor(
          palette,
          store.units[unitIndex].relation,
        );
        if (unitIndex === store.selectedUnit) classes.push("cell--selectedunit");
        if (store.units[unitIndex].relation === "modulation_transposition") {
          classes.push("cell--patterned"); // shares green with transposition
        }
        cell.title = store.units[unitIndex].relation;
      }
      const suggestion = store.suggestionAt(i, j);
      if (state === "suggested" && suggestion) {
        cell.title = `suggested: ${suggestion.relation}`;
      }
      cell.className = classes.join(" ");
      cell.dataset.src = String(i);
      cell.dataset.tgt = String(j);
      cell.addEventListener("pointerdown", (event) => {
        event.preventDefault();
        callbacks.onCellDown(i, j);
      });
      cell.addEventListener("pointerenter", () => callbacks.onCellEnter(i, j));
      cell.addEventListener("pointerup", () => callbacks.onCellUp());
      cell.addEventListener("contextmenu", (event) => {
        event.preventDefault();
        const k = store.unitIndexAt(i, j);
        if (k !== null) {
          callbacks.onUnitContextMenu(k, event.clientX, event.clientY);
        }
      });
      row.appendChild(cell);
    });
    table.appendChild(row);
  });
  container.appendChild(table);
}

export function renderSuggestionPanel(
  store: EditorStore,
  container: HTMLElement,
  callbacks: MatrixCallbacks,
): void {
  container.textContent = "";
  if (store.suggestions.length === 0) {
    const note = document.createElement("p");
    note.className = "suggestions__empty";
    note.textContent = "No pending suggestions.";
    container.appendChild(note);
    return;
  }
  const list = document.createElement("ul");
  list.className = "suggestions";
  for (const suggestion of store.suggestions) {
    const item = document.createElement("li");
    item.className = "suggestions__item";
    const text = document.createElement("span");
    text.textContent = `${suggestion.relation}${suggestion.sub ? "/" + suggestion.sub : ""} src=[${suggestion.src}] tgt=[${suggestion.tgt}] (${suggestion.ruleId})`;
    const accept = document.createElement("button");
    accept.textContent = "accept";
    accept.className = "suggestions__accept";
    accept.addEventListener("click", () => callbacks.onAcceptSuggestion(suggestion));
    item.appendChild(accept);
    item.appendChild(text);
    list.appendChild(item);
  }
  container.appendChild(list);
}

export function renderStatusBar(
  store: EditorStore,
  container: HTMLElement,
  callbacks: MatrixCallbacks,
): void {
  container.textContent = "";
  if (!store.sentence) return;

  if (store.conflict) {
    const banner = document.createElement("div");
    banner.className = "banner banner--conflict";
    banner.textContent =
      "Conflict: this sentence changed on the server (someone else committed first). ";
    const reload = document.createElement("button");
    reload.textContent = "reload server copy";
    reload.addEventListener("click", () => callbacks.onReloadConflict());
    banner.appendChild(reload);
    container.appendChild(banner);
  }

  if (store.violations.length > 0) {
    const banner = document.createElement("div");
    banner.className = "banner banner--violations";
    banner.textContent = store.violations
      .map((v) => `${v.code} at ${v.locus}`)
      .join("; ");
    container.appendChild(banner);
  }

  const info = document.createElement("div");
  info.className = "statusline";
  const missing = store.uncoveredTokens();
  info.textContent =
    `${store.sentence.id} · ${store.sentence.genre} · revision ${store.revision}` +
    ` · ${store.dirty ? "unsaved edits" : "saved"}` +
    ` · uncovered src ${missing.src.length}, tgt ${missing.tgt.length}`;
  container.appendChild(info);
}
