/** Application wiring: fetch project + palette, render dashboard and editor,
 * route pointer/keyboard events into the store, commit on demand. */

import { ApiClient, type Palette, type ProjectSummary } from "./api.js";
import { renderDashboard } from "./dashboard.js";
import {
  renderMatrix,
  renderSentencePanes,
  renderStatusBar,
  renderSuggestionPanel,
  type MatrixCallbacks,
} from "./matrix.js";
import { buildRelationMenu, relationForKey, showMenuAt } from "./menu.js";
import { EditorStore } from "./state.js";

export async function boot(root: HTMLElement, api = new ApiClient()): Promise<void> {
  const store = new EditorStore();
  let summary: ProjectSummary = await api.getProject();
  const palette: Palette = await api.getPalette();

  root.innerHTML = `
    <header class="topbar">
      <span class="topbar__title">relcorpus workbench</span>
      <button id="save">save (ctrl+s)</button>
      <button id="flush">flush to disk</button>
      <button id="resuggest">recompute suggestions</button>
    </header>
    <div id="status"></div>
    <main class="layout">
      <section id="dashboard" class="layout__side"></section>
      <section class="layout__main">
        <div id="panes"></div>
        <div id="matrix"></div>
        <div id="suggestions"></div>
      </section>
    </main>
  `;
  const el = (id: string) => root.querySelector<HTMLElement>(`#${id}`)!;

  const callbacks: MatrixCallbacks = {
    onCellDown: (i, j) => store.beginSelection(i, j),
    onCellEnter: (i, j) => store.extendSelection(i, j),
    onCellUp: () => {
      if (store.selection) store.commitSelection();
    },
    onUnitContextMenu: (unitIndex, x, y) => {
      store.selectedUnit = unitIndex;
      showMenuAt(menu, x, y);
    },
    onAcceptSuggestion: (suggestion) => store.acceptSuggestion(suggestion),
    onReloadConflict: () => {
      void store.reload(api);
    },
  };

  const menu = buildRelationMenu(palette, {
    onAssign: (relation) => {
      if (store.selectedUnit !== null) store.assignRelation(store.selectedUnit, relation);
    },
    onDelete: () => {
      if (store.selectedUnit !== null) store.deleteUnit(store.selectedUnit);
    },
    onToggleNoType: () => {
      const k = store.selectedUnit;
      if (k === null) return;
      const current = store.units[k]?.relation;
      if (current === "unaligned_reduction") store.assignRelation(k, "no_type");
      else if (current === "no_type") store.assignRelation(k, "unaligned_reduction");
    },
  });
  root.appendChild(menu);
  root.addEventListener("click", (event) => {
    if (!menu.hidden && !(event.target instanceof Node && menu.contains(event.target))) {
      menu.hidden = true;
    }
  });

  async function refreshDashboard(): Promise<void> {
    summary = await api.getProject();
    renderDashboard(summary, el("dashboard"), {
      onOpenSentence: (id) => void openSentence(id),
    });
  }

  async function openSentence(id: string): Promise<void> {
    store.load(await api.getSentence(id));
  }

  store.onChange = () => {
    renderSentencePanes(store, palette, el("panes"));
    renderMatrix(store, palette, el("matrix"), callbacks);
    renderSuggestionPanel(store, el("suggestions"), callbacks);
    renderStatusBar(store, el("status"), callbacks);
  };

  el("save").addEventListener("click", () => {
    void store.commit(api).then(() => refreshDashboard());
  });
  el("flush").addEventListener("click", () => void api.flush());
  el("resuggest").addEventListener("click", () => {
    if (!store.sentence) return;
    void api.suggest(store.sentence.id).then((suggestions) => {
      store.suggestions = suggestions;
      store.onChange?.();
    });
  });

  document.addEventListener("keydown", (event) => {
    if ((event.ctrlKey || event.metaKey) && event.key === "s") {
      event.preventDefault();
      void store.commit(api).then(() => refreshDashboard());
      return;
    }
    if (event.ctrlKey || event.metaKey || event.altKey) return;
    const target = event.target as HTMLElement | null;
    if (target && (target.tagName === "INPUT" || target.tagName === "SELECT")) return;
    const relation = relationForKey(event.key);
    if (relation && store.selectedUnit !== null) {
      store.assignRelation(store.selectedUnit, relation);
    } else if (event.key === "Delete" && store.selectedUnit !== null) {
      store.deleteUnit(store.selectedUnit);
    }
  });

  await refreshDashboard();
  if (summary.sentenceIds.length > 0) {
    await openSentence(summary.sentenceIds[0]);
  }
}

declare global {
  interface Window {
    relcorpusBoot?: Promise<void>;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  window.relcorpusBoot = boot(document.getElementById("app")!);
}
