/** Progress dashboard: per-genre counts of complete vs draft sentences and a
 * sentence picker, fed by the project summary endpoint. */

import type { ProjectSummary } from "./api.js";

export interface DashboardHandlers {
  onOpenSentence: (id: string) => void;
}

export function renderDashboard(
  summary: ProjectSummary,
  container: HTMLElement,
  handlers: DashboardHandlers,
  genreFilter: string | null = null,
): void {
  container.textContent = "";

  const heading = document.createElement("h2");
  heading.textContent = `${summary.name} · ${summary.corpus} (${summary.role}) · ${summary.sentenceCount} sentences`;
  container.appendChild(heading);

  const table = document.createElement("table");
  table.className = "progress";
  const head = document.createElement("tr");
  for (const label of ["genre", "total", "complete", "draft"]) {
    const th = document.createElement("th");
    th.textContent = label;
    head.appendChild(th);
  }
  table.appendChild(head);
  const genres = Object.keys(summary.genres).sort();
  let complete = 0;
  let total = 0;
  for (const genre of genres) {
    if (genreFilter && genre !== genreFilter) continue;
    const progress = summary.genres[genre];
    complete += progress.complete;
    total += progress.total;
    const row = document.createElement("tr");
    row.dataset.genre = genre;
    for (const value of [genre, progress.total, progress.complete, progress.draft]) {
      const td = document.createElement("td");
      td.textContent = String(value);
      row.appendChild(td);
    }
    table.appendChild(row);
  }
  container.appendChild(table);

  const totals = document.createElement("p");
  totals.className = "progress__totals";
  totals.textContent = `${complete} of ${total} complete`;
  container.appendChild(totals);

  const picker = document.createElement("select");
  picker.className = "progress__picker";
  for (const id of summary.sentenceIds) {
    const option = document.createElement("option");
    option.value = id;
    option.textContent = id;
    picker.appendChild(option);
  }
  picker.addEventListener("change", () => handlers.onOpenSentence(picker.value));
  container.appendChild(picker);
}
