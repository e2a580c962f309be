/** Relation context menu (right click on a unit) and the matching keyboard
 * shortcuts. Colors come from the server palette so both components share one
 * source of truth. */

import type { Palette } from "./api.js";
import { MENU_KEYS, MENU_RELATIONS } from "./taxonomy.js";

export interface MenuHandlers {
  onAssign: (relation: string) => void;
  onDelete: () => void;
  onToggleNoType: () => void;
}

export function buildRelationMenu(
  palette: Palette,
  handlers: MenuHandlers,
): HTMLElement {
  const menu = document.createElement("div");
  menu.className = "relmenu";
  menu.hidden = true;
  MENU_RELATIONS.forEach((relation, k) => {
    const item = document.createElement("button");
    item.className = "relmenu__item";
    item.dataset.relation = relation;
    const swatch = document.createElement("span");
    swatch.className = "relmenu__swatch";
    swatch.style.backgroundColor = palette.colors[relation]?.hex ?? "#fff";
    item.appendChild(swatch);
    item.appendChild(
      document.createTextNode(`${relation} [${MENU_KEYS[k] ?? ""}]`),
    );
    item.addEventListener("click", () => {
      menu.hidden = true;
      handlers.onAssign(relation);
    });
    menu.appendChild(item);
  });

  const toggle = document.createElement("button");
  toggle.className = "relmenu__item relmenu__item--notype";
  toggle.textContent = "toggle reduction / no_type";
  toggle.addEventListener("click", () => {
    menu.hidden = true;
    handlers.onToggleNoType();
  });
  menu.appendChild(toggle);

  const remove = document.createElement("button");
  remove.className = "relmenu__item relmenu__item--delete";
  remove.textContent = "delete unit";
  remove.addEventListener("click", () => {
    menu.hidden = true;
    handlers.onDelete();
  });
  menu.appendChild(remove);
  return menu;
}

export function showMenuAt(menu: HTMLElement, x: number, y: number): void {
  menu.style.left = `${x}px`;
  menu.style.top = `${y}px`;
  menu.hidden = false;
}

/** Map a pressed key to a drop-list relation, or null. */
export function relationForKey(key: string): string | null {
  const index = MENU_KEYS.indexOf(key);
  return index >= 0 ? MENU_RELATIONS[index] : null;
}
