/** Editor store: the matrix view model plus local edits, selection,
 * optimistic-concurrency state, and commit/reload flows. Pure logic, no DOM.
 */

import type {
  PutResult,
  SentencePayload,
  SuggestionRecord,
  UnitRecord,
} from "./api.js";
import { SUB_CATEGORIES } from "./taxonomy.js";
import { draftViolations, uncovered, type Violation } from "./validate.js";

export type CellState = "empty" | "unit" | "suggested";

/** The slice of the API the editor needs (ApiClient satisfies it). */
export interface EditorApi {
  putUnits(id: string, revision: number, units: UnitRecord[]): Promise<PutResult>;
  getSentence(id: string): Promise<SentencePayload>;
}

export interface Selection {
  anchor: [number, number];
  focus: [number, number];
}

export type CommitOutcome =
  | { kind: "saved"; revision: number; state: "complete" | "draft" }
  | { kind: "precheck"; violations: Violation[] }
  | { kind: "conflict"; expected: number }
  | { kind: "rejected"; violations: Violation[] }
  | { kind: "error"; message: string };

function cloneUnits(units: UnitRecord[]): UnitRecord[] {
  return units.map((u) => ({
    src: [...u.src],
    tgt: [...u.tgt],
    relation: u.relation,
    sub: u.sub ?? null,
    ...(u.provenance ? { provenance: u.provenance } : {}),
  }));
}

export class EditorStore {
  sentence: SentencePayload | null = null;
  units: UnitRecord[] = [];
  suggestions: SuggestionRecord[] = [];
  revision = 0;
  dirty = false;
  conflict = false;
  conflictExpected: number | null = null;
  violations: Violation[] = [];
  selection: Selection | null = null;
  selectedUnit: number | null = null;
  onChange: (() => void) | null = null;

  private notify(): void {
    this.onChange?.();
  }

  load(payload: SentencePayload): void {
    this.sentence = payload;
    this.units = cloneUnits(payload.units);
    this.suggestions = payload.suggestions.map((s) => ({ ...s, src: [...s.src], tgt: [...s.tgt] }));
    this.revision = payload.revision;
    this.dirty = false;
    this.conflict = false;
    this.conflictExpected = null;
    this.violations = [];
    this.selection = null;
    this.selectedUnit = null;
    this.notify();
  }

  // -- matrix queries -------------------------------------------------------

  unitIndexAt(i: number, j: number): number | null {
    for (let k = 0; k < this.units.length; k += 1) {
      const u = this.units[k];
      if (u.src.includes(i) && u.tgt.includes(j)) return k;
    }
    return null;
  }

  suggestionAt(i: number, j: number): SuggestionRecord | null {
    for (const s of this.suggestions) {
      if (s.src.includes(i) && s.tgt.includes(j)) return s;
    }
    return null;
  }

  cellState(i: number, j: number): CellState {
    if (this.unitIndexAt(i, j) !== null) return "unit";
    if (this.suggestionAt(i, j) !== null) return "suggested";
    return "empty";
  }

  /** Owning unit of a source (side="src") or target token, if any. */
  tokenUnit(side: "src" | "tgt", index: number): number | null {
    for (let k = 0; k < this.units.length; k += 1) {
      const group = side === "src" ? this.units[k].src : this.units[k].tgt;
      if (group.includes(index)) return k;
    }
    return null;
  }

  uncoveredTokens(): { src: number[]; tgt: number[] } {
    if (!this.sentence) return { src: [], tgt: [] };
    return uncovered(
      this.sentence.srcTokens.length,
      this.sentence.tgtTokens.length,
      this.units,
    );
  }

  localViolations(): Violation[] {
    if (!this.sentence) return [];
    return draftViolations(
      this.sentence.srcTokens.length,
      this.sentence.tgtTokens.length,
      this.units,
    );
  }

  canCommit(): boolean {
    return this.sentence !== null && this.localViolations().length === 0;
  }

  // -- selection (cell drag) ------------------------------------------------

  beginSelection(i: number, j: number): void {
    const existing = this.unitIndexAt(i, j);
    if (existing !== null) {
      this.selectedUnit = existing;
      this.selection = null;
    } else {
      this.selectedUnit = null;
      this.selection = { anchor: [i, j], focus: [i, j] };
    }
    this.notify();
  }

  extendSelection(i: number, j: number): void {
    if (!this.selection) return;
    this.selection.focus = [i, j];
    this.notify();
  }

  selectionRect(): { src: number[]; tgt: number[] } | null {
    if (!this.selection) return null;
    const [ai, aj] = this.selection.anchor;
    const [fi, fj] = this.selection.focus;
    const src = [];
    for (let i = Math.min(ai, fi); i <= Math.max(ai, fi); i += 1) src.push(i);
    const tgt = [];
    for (let j = Math.min(aj, fj); j <= Math.max(aj, fj); j += 1) tgt.push(j);
    return { src, tgt };
  }

  inSelection(i: number, j: number): boolean {
    const rect = this.selectionRect();
    return rect !== null && rect.src.includes(i) && rect.tgt.includes(j);
  }

  /** Finish a drag: carve the selected rectangle out as a new literal unit.
   * Indices are taken over from any units they belonged to; carved-up
   * leftovers are dropped when empty or relabeled to the forced unaligned
   * label when one side empties. */
  commitSelection(): number | null {
    const rect = this.selectionRect();
    this.selection = null;
    if (!rect || rect.src.length === 0 || rect.tgt.length === 0) {
      this.notify();
      return null;
    }
    this.stealIndices(rect.src, rect.tgt);
    this.units.push({ src: rect.src, tgt: rect.tgt, relation: "literal", sub: null });
    this.dirty = true;
    this.selectedUnit = this.units.length - 1;
    this.violations = this.localViolations();
    this.notify();
    return this.selectedUnit;
  }

  private stealIndices(srcTaken: number[], tgtTaken: number[]): void {
    const src = new Set(srcTaken);
    const tgt = new Set(tgtTaken);
    const repaired: UnitRecord[] = [];
    for (const unit of this.units) {
      const keptSrc = unit.src.filter((i) => !src.has(i));
      const keptTgt = unit.tgt.filter((j) => !tgt.has(j));
      if (keptSrc.length === 0 && keptTgt.length === 0) continue;
      let relation = unit.relation;
      let sub = unit.sub ?? null;
      if (keptTgt.length === 0 && relation !== "unaligned_reduction" && relation !== "no_type") {
        relation = "unaligned_reduction";
        sub = null;
      }
      if (keptSrc.length === 0 && relation !== "unaligned_explicitation") {
        relation = "unaligned_explicitation";
        sub = null;
      }
      repaired.push({ ...unit, src: keptSrc, tgt: keptTgt, relation, sub });
    }
    this.units = repaired;
  }

  // -- unit mutations ---------------------------------------------------------

  /** Relabel a unit from the drop list (or toggle a target-empty unit between
   * unaligned_reduction and no_type). Returns false for label/structure
   * combinations the taxonomy forbids. */
  assignRelation(unitIndex: number, relation: string): boolean {
    const unit = this.units[unitIndex];
    if (!unit) return false;
    if (unit.src.length === 0) return relation === "unaligned_explicitation";
    if (unit.tgt.length === 0) {
      if (relation !== "unaligned_reduction" && relation !== "no_type") return false;
    } else if (relation === "unaligned_reduction" || relation === "no_type" || relation === "unaligned_explicitation") {
      return false;
    }
    unit.relation = relation;
    const allowed = SUB_CATEGORIES[relation] ?? [];
    if (unit.sub != null && !allowed.includes(unit.sub)) {
      unit.sub = null;
    }
    delete unit.provenance;
    this.dirty = true;
    this.violations = this.localViolations();
    this.notify();
    return true;
  }

  deleteUnit(unitIndex: number): void {
    if (unitIndex < 0 || unitIndex >= this.units.length) return;
    this.units.splice(unitIndex, 1);
    if (this.selectedUnit === unitIndex) this.selectedUnit = null;
    this.dirty = true;
    this.violations = this.localViolations();
    this.notify();
  }

  acceptSuggestion(suggestion: SuggestionRecord): number {
    this.stealIndices(suggestion.src, suggestion.tgt);
    this.units.push({
      src: [...suggestion.src],
      tgt: [...suggestion.tgt],
      relation: suggestion.relation,
      sub: suggestion.sub ?? null,
      provenance: "suggested",
    });
    this.suggestions = this.suggestions.filter((s) => s !== suggestion);
    this.dirty = true;
    this.violations = this.localViolations();
    this.notify();
    return this.units.length - 1;
  }

  // -- server round trips -----------------------------------------------------

  async commit(api: EditorApi): Promise<CommitOutcome> {
    if (!this.sentence) return { kind: "error", message: "no sentence loaded" };
    const precheck = this.localViolations();
    if (precheck.length > 0) {
      // never submit a payload we know fails draft validation
      this.violations = precheck;
      this.notify();
      return { kind: "precheck", violations: precheck };
    }
    const result = await api.putUnits(this.sentence.id, this.revision, this.units);
    if (result.ok) {
      this.revision = result.revision;
      this.dirty = false;
      this.conflict = false;
      this.conflictExpected = null;
      this.violations = [];
      this.notify();
      return { kind: "saved", revision: result.revision, state: result.state };
    }
    if (result.status === 409) {
      this.conflict = true;
      this.conflictExpected = "expected" in result ? result.expected : null;
      this.notify();
      return { kind: "conflict", expected: this.conflictExpected ?? -1 };
    }
    if (result.status === 400 && "violations" in result) {
      this.violations = result.violations;
      this.notify();
      return { kind: "rejected", violations: result.violations };
    }
    const message = "error" in result ? result.error : `status ${result.status}`;
    return { kind: "error", message };
  }

  /** Resolve a conflict by reloading the server copy (local edits discarded;
   * the caller is expected to have prompted the user first). */
  async reload(api: EditorApi): Promise<void> {
    if (!this.sentence) return;
    this.load(await api.getSentence(this.sentence.id));
  }
}
