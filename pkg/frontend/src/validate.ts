/** Client-side draft validation mirroring the server's rules, so the editor
 * never submits a payload it knows will be rejected. */

import type { UnitRecord } from "./api.js";
import { SUB_CATEGORIES, isRelation } from "./taxonomy.js";

export interface Violation {
  code: string;
  locus: string;
  message: string;
}

export function draftViolations(
  srcLen: number,
  tgtLen: number,
  units: UnitRecord[],
): Violation[] {
  const out: Violation[] = [];
  units.forEach((unit, k) => {
    const locus = `unit[${k}]`;
    if (unit.src.length === 0 && unit.tgt.length === 0) {
      out.push({ code: "EMPTY_UNIT", locus, message: "src and tgt both empty" });
      return;
    }
    if (!isRelation(unit.relation)) {
      out.push({ code: "UNKNOWN_RELATION", locus, message: unit.relation });
      return;
    }
    if (
      unit.tgt.length === 0 &&
      unit.relation !== "unaligned_reduction" &&
      unit.relation !== "no_type"
    ) {
      out.push({
        code: "BAD_UNALIGNED_LABEL",
        locus,
        message: `target-empty unit must be unaligned_reduction or no_type, got ${unit.relation}`,
      });
    }
    if (unit.src.length === 0 && unit.relation !== "unaligned_explicitation") {
      out.push({
        code: "BAD_UNALIGNED_LABEL",
        locus,
        message: `source-empty unit must be unaligned_explicitation, got ${unit.relation}`,
      });
    }
    if (unit.relation === "unaligned_explicitation" && unit.src.length > 0) {
      out.push({
        code: "BAD_UNALIGNED_LABEL",
        locus,
        message: "unaligned_explicitation unit must have empty src",
      });
    }
    if (unit.relation === "unaligned_reduction" && unit.tgt.length > 0) {
      out.push({
        code: "BAD_UNALIGNED_LABEL",
        locus,
        message: "unaligned_reduction unit must have empty tgt",
      });
    }
    for (const i of unit.src) {
      if (i < 0 || i >= srcLen) {
        out.push({ code: "BAD_INDEX", locus, message: `src index ${i} out of range` });
      }
    }
    for (const j of unit.tgt) {
      if (j < 0 || j >= tgtLen) {
        out.push({ code: "BAD_INDEX", locus, message: `tgt index ${j} out of range` });
      }
    }
    if (unit.sub != null) {
      const allowed = SUB_CATEGORIES[unit.relation] ?? [];
      if (!allowed.includes(unit.sub)) {
        out.push({
          code: "SUB_TAG_MISMATCH",
          locus,
          message: `sub-tag ${unit.sub} not valid for ${unit.relation}`,
        });
      }
    }
  });

  for (const [side, size, groups] of [
    ["src", srcLen, units.map((u) => u.src)],
    ["tgt", tgtLen, units.map((u) => u.tgt)],
  ] as const) {
    const counts = new Array<number>(size).fill(0);
    for (const group of groups) {
      for (const idx of group) {
        if (idx >= 0 && idx < size) counts[idx] += 1;
      }
    }
    counts.forEach((count, idx) => {
      if (count > 1) {
        out.push({
          code: "OVERLAP",
          locus: `${side}[${idx}]`,
          message: `${side} token ${idx} covered by ${count} units`,
        });
      }
    });
  }
  return out;
}

/** Tokens left uncovered on each side (draft-legal, shown as progress). */
export function uncovered(
  srcLen: number,
  tgtLen: number,
  units: UnitRecord[],
): { src: number[]; tgt: number[] } {
  const srcUsed = new Set(units.flatMap((u) => u.src));
  const tgtUsed = new Set(units.flatMap((u) => u.tgt));
  return {
    src: Array.from({ length: srcLen }, (_, i) => i).filter((i) => !srcUsed.has(i)),
    tgt: Array.from({ length: tgtLen }, (_, j) => j).filter((j) => !tgtUsed.has(j)),
  };
}
