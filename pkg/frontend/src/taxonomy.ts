/** Relation taxonomy constants mirrored from the backend so the editor can
 * pre-check drafts without a round trip. */

export const RELATIONS = [
  "literal",
  "equivalence",
  "generalization",
  "particularization",
  "modulation",
  "transposition",
  "modulation_transposition",
  "figurative",
  "lexical_shift",
  "translation_error",
  "uncertain",
  "no_type",
  "unaligned_explicitation",
  "unaligned_reduction",
] as const;

export type Relation = (typeof RELATIONS)[number];

/** The 11 labels offered in the relabel menu (structural labels are assigned
 * by the unaligned rules, not picked from the drop list). */
export const MENU_RELATIONS: Relation[] = [
  "literal",
  "equivalence",
  "transposition",
  "modulation",
  "modulation_transposition",
  "generalization",
  "particularization",
  "figurative",
  "lexical_shift",
  "uncertain",
  "translation_error",
];

/** Keyboard shortcut per menu relation, in menu order. */
export const MENU_KEYS = ["1", "2", "3", "4", "5", "6", "7", "8", "9", "0", "e"];

export const SUB_CATEGORIES: Record<string, string[]> = {
  equivalence: ["slight_semantic_change", "named_entity", "fixed_expression", "adjective", "refined"],
  generalization: ["short_name", "hyperonym"],
  lexical_shift: ["plural", "tense"],
  modulation: ["passive_to_active", "irony", "other"],
  modulation_transposition: ["proposition", "other"],
  particularization: ["pronoun", "noun", "verb", "adv_adj", "other"],
};

export function isRelation(value: string): value is Relation {
  return (RELATIONS as readonly string[]).includes(value);
}
