/** Typed client for the annotation-service JSON API (the only backend surface
 * this app consumes). */

export interface UnitRecord {
  src: number[];
  tgt: number[];
  relation: string;
  sub?: string | null;
  provenance?: string;
}

export interface SuggestionRecord extends UnitRecord {
  confidence: string;
  ruleId: string;
}

export interface SentencePayload {
  id: string;
  genre: string;
  revision: number;
  state: "complete" | "draft";
  srcTokens: string[];
  tgtTokens: string[];
  units: UnitRecord[];
  suggestions: SuggestionRecord[];
  edges: [number, number][];
}

export interface GenreProgress {
  total: number;
  complete: number;
  draft: number;
}

export interface ProjectSummary {
  name: string;
  corpus: string;
  role: string;
  annotator: string;
  sentenceCount: number;
  sentenceIds: string[];
  genres: Record<string, GenreProgress>;
  version: string;
}

export interface PaletteEntry {
  name: string;
  hex: string;
}

export interface Palette {
  colors: Record<string, PaletteEntry>;
  collision: string[];
}

export interface ViolationRecord {
  code: string;
  locus: string;
  message: string;
}

export type PutResult =
  | { ok: true; revision: number; state: "complete" | "draft" }
  | { ok: false; status: 409; expected: number }
  | { ok: false; status: 400; violations: ViolationRecord[]; error: string }
  | { ok: false; status: number; error: string };

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private url(path: string): string {
    return this.base + path;
  }

  async getProject(): Promise<ProjectSummary> {
    const resp = await fetch(this.url("/api/project"));
    if (!resp.ok) throw new Error(`project fetch failed: ${resp.status}`);
    return (await resp.json()) as ProjectSummary;
  }

  async getPalette(): Promise<Palette> {
    const resp = await fetch(this.url("/api/palette"));
    if (!resp.ok) throw new Error(`palette fetch failed: ${resp.status}`);
    return (await resp.json()) as Palette;
  }

  async getSentence(id: string): Promise<SentencePayload> {
    const resp = await fetch(this.url(`/api/sentences/${encodeURIComponent(id)}`));
    if (!resp.ok) throw new Error(`sentence ${id} fetch failed: ${resp.status}`);
    return (await resp.json()) as SentencePayload;
  }

  async putUnits(id: string, revision: number, units: UnitRecord[]): Promise<PutResult> {
    const resp = await fetch(this.url(`/api/sentences/${encodeURIComponent(id)}/units`), {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ revision, units }),
    });
    const body = await resp.json();
    if (resp.ok) {
      return { ok: true, revision: body.revision, state: body.state };
    }
    if (resp.status === 409) {
      return { ok: false, status: 409, expected: body.expected };
    }
    if (resp.status === 400) {
      return {
        ok: false,
        status: 400,
        violations: (body.violations ?? []) as ViolationRecord[],
        error: body.error ?? "validation failed",
      };
    }
    return { ok: false, status: resp.status, error: body?.error ?? "request failed" };
  }

  async suggest(id: string): Promise<SuggestionRecord[]> {
    const resp = await fetch(
      this.url(`/api/sentences/${encodeURIComponent(id)}/suggest`),
      { method: "POST" },
    );
    if (!resp.ok) throw new Error(`suggest failed: ${resp.status}`);
    const body = await resp.json();
    return (body.suggestions ?? []) as SuggestionRecord[];
  }

  async flush(): Promise<number> {
    const resp = await fetch(this.url("/api/flush"), { method: "POST" });
    if (!resp.ok) throw new Error(`flush failed: ${resp.status}`);
    return ((await resp.json()) as { flushed: number }).flushed;
  }
}
