// Wire types for the /v1 JSON + SSE contract.

export interface WordRef {
  lang: string;
  word: string;
}

export function wordKey(ref: WordRef): string {
  return `${ref.lang}:${ref.word}`;
}

export interface EdgeRef {
  u: WordRef;
  v: WordRef;
}

export function edgeKeyOf(u: WordRef, v: WordRef): string {
  const a = wordKey(u);
  const b = wordKey(v);
  return a <= b ? `${a}|${b}` : `${b}|${a}`;
}

export interface SessionEvent {
  seq: number;
  kind: "word_added" | "word_removed" | "coords_updated" | "recentered" | "converged";
  payload: any;
}

export interface SessionSnapshot {
  words: { lang: string; word: string; x: number[]; t: number; occ: number }[];
  edges: { u: WordRef; v: WordRef; c: number }[];
  pinned: WordRef;
  seq: number;
  phase: string;
}

export interface CreatedSession {
  session_id: string;
  snapshot: SessionSnapshot;
}

export interface ExamplePair {
  id: string;
  source_lang: string;
  target_lang: string;
  source_text: string;
  target_text: string;
  alignment: [number, number][] | null;
}

export interface ExampleBatch {
  examples: { pair: ExamplePair; link: EdgeRef }[];
  weights: { u: WordRef; v: WordRef; weight: number }[];
}

export class ServiceError extends Error {
  code: string;
  status: number;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.code = code;
    this.status = status;
  }
}
