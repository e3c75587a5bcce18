// Event-log replay: mirrors the server's semantics so that replaying
// a recorded log reconstructs the exact same map state.

import { SessionEvent, SessionSnapshot, WordRef, edgeKeyOf, wordKey } from "./types";

export interface WordState {
  ref: WordRef;
  x: [number, number];
  t: number;
  occ: number;
}

export interface EdgeState {
  u: WordRef;
  v: WordRef;
  c: number;
  k: number; // latest spring constant; 0 until a round has run
}

export class MapState {
  words = new Map<string, WordState>();
  edges = new Map<string, EdgeState>();
  pinned: WordRef | null = null;
  seq = -1;

  static fromSnapshot(snapshot: SessionSnapshot): MapState {
    const state = new MapState();
    for (const w of snapshot.words) {
      state.words.set(wordKey(w), {
        ref: { lang: w.lang, word: w.word },
        x: [w.x[0], w.x[1]],
        t: w.t,
        occ: w.occ,
      });
    }
    for (const e of snapshot.edges) {
      state.edges.set(edgeKeyOf(e.u, e.v), { u: e.u, v: e.v, c: e.c, k: 0 });
    }
    state.pinned = snapshot.pinned;
    state.seq = snapshot.seq;
    return state;
  }

  apply(event: SessionEvent): void {
    if (this.seq >= 0 && event.seq <= this.seq) {
      return; // already seen (snapshot overlaps the stream start)
    }
    const p = event.payload;
    switch (event.kind) {
      case "word_added": {
        const ref = { lang: p.lang, word: p.word };
        this.words.set(wordKey(ref), {
          ref,
          x: [p.x[0], p.x[1]],
          t: p.t,
          occ: p.occ ?? 0,
        });
        if (this.pinned === null) {
          this.pinned = ref;
        }
        for (const other of p.edges ?? []) {
          if (other.lang === ref.lang) {
            continue; // never a line within one language
          }
          const otherRef = { lang: other.lang, word: other.word };
          this.edges.set(edgeKeyOf(ref, otherRef), {
            u: ref,
            v: otherRef,
            c: other.c,
            k: 0,
          });
        }
        break;
      }
      case "word_removed": {
        const key = wordKey(p);
        this.words.delete(key);
        for (const [edgeKey, edge] of [...this.edges]) {
          if (wordKey(edge.u) === key || wordKey(edge.v) === key) {
            this.edges.delete(edgeKey);
          }
        }
        break;
      }
      case "coords_updated": {
        for (const c of p.coords) {
          const word = this.words.get(wordKey(c));
          if (word) {
            word.x = [c.x[0], c.x[1]];
          }
        }
        for (const s of p.springs ?? []) {
          const edge = this.edges.get(edgeKeyOf(s.u, s.v));
          if (edge) {
            edge.k = s.k;
          }
        }
        break;
      }
      case "recentered": {
        const target = this.words.get(wordKey(p));
        if (!target) {
          break;
        }
        const [ox, oy] = target.x;
        for (const word of this.words.values()) {
          word.x = [word.x[0] - ox, word.x[1] - oy];
        }
        target.x = [0, 0];
        this.pinned = { lang: p.lang, word: p.word };
        break;
      }
      case "converged": {
        for (const word of this.words.values()) {
          word.t += 1;
        }
        break;
      }
    }
    this.seq = event.seq;
  }
}

export function replayLog(events: SessionEvent[]): MapState {
  const state = new MapState();
  for (const event of events) {
    state.apply(event);
  }
  return state;
}

export function parseEventLog(jsonl: string): SessionEvent[] {
  return jsonl
    .split("\n")
    .filter((line) => line.trim().length > 0)
    .map((line) => JSON.parse(line) as SessionEvent);
}
