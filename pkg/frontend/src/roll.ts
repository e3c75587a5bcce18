// The scrolling panel of example sentences, synchronized with the map.
// Entries flow upward like film credits; hovering pauses the scroll.

import { EdgeRef, ExamplePair, wordKey } from "./types";

export interface RollEntry {
  pair: ExamplePair;
  link: EdgeRef;
  /** draw the connector only when both highlighted words were found */
  connector: boolean;
  sourceIndex: number;
  targetIndex: number;
}

function clientTokens(text: string): string[] {
  return text.toLowerCase().split(/\s+/).filter((t) => t.length > 0);
}

export function makeEntry(pair: ExamplePair, link: EdgeRef): RollEntry {
  // orient the link to the pair's source/target sides
  const sourceWord = link.u.lang === pair.source_lang ? link.u : link.v;
  const targetWord = sourceWord === link.u ? link.v : link.u;
  const sourceIndex = clientTokens(pair.source_text).indexOf(sourceWord.word);
  const targetIndex = clientTokens(pair.target_text).indexOf(targetWord.word);
  return {
    pair,
    link,
    // degrade gracefully: entries whose highlight is not recoverable
    // after client-side tokenization lose the connector, never the text
    connector: sourceIndex >= 0 && targetIndex >= 0,
    sourceIndex,
    targetIndex,
  };
}

export class CorpusRoll {
  entries: RollEntry[] = [];
  offsetPx = 0;
  paused = false;
  speedPxPerSec: number;
  maxEntries: number;

  constructor(speedPxPerSec = 24, maxEntries = 60) {
    this.speedPxPerSec = speedPxPerSec;
    this.maxEntries = maxEntries;
  }

  /** Background sampler feed: entries join at the end, in arrival order. */
  append(pair: ExamplePair, link: EdgeRef): void {
    this.entries.push(makeEntry(pair, link));
    this.trim();
  }

  /** Click-driven batches jump the queue: prepended, in batch order. */
  prependBatch(batch: { pair: ExamplePair; link: EdgeRef }[]): void {
    this.entries.unshift(...batch.map(({ pair, link }) => makeEntry(pair, link)));
    this.trim();
  }

  private trim(): void {
    if (this.entries.length > this.maxEntries) {
      this.entries.length = this.maxEntries;
    }
  }

  hover(active: boolean): void {
    this.paused = active;
  }

  tick(elapsedMs: number): void {
    if (!this.paused) {
      this.offsetPx += (this.speedPxPerSec * elapsedMs) / 1000;
    }
  }

  highlightKeys(entry: RollEntry): [string, string] {
    return [wordKey(entry.link.u), wordKey(entry.link.v)];
  }
}
