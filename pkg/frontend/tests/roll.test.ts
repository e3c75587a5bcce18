import { describe, expect, it } from "vitest";

import { CorpusRoll, makeEntry } from "../src/roll";
import { EdgeRef, ExamplePair } from "../src/types";

function pair(id: string, source: string, target: string): ExamplePair {
  return { id, source_lang: "en", target_lang: "ja",
           source_text: source, target_text: target, alignment: null };
}

const LINK: EdgeRef = {
  u: { lang: "en", word: "beautiful" },
  v: { lang: "ja", word: "kirei" },
};

describe("corpus roll", () => {
  it("queued examples enter in arrival order", () => {
    const roll = new CorpusRoll();
    for (let i = 0; i < 5; i++) {
      roll.append(pair(`s${i}`, "a beautiful sky", "kirei na sora"), LINK);
    }
    expect(roll.entries.map((e) => e.pair.id)).toEqual(["s0", "s1", "s2", "s3", "s4"]);
  });

  it("click batches are prepended", () => {
    const roll = new CorpusRoll();
    roll.append(pair("old", "a beautiful sky", "kirei na sora"), LINK);
    roll.prependBatch([
      { pair: pair("new1", "the day is beautiful", "hi wa kirei"), link: LINK },
      { pair: pair("new2", "a beautiful flower", "kirei na hana"), link: LINK },
    ]);
    expect(roll.entries.map((e) => e.pair.id)).toEqual(["new1", "new2", "old"]);
  });

  it("hover pauses the scroll and leaving resumes it", () => {
    const roll = new CorpusRoll(40);
    roll.tick(1000);
    expect(roll.offsetPx).toBeCloseTo(40);
    roll.hover(true);
    roll.tick(1000);
    expect(roll.offsetPx).toBeCloseTo(40); // frozen while hovered
    roll.hover(false);
    roll.tick(500);
    expect(roll.offsetPx).toBeCloseTo(60);
  });

  it("finds highlighted words on both sides regardless of link orientation", () => {
    const flipped: EdgeRef = { u: LINK.v, v: LINK.u };
    const entry = makeEntry(pair("s1", "a beautiful sky", "kirei na sora"), flipped);
    expect(entry.connector).toBe(true);
    expect(entry.sourceIndex).toBe(1);
    expect(entry.targetIndex).toBe(0);
  });

  it("entries whose highlight is lost by tokenization keep flowing without it", () => {
    const roll = new CorpusRoll();
    roll.append(pair("odd", "something else entirely", "mattaku chigau"), LINK);
    expect(roll.entries).toHaveLength(1);
    expect(roll.entries[0].connector).toBe(false);
  });

  it("the roll is bounded", () => {
    const roll = new CorpusRoll(24, 10);
    for (let i = 0; i < 25; i++) {
      roll.append(pair(`s${i}`, "a beautiful sky", "kirei na sora"), LINK);
    }
    expect(roll.entries).toHaveLength(10);
  });
});
