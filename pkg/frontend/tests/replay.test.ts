// Record/replay harness: a recorded session log must render the same
// final frame as the live run, and its word screen positions must land
// on the snapshot coordinates under the documented viewport transform.

import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { parseEventLog, replayLog } from "../src/replay";
import { frameToSvg } from "../src/render";
import { wordKey } from "../src/types";
import { MapViewModel, UNIT_PX } from "../src/viewmodel";

const events = parseEventLog(
  readFileSync(new URL("../fixtures/session_events.jsonl", import.meta.url), "utf-8"));
const snapshot = JSON.parse(
  readFileSync(new URL("../fixtures/session_snapshot.json", import.meta.url), "utf-8"));

describe("event-log replay", () => {
  it("fixture is the recorded 50-event session", () => {
    expect(events).toHaveLength(50);
    expect(events.map((e) => e.seq)).toEqual([...events.keys()]);
  });

  it("final frame positions match the snapshot under the viewport transform", () => {
    const viewModel = new MapViewModel({ width: 900, height: 700 });
    viewModel.state = replayLog(events);
    viewModel.settle();
    const frame = viewModel.buildFrame();

    expect(frame.texts).toHaveLength(snapshot.words.length);
    const byKey = new Map(frame.texts.map((t) => [wordKey(t.ref), t]));
    for (const word of snapshot.words) {
      const glyph = byKey.get(`${word.lang}:${word.word}`);
      expect(glyph, `${word.lang}:${word.word} missing from frame`).toBeDefined();
      const expectedX = 900 / 2 + word.x[0] * UNIT_PX;
      const expectedY = 700 / 2 - word.x[1] * UNIT_PX;
      expect(Math.abs(glyph!.x - expectedX)).toBeLessThanOrEqual(0.5);
      expect(Math.abs(glyph!.y - expectedY)).toBeLessThanOrEqual(0.5);
    }
  });

  it("replay equals the live incremental run, frame for frame", () => {
    const live = new MapViewModel();
    for (const event of events) {
      live.applyEvent(event);
      live.animate(50); // partial animation between events, like a browser
    }
    live.settle();

    const replayed = new MapViewModel();
    replayed.state = replayLog(events);
    replayed.settle();

    expect(frameToSvg(live.buildFrame(), 900, 700))
      .toEqual(frameToSvg(replayed.buildFrame(), 900, 700));
  });

  it("replay tracks the pinned word through recentering", () => {
    const state = replayLog(events);
    expect(state.pinned).toEqual({ lang: "en", word: "beautiful" });
    const pinned = state.words.get("en:beautiful")!;
    expect(pinned.x).toEqual([0, 0]);
  });

  it("removals drop words and their lines", () => {
    const state = replayLog(events);
    const sizeBefore = state.words.size;
    state.apply({
      seq: events.length,
      kind: "word_removed",
      payload: { lang: "en", word: "lovely" },
    });
    expect(state.words.size).toBe(sizeBefore - 1);
    for (const edge of state.edges.values()) {
      expect(wordKey(edge.u)).not.toBe("en:lovely");
      expect(wordKey(edge.v)).not.toBe("en:lovely");
    }
  });
});
