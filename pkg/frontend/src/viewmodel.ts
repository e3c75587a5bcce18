// The map view model: replayed session state plus a viewport, reduced
// to a drawable frame.
//
// Viewport transform (the documented rule the tests pin down):
//   screenX = width/2  + x * UNIT_PX * zoom + panX
//   screenY = height/2 - y * UNIT_PX * zoom + panY
// so the pinned word (always at space origin) renders at the viewport
// center under identity pan/zoom.  Text sizes and line widths scale
// linearly with zoom.

import { MapState } from "./replay";
import { SessionEvent, SessionSnapshot, WordRef, edgeKeyOf, wordKey } from "./types";

export const UNIT_PX = 120;
export const TEXT_MIN = 11;
export const TEXT_RANGE = 17;
export const LINE_MIN = 0.75;
export const LINE_RANGE = 4.5;
export const ALPHA_MIN = 0.2;
export const ALPHA_RANGE = 0.8;
export const LINE_COLOR = "#8b0000";

export interface Viewport {
  width: number;
  height: number;
  panX: number;
  panY: number;
  zoom: number;
}

export interface TextGlyph {
  ref: WordRef;
  x: number;
  y: number;
  size: number;
  pinned: boolean;
}

export interface LineGlyph {
  u: WordRef;
  v: WordRef;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  width: number;
  alpha: number;
}

export interface Frame {
  texts: TextGlyph[];
  lines: LineGlyph[];
}

const ANIMATION_MS = 150;

export class MapViewModel {
  state = new MapState();
  viewport: Viewport;
  connected = false;
  // display positions trail the authoritative ones for ~150 ms; purely
  // cosmetic, never fed back into anything
  private display = new Map<string, [number, number]>();

  constructor(viewport?: Partial<Viewport>) {
    this.viewport = {
      width: 900,
      height: 700,
      panX: 0,
      panY: 0,
      zoom: 1,
      ...viewport,
    };
  }

  resetFromSnapshot(snapshot: SessionSnapshot): void {
    this.state = MapState.fromSnapshot(snapshot);
    this.display.clear();
    this.settle();
  }

  applyEvent(event: SessionEvent): void {
    this.state.apply(event);
    for (const key of [...this.display.keys()]) {
      if (!this.state.words.has(key)) {
        this.display.delete(key);
      }
    }
  }

  /** Advance display positions toward the authoritative ones. */
  animate(elapsedMs: number): void {
    const blend = Math.min(1, elapsedMs / ANIMATION_MS);
    for (const [key, word] of this.state.words) {
      const shown = this.display.get(key);
      if (!shown) {
        this.display.set(key, [word.x[0], word.x[1]]);
        continue;
      }
      shown[0] += (word.x[0] - shown[0]) * blend;
      shown[1] += (word.x[1] - shown[1]) * blend;
    }
  }

  /** Snap display positions to the authoritative coordinates. */
  settle(): void {
    this.animate(ANIMATION_MS);
  }

  toScreen(x: [number, number]): [number, number] {
    const v = this.viewport;
    return [
      v.width / 2 + x[0] * UNIT_PX * v.zoom + v.panX,
      v.height / 2 - x[1] * UNIT_PX * v.zoom + v.panY,
    ];
  }

  buildFrame(): Frame {
    const v = this.viewport;
    const texts: TextGlyph[] = [];
    let maxOcc = 0;
    for (const word of this.state.words.values()) {
      maxOcc = Math.max(maxOcc, word.occ);
    }
    const pinnedKey = this.state.pinned ? wordKey(this.state.pinned) : "";
    const byKey = (a: [string, unknown], b: [string, unknown]) =>
      a[0] < b[0] ? -1 : a[0] > b[0] ? 1 : 0;
    for (const [key, word] of [...this.state.words].sort(byKey)) {
      const shown = this.display.get(key) ?? word.x;
      const [sx, sy] = this.toScreen(shown);
      // size grows monotonically with corpus frequency (compressed)
      const share = maxOcc > 0 ? Math.sqrt(word.occ / maxOcc) : 0;
      texts.push({
        ref: word.ref,
        x: sx,
        y: sy,
        size: (TEXT_MIN + TEXT_RANGE * share) * v.zoom,
        pinned: key === pinnedKey,
      });
    }
    const lines: LineGlyph[] = [];
    let maxC = 0;
    let maxEnergy = 0;
    const energies = new Map<string, number>();
    for (const [key, edge] of this.state.edges) {
      const u = this.state.words.get(wordKey(edge.u));
      const w = this.state.words.get(wordKey(edge.v));
      if (!u || !w) {
        continue;
      }
      maxC = Math.max(maxC, edge.c);
      const dx = u.x[0] - w.x[0];
      const dy = u.x[1] - w.x[1];
      const energy = edge.k * (dx * dx + dy * dy);
      energies.set(key, energy);
      maxEnergy = Math.max(maxEnergy, energy);
    }
    for (const [key, edge] of [...this.state.edges].sort(byKey)) {
      const u = this.state.words.get(wordKey(edge.u));
      const w = this.state.words.get(wordKey(edge.v));
      if (!u || !w || edge.u.lang === edge.v.lang) {
        continue;
      }
      const [x1, y1] = this.toScreen(this.display.get(wordKey(edge.u)) ?? u.x);
      const [x2, y2] = this.toScreen(this.display.get(wordKey(edge.v)) ?? w.x);
      const energy = energies.get(key) ?? 0;
      lines.push({
        u: edge.u,
        v: edge.v,
        x1,
        y1,
        x2,
        y2,
        width: (LINE_MIN + (maxC > 0 ? (LINE_RANGE * edge.c) / maxC : 0)) * v.zoom,
        alpha: ALPHA_MIN + (maxEnergy > 0 ? (ALPHA_RANGE * energy) / maxEnergy : 0),
      });
    }
    return { texts, lines };
  }

  wordAt(screenX: number, screenY: number, slopPx = 12): WordRef | null {
    // hit-test against the current frame, nearest within the slop
    let best: WordRef | null = null;
    let bestDist = slopPx;
    for (const glyph of this.buildFrame().texts) {
      const dist = Math.hypot(glyph.x - screenX, glyph.y - screenY);
      if (dist <= bestDist) {
        best = glyph.ref;
        bestDist = dist;
      }
    }
    return best;
  }

  lineAt(screenX: number, screenY: number, slopPx = 8): LineGlyph | null {
    let best: LineGlyph | null = null;
    let bestDist = slopPx;
    for (const line of this.buildFrame().lines) {
      const dist = pointToSegment(screenX, screenY, line);
      if (dist <= bestDist) {
        best = line;
        bestDist = dist;
      }
    }
    return best;
  }

  pan(dxPx: number, dyPx: number): void {
    this.viewport.panX += dxPx;
    this.viewport.panY += dyPx;
  }

  zoomBy(factor: number): void {
    this.viewport.zoom *= factor;
  }
}

function pointToSegment(px: number, py: number, line: LineGlyph): number {
  const vx = line.x2 - line.x1;
  const vy = line.y2 - line.y1;
  const lengthSq = vx * vx + vy * vy;
  const t = lengthSq === 0
    ? 0
    : Math.max(0, Math.min(1, ((px - line.x1) * vx + (py - line.y1) * vy) / lengthSq));
  return Math.hypot(line.x1 + t * vx - px, line.y1 + t * vy - py);
}

export { edgeKeyOf };
