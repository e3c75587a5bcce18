// Frame -> SVG markup.  Pure string building so the record/replay
// tests can compare frames without a DOM.

import { Frame } from "./viewmodel";
import { LINE_COLOR } from "./viewmodel";
import { wordKey } from "./types";

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const fmt = (value: number) => value.toFixed(2);

export function frameToSvg(frame: Frame, width: number, height: number): string {
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}">`,
  ];
  for (const line of frame.lines) {
    parts.push(
      `<line x1="${fmt(line.x1)}" y1="${fmt(line.y1)}" x2="${fmt(line.x2)}" ` +
        `y2="${fmt(line.y2)}" stroke="${LINE_COLOR}" stroke-width="${fmt(line.width)}" ` +
        `stroke-opacity="${fmt(line.alpha)}" data-u="${escapeXml(wordKey(line.u))}" ` +
        `data-v="${escapeXml(wordKey(line.v))}"/>`,
    );
  }
  for (const text of frame.texts) {
    const weight = text.pinned ? ' font-weight="bold"' : "";
    parts.push(
      `<text x="${fmt(text.x)}" y="${fmt(text.y)}" font-size="${fmt(text.size)}" ` +
        `text-anchor="middle" font-family="sans-serif"${weight} ` +
        `data-word="${escapeXml(wordKey(text.ref))}">` +
        `${escapeXml(text.ref.word)}</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("\n");
}
