/** Turns a page view into drawing commands.

Kept free of canvas APIs so the overlay logic is testable: the host
iterates the commands and maps them onto whatever surface it uses.
Cell geometry arrives in PDF points (origin bottom-left, y up); canvas
space has the origin top-left, so y flips against the page height.
*/

import type { PageView } from "./pageview.js";
import { colorFor } from "./palette.js";

export interface RectCommand {
  kind: "rect";
  cellId: number;
  x: number;
  y: number;
  width: number;
  height: number;
  /** fill for labeled cells, null leaves the cell hollow */
  fill: string | null;
  stroke: string;
  strokeWidth: number;
}

export interface TextCommand {
  kind: "text";
  cellId: number;
  x: number;
  y: number;
  text: string;
  color: string;
}

export type DrawCommand = RectCommand | TextCommand;

const UNLABELED_STROKE = "#808080";
const SELECTION_STROKE = "#0000ff";
const CONFIDENCE_COLOR = "#333333";

export interface RenderOptions {
  /** Cells currently in the drag/click selection. */
  selection?: ReadonlySet<number>;
  /** Pixels per PDF point. */
  scale?: number;
}

export function renderPage(view: PageView, options: RenderOptions = {}): DrawCommand[] {
  const selection = options.selection ?? new Set<number>();
  const scale = options.scale ?? 1;
  const pageH = view.geometry.height;
  const commands: DrawCommand[] = [];
  for (const cell of view.cells) {
    const [x0, y0, x1, y1] = cell.bbox;
    const label = view.labels.get(cell.id) ?? null;
    const selected = selection.has(cell.id);
    commands.push({
      kind: "rect",
      cellId: cell.id,
      x: x0 * scale,
      y: (pageH - y1) * scale,
      width: (x1 - x0) * scale,
      height: (y1 - y0) * scale,
      fill: label === null ? null : colorFor(view.palette, label),
      stroke: selected ? SELECTION_STROKE : UNLABELED_STROKE,
      strokeWidth: selected ? 2 : 1,
    });
    // correction mode shows what the model believed and how strongly
    if (view.mode === "correction" && view.confidences.has(cell.id)) {
      const conf = view.confidences.get(cell.id)!;
      commands.push({
        kind: "text",
        cellId: cell.id,
        x: x0 * scale,
        y: (pageH - y1) * scale - 2,
        text: `${(conf * 100).toFixed(0)}%`,
        color: CONFIDENCE_COLOR,
      });
    }
  }
  return commands;
}
