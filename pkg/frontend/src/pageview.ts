/** Page view state: cells, their current labels, and the palette.

All coordinates here are PDF points with the origin at the bottom-left;
the renderer flips to canvas space. Painting is immutable so undo and
optimistic rollback can hold on to old views.
*/

import { buildPalette, type PaletteEntry } from "./palette.js";
import type { BBox, CellView, PagePayload } from "./types.js";

export interface PageView {
  docId: string;
  pageNumber: number;
  nPages: number;
  geometry: { width: number; height: number };
  cells: CellView[];
  /** cell id -> current label, null while unlabeled */
  labels: Map<number, string | null>;
  /** cell id -> model confidence; only populated in correction mode */
  confidences: Map<number, number>;
  mode: "fresh" | "correction";
  modelId: string | null;
  palette: PaletteEntry[];
}

export function buildPageView(payload: PagePayload): PageView {
  const labels = new Map<number, string | null>();
  const confidences = new Map<number, number>();
  for (const [i, cell] of payload.cells.entries()) {
    if (payload.predictions !== null) {
      labels.set(cell.id, payload.predictions.labels[i] ?? null);
      confidences.set(cell.id, payload.predictions.confidences[i] ?? 0);
    } else {
      labels.set(cell.id, null);
    }
  }
  return {
    docId: payload.doc_id,
    pageNumber: payload.page_number,
    nPages: payload.n_pages,
    geometry: payload.geometry,
    cells: payload.cells,
    labels,
    confidences,
    mode: payload.mode,
    modelId: payload.predictions?.model_id ?? null,
    palette: buildPalette(payload.label_set),
  };
}

function contains(bbox: BBox, x: number, y: number): boolean {
  return x >= bbox[0] && x <= bbox[2] && y >= bbox[1] && y <= bbox[3];
}

/** Cell under a click, or null. Later cells win when boxes overlap. */
export function hitTest(view: PageView, x: number, y: number): number | null {
  for (let i = view.cells.length - 1; i >= 0; i--) {
    const cell = view.cells[i]!;
    if (contains(cell.bbox, x, y)) return cell.id;
  }
  return null;
}

/** Cells intersecting a drag rectangle given by any two corners. */
export function cellsInRect(
  view: PageView,
  x0: number,
  y0: number,
  x1: number,
  y1: number,
): number[] {
  const left = Math.min(x0, x1);
  const right = Math.max(x0, x1);
  const bottom = Math.min(y0, y1);
  const top = Math.max(y0, y1);
  const hits: number[] = [];
  for (const cell of view.cells) {
    const [bx0, by0, bx1, by1] = cell.bbox;
    if (bx0 <= right && bx1 >= left && by0 <= top && by1 >= bottom) {
      hits.push(cell.id);
    }
  }
  return hits;
}

export interface PaintResult {
  view: PageView;
  /** ids whose label actually changed; empty means the paint was a no-op */
  changed: number[];
}

/** Apply a label to the selected cells. Repainting a cell with the label
it already has changes nothing, so a pure re-click never dirties the
session. */
export function paintCells(
  view: PageView,
  selection: Iterable<number>,
  label: string,
): PaintResult {
  if (!view.palette.some((entry) => entry.name === label)) {
    throw new Error(`label ${JSON.stringify(label)} is not in the label set`);
  }
  const changed: number[] = [];
  for (const id of selection) {
    if (!view.labels.has(id)) {
      throw new Error(`no cell with id ${id} on this page`);
    }
    if (view.labels.get(id) !== label) changed.push(id);
  }
  if (changed.length === 0) return { view, changed };
  const labels = new Map(view.labels);
  for (const id of changed) labels.set(id, label);
  return { view: { ...view, labels }, changed };
}

/** True once every cell carries a label; empty pages pass trivially. */
export function fullyLabeled(view: PageView): boolean {
  for (const label of view.labels.values()) {
    if (label === null) return false;
  }
  return true;
}
