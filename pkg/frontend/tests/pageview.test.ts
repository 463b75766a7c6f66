import { describe, expect, it } from "vitest";
import {
  buildPageView,
  cellsInRect,
  fullyLabeled,
  hitTest,
  paintCells,
} from "../src/pageview.js";
import { parsePagePayload } from "../src/schema.js";
import { fixture } from "./helpers.js";

const freshView = () => buildPageView(parsePagePayload(fixture("page-fresh.json")));
const correctionView = () => buildPageView(parsePagePayload(fixture("page-correction.json")));

describe("buildPageView", () => {
  it("starts fresh pages with every cell unlabeled", () => {
    const view = freshView();
    expect(view.mode).toBe("fresh");
    expect(view.modelId).toBeNull();
    expect([...view.labels.values()].every((l) => l === null)).toBe(true);
    expect(view.confidences.size).toBe(0);
    expect(fullyLabeled(view)).toBe(false);
  });

  it("pre-fills correction pages from the predictions", () => {
    const view = correctionView();
    expect(view.mode).toBe("correction");
    expect(view.modelId).toMatch(/^[0-9a-f]{64}$/);
    expect([...view.labels.values()].every((l) => l !== null)).toBe(true);
    expect(view.confidences.size).toBe(view.cells.length);
    for (const conf of view.confidences.values()) {
      expect(conf).toBeGreaterThanOrEqual(0);
      expect(conf).toBeLessThanOrEqual(1);
    }
    expect(fullyLabeled(view)).toBe(true);
  });
});

describe("hitTest", () => {
  it("returns the cell containing a point", () => {
    const view = freshView();
    const cell = view.cells[0]!;
    const [x0, y0, x1, y1] = cell.bbox;
    expect(hitTest(view, (x0 + x1) / 2, (y0 + y1) / 2)).toBe(cell.id);
  });

  it("misses empty page regions", () => {
    expect(hitTest(freshView(), 5, 5)).toBeNull();
  });
});

describe("cellsInRect", () => {
  it("collects every cell the rectangle touches, any drag direction", () => {
    const view = freshView();
    const first = view.cells[0]!.bbox;
    const last = view.cells[view.cells.length - 1]!.bbox;
    const down = cellsInRect(view, first[0] - 1, first[3] + 1, last[2] + 1, last[1] - 1);
    const up = cellsInRect(view, last[2] + 1, last[1] - 1, first[0] - 1, first[3] + 1);
    expect(down).toEqual(view.cells.map((c) => c.id));
    expect(up).toEqual(down);
  });

  it("returns nothing for a rectangle off the text", () => {
    expect(cellsInRect(freshView(), 0, 0, 10, 10)).toEqual([]);
  });
});

describe("paintCells", () => {
  it("labels a single clicked cell", () => {
    const view = freshView();
    const { view: painted, changed } = paintCells(view, [0], "title");
    expect(changed).toEqual([0]);
    expect(painted.labels.get(0)).toBe("title");
    // the original view is untouched
    expect(view.labels.get(0)).toBeNull();
  });

  it("labels a drag selection in one step", () => {
    const view = freshView();
    const ids = view.cells.map((c) => c.id);
    const { view: painted, changed } = paintCells(view, ids, "text");
    expect(changed).toEqual(ids);
    expect(fullyLabeled(painted)).toBe(true);
  });

  it("treats a same-label repaint as a no-op", () => {
    const first = paintCells(freshView(), [0], "title");
    const second = paintCells(first.view, [0], "title");
    expect(second.changed).toEqual([]);
    expect(second.view).toBe(first.view);
  });

  it("reports only the cells that actually changed", () => {
    const first = paintCells(freshView(), [0, 1], "text");
    const second = paintCells(first.view, [0, 1, 2], "text");
    expect(second.changed).toEqual([2]);
  });

  it("rejects labels outside the label set", () => {
    expect(() => paintCells(freshView(), [0], "banana")).toThrow(/not in the label set/);
  });

  it("rejects unknown cell ids", () => {
    expect(() => paintCells(freshView(), [999], "title")).toThrow(/no cell with id 999/);
  });
});
