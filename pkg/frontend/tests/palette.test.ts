import { describe, expect, it } from "vitest";
import { buildPalette, colorFor, entryForKey } from "../src/palette.js";
import type { PagePayload } from "../src/types.js";
import { fixture } from "./helpers.js";

const labelSet = () => fixture<PagePayload>("page-fresh.json").label_set;

describe("buildPalette", () => {
  it("keeps the colors the service assigned", () => {
    const palette = buildPalette(labelSet());
    expect(palette).toHaveLength(labelSet().length);
    for (const [i, entry] of labelSet().entries()) {
      expect(palette[i]).toMatchObject({ name: entry.name, color: entry.color });
    }
  });

  it("gives every label-set entry exactly one distinct color", () => {
    const palette = buildPalette(labelSet());
    const colors = new Set(palette.map((e) => e.color));
    expect(colors.size).toBe(palette.length);
  });

  it("fills missing colors from the named defaults", () => {
    const palette = buildPalette([{ name: "title" }, { name: "caption", color: null }]);
    expect(palette[0]!.color).toBe("#ff0000");
    expect(palette[1]!.color).toBe("#ffa500");
  });

  it("invents stable distinct colors for unknown labels", () => {
    const entries = [{ name: "margin-note" }, { name: "footnote" }, { name: "equation" }];
    const first = buildPalette(entries);
    const again = buildPalette(entries);
    expect(first).toEqual(again);
    expect(new Set(first.map((e) => e.color)).size).toBe(3);
    for (const entry of first) {
      expect(entry.color).toMatch(/^#[0-9a-f]{6}$/);
    }
  });

  it("resolves default-color collisions to distinct colors", () => {
    // text and main-text share a default; the second one must shift
    const palette = buildPalette([{ name: "text" }, { name: "main-text" }]);
    expect(palette[0]!.color).not.toBe(palette[1]!.color);
  });

  it("rejects an empty label set", () => {
    expect(() => buildPalette([])).toThrow(/empty/);
  });
});

describe("hotkeys", () => {
  it("maps digits 1-9 to the first nine entries", () => {
    const palette = buildPalette(labelSet());
    expect(entryForKey(palette, 1)?.name).toBe(palette[0]!.name);
    expect(entryForKey(palette, palette.length)?.name).toBe(palette[palette.length - 1]!.name);
  });

  it("ignores digits without an entry", () => {
    const palette = buildPalette([{ name: "title", color: "#ff0000" }]);
    expect(entryForKey(palette, 2)).toBeNull();
    expect(entryForKey(palette, 0)).toBeNull();
    expect(entryForKey(palette, 1.5)).toBeNull();
  });

  it("assigns keys only to the first nine labels", () => {
    const many = Array.from({ length: 11 }, (_, i) => ({ name: `label-${i}` }));
    const palette = buildPalette(many);
    expect(palette[8]!.key).toBe(9);
    expect(palette[9]!.key).toBeNull();
    expect(palette[10]!.key).toBeNull();
  });
});

describe("colorFor", () => {
  it("finds a label's color and rejects unknown labels", () => {
    const palette = buildPalette(labelSet());
    expect(colorFor(palette, "title")).toBe("#ff0000");
    expect(() => colorFor(palette, "banana")).toThrow(/not in the palette/);
  });
});
