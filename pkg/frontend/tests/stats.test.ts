import { describe, expect, it } from "vitest";
import { sessionStatsSchema } from "../src/schema.js";
import { buildSparkline } from "../src/stats.js";
import { fixture } from "./helpers.js";

const recorded = () => sessionStatsSchema.parse(fixture("session-stats.json"));

describe("buildSparkline", () => {
  it("plots the recorded stats payload", () => {
    const line = buildSparkline(recorded(), 120, 30);
    expect(line.points).toHaveLength(recorded().windows.length);
    expect(line.maxRate).toBeGreaterThan(0);
  });

  it("centers a single window and drops out-of-span markers", () => {
    const line = buildSparkline(
      { windows: [{ end: 100, pages_per_minute: 3 }], retrain_markers: [999] },
      120,
      30,
    );
    expect(line.points[0]!.x).toBe(60);
    expect(line.markers).toEqual([]);
  });

  it("spreads windows over time and scales rates to the height", () => {
    const stats = {
      windows: [
        { end: 0, pages_per_minute: 1 },
        { end: 50, pages_per_minute: 4 },
        { end: 100, pages_per_minute: 2 },
      ],
      retrain_markers: [50.0],
    };
    const line = buildSparkline(stats, 200, 40);
    expect(line.points.map((p) => p.x)).toEqual([0, 100, 200]);
    expect(line.points[1]!.y).toBe(0); // max rate touches the top
    expect(line.points[0]!.y).toBe(30); // 1/4 of max -> 1/4 of the height up
    expect(line.maxRate).toBe(4);
    expect(line.markers).toEqual([100]);
  });

  it("keeps a zero-rate session on the baseline", () => {
    const stats = {
      windows: [
        { end: 0, pages_per_minute: 0 },
        { end: 10, pages_per_minute: 0 },
      ],
      retrain_markers: [],
    };
    const line = buildSparkline(stats, 100, 20);
    expect(line.points.every((p) => p.y === 20)).toBe(true);
  });

  it("handles an empty session and rejects bad dimensions", () => {
    expect(buildSparkline({ windows: [], retrain_markers: [] }, 10, 10)).toEqual({
      points: [],
      markers: [],
      maxRate: 0,
    });
    expect(() => buildSparkline(recorded(), 0, 10)).toThrow(/positive/);
  });
});
