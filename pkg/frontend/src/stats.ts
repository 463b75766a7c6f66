/** Session-rate sparkline geometry.

Maps the service's sliding-window rates into a small plot: x follows
the submit time of each window's last page, y the pages-per-minute
rate, and retrain times become vertical marker positions so rate jumps
line up with the model that caused them.
*/

import type { SessionStatsPayload } from "./types.js";

export interface SparklinePoint {
  x: number;
  y: number;
  pagesPerMinute: number;
}

export interface Sparkline {
  points: SparklinePoint[];
  /** x positions of retrains that fall inside the plotted time span */
  markers: number[];
  maxRate: number;
}

export function buildSparkline(
  stats: SessionStatsPayload,
  width: number,
  height: number,
): Sparkline {
  if (width <= 0 || height <= 0) throw new Error("sparkline needs a positive size");
  const windows = stats.windows;
  if (windows.length === 0) {
    return { points: [], markers: [], maxRate: 0 };
  }
  const t0 = windows[0]!.end;
  const t1 = windows[windows.length - 1]!.end;
  const span = t1 - t0;
  const xOf = (t: number) => (span > 0 ? ((t - t0) / span) * width : width / 2);
  const maxRate = Math.max(...windows.map((w) => w.pages_per_minute));
  // y=0 is the top of the plot; a zero rate sits on the baseline
  const yOf = (rate: number) => (maxRate > 0 ? height - (rate / maxRate) * height : height);
  const points = windows.map((w) => ({
    x: xOf(w.end),
    y: yOf(w.pages_per_minute),
    pagesPerMinute: w.pages_per_minute,
  }));
  const markers = stats.retrain_markers.filter((t) => t >= t0 && t <= t1).map(xOf);
  return { points, markers, maxRate };
}
