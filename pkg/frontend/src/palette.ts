/** Label palette: one color per label-set entry, stable across sessions.

The service sends colors with its label set; entries that arrive without
one fall back to a named default, and labels outside the defaults get a
deterministic hue so two annotators always see the same coloring.
*/

/** Label-set entry as the palette sees it; the service always sends a
color, but locally defined extra labels may not have one yet. */
export interface PaletteSource {
  name: string;
  color?: string | null;
}

export interface PaletteEntry {
  name: string;
  color: string;
  /** 1-9 hotkey, or null past the ninth entry. */
  key: number | null;
}

const NAMED_DEFAULTS: Record<string, string> = {
  title: "#ff0000",
  author: "#00b050",
  authors: "#00b050",
  affiliation: "#551a8b",
  subtitle: "#8b0000",
  text: "#ffd700",
  "main-text": "#ffd700",
  caption: "#ffa500",
  picture: "#fffff0",
  table: "#4682b4",
  list: "#800080",
};

function hslToHex(h: number, s: number, l: number): string {
  const a = s * Math.min(l, 1 - l);
  const f = (n: number) => {
    const k = (n + h / 30) % 12;
    const v = l - a * Math.max(-1, Math.min(k - 3, Math.min(9 - k, 1)));
    return Math.round(255 * v)
      .toString(16)
      .padStart(2, "0");
  };
  return `#${f(0)}${f(8)}${f(4)}`;
}

/** Golden-angle hue walk keyed on the label's position, skipping hues
already taken so every entry stays visually distinct. */
function fallbackColor(index: number, taken: Set<string>): string {
  for (let step = 0; step < 360; step++) {
    const hue = ((index + step) * 137.50776405003785) % 360;
    const color = hslToHex(hue, 0.65, 0.55);
    if (!taken.has(color)) return color;
  }
  throw new Error("palette exhausted");
}

export function buildPalette(labelSet: readonly PaletteSource[]): PaletteEntry[] {
  if (labelSet.length === 0) {
    throw new Error("label set must not be empty");
  }
  const taken = new Set<string>();
  const entries: PaletteEntry[] = [];
  for (const [i, entry] of labelSet.entries()) {
    let color = entry.color ?? NAMED_DEFAULTS[entry.name] ?? null;
    if (color === null || taken.has(color)) {
      color = fallbackColor(i, taken);
    }
    taken.add(color);
    entries.push({ name: entry.name, color, key: i < 9 ? i + 1 : null });
  }
  return entries;
}

/** Resolve a pressed digit key (1-9) to its palette entry. */
export function entryForKey(palette: readonly PaletteEntry[], digit: number): PaletteEntry | null {
  if (!Number.isInteger(digit) || digit < 1 || digit > 9) return null;
  return palette[digit - 1] ?? null;
}

export function colorFor(palette: readonly PaletteEntry[], label: string): string {
  const entry = palette.find((e) => e.name === label);
  if (entry === undefined) {
    throw new Error(`label ${JSON.stringify(label)} is not in the palette`);
  }
  return entry.color;
}
