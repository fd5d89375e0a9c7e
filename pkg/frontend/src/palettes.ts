/** Highlight color schemes: one colorful, one soft gradient, one grayscale.
 * Every swatch is a light background meant to carry the shared dark text
 * color at WCAG AA contrast or better. */

export interface Palette {
  id: string;
  label: string;
  family: "colorful" | "gradient" | "grayscale";
  /** Highlight background swatches, cycled per overlap group. */
  colors: string[];
  /** Text color used on top of every swatch. */
  text: string;
}

export const PALETTES: Palette[] = [
  {
    id: "colorful",
    label: "Colorful",
    family: "colorful",
    colors: ["#ffd6a5", "#caffbf", "#9bf6ff", "#ffc6ff", "#fdffb6", "#a0c4ff"],
    text: "#1b1b1b",
  },
  {
    id: "gradient",
    label: "Soft gradient",
    family: "gradient",
    colors: ["#eef5fc", "#d8e9f7", "#c2dcf2", "#adcfee", "#97c3e9", "#81b6e4"],
    text: "#1b1b1b",
  },
  {
    id: "grayscale",
    label: "Grayscale",
    family: "grayscale",
    colors: ["#f5f5f5", "#e3e3e3", "#d1d1d1", "#bfbfbf", "#adadad", "#9b9b9b"],
    text: "#1b1b1b",
  },
];

export function paletteById(id: string): Palette {
  const found = PALETTES.find((p) => p.id === id);
  if (!found) throw new Error(`unknown palette: ${id}`);
  return found;
}

/** Stable group-to-color assignment; the same group always maps to the
 * same swatch within a palette. */
export function colorForGroup(palette: Palette, group: number): string {
  return palette.colors[group % palette.colors.length];
}

export function hexToRgb(hex: string): [number, number, number] {
  const m = /^#([0-9a-f]{6})$/i.exec(hex.trim());
  if (!m) throw new Error(`not a 6-digit hex color: ${hex}`);
  const n = parseInt(m[1], 16);
  return [(n >> 16) & 0xff, (n >> 8) & 0xff, n & 0xff];
}

/** WCAG relative luminance. */
export function relativeLuminance(hex: string): number {
  const [r, g, b] = hexToRgb(hex).map((c) => {
    const s = c / 255;
    return s <= 0.03928 ? s / 12.92 : Math.pow((s + 0.055) / 1.055, 2.4);
  });
  return 0.2126 * r + 0.7152 * g + 0.0722 * b;
}

/** WCAG contrast ratio between two colors, in [1, 21]. */
export function contrastRatio(a: string, b: string): number {
  const la = relativeLuminance(a);
  const lb = relativeLuminance(b);
  const [hi, lo] = la >= lb ? [la, lb] : [lb, la];
  return (hi + 0.05) / (lo + 0.05);
}

export const WCAG_AA_NORMAL_TEXT = 4.5;

export function meetsWcagAA(foreground: string, background: string): boolean {
  return contrastRatio(foreground, background) >= WCAG_AA_NORMAL_TEXT;
}

/** True when a color carries no hue at all (r == g == b). */
export function isAchromatic(hex: string): boolean {
  const [r, g, b] = hexToRgb(hex);
  return r === g && g === b;
}
