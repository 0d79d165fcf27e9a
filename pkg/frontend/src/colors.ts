/**
 * Color mapping: every layer owns a hue; brightness in [0, 1] drives the
 * cell's intensity on that hue (1.0 = full-strength color).
 */

export function clamp01(value: number): number {
  return Math.max(0, Math.min(1, value));
}

export function cellColor(hue: number, brightness: number): string {
  const lightness = 92 - 42 * clamp01(brightness);
  return `hsl(${hue}, 85%, ${lightness}%)`;
}

export const EMPTY_CELL_COLOR = "hsl(0, 0%, 96%)";

/** Gradient stops for the color bar, dim to full. */
export function colorBarStops(hue: number, steps = 8): string[] {
  const stops: string[] = [];
  for (let index = 0; index < steps; index += 1) {
    stops.push(cellColor(hue, index / (steps - 1)));
  }
  return stops;
}
