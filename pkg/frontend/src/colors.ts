export type RGB = readonly [number, number, number];

export const WHITE: RGB = [255, 255, 255];
export const BLACK: RGB = [20, 20, 20];
export const GRID_LINE: RGB = [205, 205, 205];
export const AXIS: RGB = [60, 60, 60];

/** Decision labels: grow green, stop red, conditional hatched amber, infeasible gray. */
export const LABEL_FILL: Record<string, RGB> = {
  Grow: [46, 150, 70],
  Stop: [200, 54, 44],
  Conditional: [232, 176, 56],
  Infeasible: [150, 150, 150],
};

/** Stripe color drawn over the conditional fill. */
export const HATCH: RGB = [140, 100, 16];

/** Unknown or empty labels render gray rather than failing. */
export const FALLBACK_FILL: RGB = LABEL_FILL.Infeasible;

export const SERIES: RGB[] = [
  [33, 102, 172], // blue
  [214, 96, 77], // red
  [77, 172, 38], // green
  [152, 78, 163], // purple
];

export function fillFor(label: string): RGB {
  return LABEL_FILL[label] ?? FALLBACK_FILL;
}
