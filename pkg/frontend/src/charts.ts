import { AXIS, BLACK, fillFor, GRID_LINE, HATCH, LABEL_FILL, RGB, SERIES, WHITE } from "./colors";
import { Table } from "./csv";
import { textWidth } from "./font";
import { Raster } from "./raster";

export function fmt(x: number): string {
  if (Number.isInteger(x)) return String(x);
  return String(parseFloat(x.toPrecision(3)));
}

function uniqueSorted(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}

// ---------------------------------------------------------------------------
// categorical heatmap

export interface HeatmapImage {
  raster: Raster;
  /** pixel rectangle of a cell, for tests and tooltips */
  cellRect(b: number, hc: number): { x: number; y: number; w: number; h: number } | null;
}

const CELL_W = 34;
const CELL_H = 24;
const MARGIN = { left: 84, right: 170, top: 40, bottom: 62 };

export function renderHeatmap(table: Table): HeatmapImage {
  const bs = uniqueSorted(table.rows.map((r) => Number(r.b)));
  const hcs = uniqueSorted(table.rows.map((r) => Number(r.hc)));
  const plotW = bs.length * CELL_W;
  const plotH = hcs.length * CELL_H;
  const raster = new Raster(MARGIN.left + plotW + MARGIN.right, MARGIN.top + plotH + MARGIN.bottom);

  const xOf = new Map(bs.map((b, i) => [b, MARGIN.left + i * CELL_W]));
  const yOf = new Map(hcs.map((hc, i) => [hc, MARGIN.top + (hcs.length - 1 - i) * CELL_H]));

  for (const row of table.rows) {
    const x = xOf.get(Number(row.b))!;
    const y = yOf.get(Number(row.hc))!;
    const label = row.label;
    raster.fillRect(x, y, CELL_W, CELL_H, fillFor(label));
    if (label === "Conditional") {
      raster.hatchRect(x, y, CELL_W, CELL_H, HATCH);
    }
    raster.strokeRect(x, y, CELL_W, CELL_H, GRID_LINE);
  }

  // frame and axes
  raster.strokeRect(MARGIN.left, MARGIN.top, plotW, plotH, AXIS);
  const xStep = Math.max(1, Math.ceil((textWidth("00000") + 8) / CELL_W));
  bs.forEach((b, i) => {
    if (i % xStep !== 0 && i !== bs.length - 1) return;
    const cx = MARGIN.left + i * CELL_W + Math.floor(CELL_W / 2);
    raster.drawLine(cx, MARGIN.top + plotH, cx, MARGIN.top + plotH + 3, AXIS);
    raster.drawTextCentered(cx, MARGIN.top + plotH + 7, fmt(b), AXIS);
  });
  hcs.forEach((hc, i) => {
    const cy = MARGIN.top + (hcs.length - 1 - i) * CELL_H + Math.floor(CELL_H / 2);
    raster.drawLine(MARGIN.left - 3, cy, MARGIN.left, cy, AXIS);
    const label = fmt(hc);
    raster.drawText(MARGIN.left - 8 - textWidth(label), cy - 3, label, AXIS);
  });

  const scenario = table.rows[0]?.scenario ?? "";
  raster.drawTextCentered(MARGIN.left + Math.floor(plotW / 2), 14, scenario, BLACK, 2);
  raster.drawTextCentered(
    MARGIN.left + Math.floor(plotW / 2),
    MARGIN.top + plotH + 34,
    "BUDGET B",
    AXIS,
  );
  raster.drawText(10, MARGIN.top - 14, "PARENT HC", AXIS);

  // legend
  const lx = MARGIN.left + plotW + 22;
  let ly = MARGIN.top + 4;
  for (const name of Object.keys(LABEL_FILL)) {
    raster.fillRect(lx, ly, 22, 14, LABEL_FILL[name]);
    if (name === "Conditional") raster.hatchRect(lx, ly, 22, 14, HATCH);
    raster.strokeRect(lx, ly, 22, 14, AXIS);
    raster.drawText(lx + 28, ly + 4, name.toUpperCase(), BLACK);
    ly += 24;
  }

  return {
    raster,
    cellRect(b: number, hc: number) {
      const x = xOf.get(b);
      const y = yOf.get(hc);
      if (x === undefined || y === undefined) return null;
      return { x, y, w: CELL_W, h: CELL_H };
    },
  };
}

// ---------------------------------------------------------------------------
// line charts

interface Series {
  name: string;
  points: [number, number][];
  color: RGB;
}

function renderLineChart(
  seriesList: Series[],
  title: string,
  xLabel: string,
  yLabel: string,
  markers: boolean,
): Raster {
  const W = 900;
  const H = 440;
  const margin = { left: 70, right: 150, top: 40, bottom: 56 };
  const plotW = W - margin.left - margin.right;
  const plotH = H - margin.top - margin.bottom;
  const raster = new Raster(W, H);

  const xs = seriesList.flatMap((s) => s.points.map((p) => p[0]));
  const ys = seriesList.flatMap((s) => s.points.map((p) => p[1]));
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const yMin = Math.min(0, Math.min(...ys));
  const yMax = Math.max(...ys) * 1.08 + 1e-9;

  const px = (x: number) => margin.left + Math.round(((x - xMin) / (xMax - xMin || 1)) * plotW);
  const py = (y: number) => margin.top + plotH - Math.round(((y - yMin) / (yMax - yMin || 1)) * plotH);

  // gridlines and ticks: five divisions each way
  for (let i = 0; i <= 5; i++) {
    const gx = margin.left + Math.round((plotW * i) / 5);
    const gy = margin.top + Math.round((plotH * i) / 5);
    raster.drawLine(gx, margin.top, gx, margin.top + plotH, GRID_LINE);
    raster.drawLine(margin.left, gy, margin.left + plotW, gy, GRID_LINE);
    const xv = xMin + ((xMax - xMin) * i) / 5;
    const yv = yMax - ((yMax - yMin) * i) / 5;
    raster.drawTextCentered(gx, margin.top + plotH + 7, fmt(Math.round(xv * 100) / 100), AXIS);
    const ylab = fmt(Math.round(yv * 100) / 100);
    raster.drawText(margin.left - 8 - textWidth(ylab), gy - 3, ylab, AXIS);
  }
  raster.strokeRect(margin.left, margin.top, plotW, plotH, AXIS);

  for (const s of seriesList) {
    for (let i = 1; i < s.points.length; i++) {
      const [x0, y0] = s.points[i - 1];
      const [x1, y1] = s.points[i];
      raster.drawLineThick(px(x0), py(y0), px(x1), py(y1), s.color);
    }
    if (markers) {
      for (const [x, y] of s.points) raster.drawMarker(px(x), py(y), s.color);
    }
  }

  raster.drawTextCentered(margin.left + Math.floor(plotW / 2), 14, title, BLACK, 2);
  raster.drawTextCentered(margin.left + Math.floor(plotW / 2), H - 16, xLabel, AXIS);
  raster.drawText(8, margin.top - 14, yLabel, AXIS);

  let ly = margin.top + 4;
  for (const s of seriesList) {
    raster.fillRect(margin.left + plotW + 20, ly + 2, 18, 4, s.color);
    raster.drawText(margin.left + plotW + 44, ly, s.name.toUpperCase(), BLACK);
    ly += 18;
  }
  return raster;
}

/** Optimal family size against uncertainty, one line per strategy. */
export function renderStaticSweepLines(table: Table): Raster {
  const byModel = new Map<string, [number, number][]>();
  for (const row of table.rows) {
    const pts = byModel.get(row.model) ?? [];
    pts.push([Number(row.sigma), Number(row.n_star)]);
    byModel.set(row.model, pts);
  }
  const seriesList: Series[] = [...byModel.entries()].map(([name, points], i) => ({
    name,
    points: points.sort((a, b) => a[0] - b[0]),
    color: SERIES[i % SERIES.length],
  }));
  return renderLineChart(seriesList, "OPTIMAL FAMILY SIZE VS RISK", "SIGMA", "N*", false);
}

/** Switching threshold against parental status. */
export function renderThresholdLine(table: Table): Raster {
  const points: [number, number][] = table.rows
    .filter((r) => r.status === "ok")
    .map((r) => [Number(r.hc), Number(r.sigma_star)]);
  const seriesList: Series[] = [
    { name: "sigma*", points: points.sort((a, b) => a[0] - b[0]), color: SERIES[0] },
  ];
  return renderLineChart(seriesList, "RISK THRESHOLD BY PARENT HC", "PARENT HC", "SIGMA*", true);
}

// ---------------------------------------------------------------------------
// decision-case trees

interface CaseState {
  value: number;
  action: string;
  invest_son: number;
  invest_dtr: number;
}

export interface CaseDoc {
  b: number;
  hc: number;
  label: string;
  policy: { states: Record<string, CaseState> };
}

const PANEL_H = 190;
const CASE_W = 860;

function actionColor(action: string): RGB {
  return LABEL_FILL[action === "Grow" ? "Grow" : "Stop"];
}

function drawStateBox(
  raster: Raster,
  x: number,
  y: number,
  title: string,
  state: CaseState | undefined,
): void {
  const w = 180;
  const h = 52;
  const color = state ? actionColor(state.action) : AXIS;
  raster.fillRect(x, y, w, h, WHITE);
  raster.strokeRect(x, y, w, h, color);
  raster.strokeRect(x + 1, y + 1, w - 2, h - 2, color);
  raster.drawText(x + 6, y + 6, title, BLACK);
  if (state) {
    raster.drawText(x + 6, y + 18, `${state.action.toUpperCase()} V=${fmt(state.value)}`, color);
    const spend = `IM=${fmt(state.invest_son)} IF=${fmt(state.invest_dtr)}`;
    raster.drawText(x + 6, y + 30, spend, AXIS);
  }
}

export function renderCases(table: Table, cases: CaseDoc[] | null): Raster {
  const rows = table.rows;
  const raster = new Raster(CASE_W, 36 + PANEL_H * rows.length);
  raster.drawTextCentered(Math.floor(CASE_W / 2), 10, "SEQUENTIAL DECISIONS BY FIRST GENDER", BLACK, 2);

  rows.forEach((row, idx) => {
    const top = 36 + idx * PANEL_H;
    const doc = cases?.find((c) => c.b === Number(row.b) && c.hc === Number(row.hc));
    const states = doc?.policy.states ?? {};

    raster.strokeRect(10, top, CASE_W - 20, PANEL_H - 12, GRID_LINE);
    const header = `HC=${row.hc} B=${row.b}: ${row.label.toUpperCase()}`;
    raster.drawText(22, top + 8, header, BLACK);

    const rootX = 30;
    const rootY = top + Math.floor(PANEL_H / 2) - 20;
    raster.strokeRect(rootX, rootY, 120, 36, AXIS);
    raster.drawText(rootX + 8, rootY + 8, "FIRST CHILD", BLACK);
    raster.drawText(rootX + 8, rootY + 20, "SON/DTR 50:50", AXIS);

    const sonState = states["1,0"];
    const dtrState = states["0,1"];
    const branchX = 210;
    const sonY = top + 26;
    const dtrY = top + PANEL_H - 82;
    raster.drawLine(rootX + 120, rootY + 18, branchX, sonY + 26, AXIS);
    raster.drawLine(rootX + 120, rootY + 18, branchX, dtrY + 26, AXIS);
    drawStateBox(raster, branchX, sonY, "SON FIRST (1,0)", sonState);
    drawStateBox(raster, branchX, dtrY, "DTR FIRST (0,1)", dtrState);

    // one more generation where the branch grows
    const nextX = 470;
    const pairs: [CaseState | undefined, number, string, string][] = [
      [sonState, sonY, "2,0", "1,1"],
      [dtrState, dtrY, "1,1", "0,2"],
    ];
    for (const [state, y, upSon, upDtr] of pairs) {
      if (!state || state.action !== "Grow") continue;
      raster.drawLine(branchX + 180, y + 26, nextX, y + 13, AXIS);
      raster.drawLine(branchX + 180, y + 26, nextX, y + 39, AXIS);
      const a = states[upSon];
      const b = states[upDtr];
      if (a) raster.drawText(nextX + 6, y + 8, `(${upSon}) ${a.action.toUpperCase()} V=${fmt(a.value)}`, actionColor(a.action));
      if (b) raster.drawText(nextX + 6, y + 34, `(${upDtr}) ${b.action.toUpperCase()} V=${fmt(b.value)}`, actionColor(b.action));
    }
  });
  return raster;
}
