import * as fs from "fs";
import * as path from "path";
import {
  CaseDoc,
  renderCases,
  renderHeatmap,
  renderStaticSweepLines,
  renderThresholdLine,
} from "./charts";
import { CELL_COLUMNS, parseCsv, requireColumns, SchemaError, STATIC_COLUMNS, Table, THRESHOLD_COLUMNS } from "./csv";
import { encodePng } from "./png";
import { Raster } from "./raster";

export type FigureKind = "lines" | "heatmap" | "cases";

export function rasterize(table: Table, kind: FigureKind, casesDoc: CaseDoc[] | null = null): Raster {
  switch (kind) {
    case "heatmap":
      requireColumns(table, CELL_COLUMNS);
      return renderHeatmap(table).raster;
    case "lines":
      if (table.columns.includes("model")) {
        requireColumns(table, STATIC_COLUMNS);
        return renderStaticSweepLines(table);
      }
      if (table.columns.includes("sigma_star")) {
        requireColumns(table, THRESHOLD_COLUMNS);
        return renderThresholdLine(table);
      }
      throw new SchemaError("missing column: model (sweep lines) or sigma_star (threshold line)");
    case "cases":
      requireColumns(table, CELL_COLUMNS);
      return renderCases(table, casesDoc);
    default:
      throw new SchemaError(`unknown figure kind: ${kind}`);
  }
}

/** Looks for "<stem>.cases.json" next to the CSV (written by the engine). */
export function loadSiblingCases(csvPath: string): CaseDoc[] | null {
  const stem = csvPath.replace(/\.csv$/i, "");
  const candidate = `${stem}.cases.json`;
  if (!fs.existsSync(candidate)) return null;
  const doc = JSON.parse(fs.readFileSync(candidate, "utf-8"));
  return doc.cases as CaseDoc[];
}

export function renderFile(inPath: string, kind: FigureKind, outPath: string): void {
  const table = parseCsv(fs.readFileSync(inPath, "utf-8"));
  const casesDoc = kind === "cases" ? loadSiblingCases(inPath) : null;
  const raster = rasterize(table, kind, casesDoc);
  fs.mkdirSync(path.dirname(path.resolve(outPath)), { recursive: true });
  fs.writeFileSync(outPath, encodePng(raster));
}
