/** Minimal CSV reading for the engine's artifact schemas. */

export interface Table {
  columns: string[];
  rows: Record<string, string>[];
}

export class SchemaError extends Error {}

export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty CSV input");
  }
  const columns = lines[0].split(",");
  const rows = lines.slice(1).map((line, i) => {
    const parts = line.split(",");
    if (parts.length !== columns.length) {
      throw new SchemaError(`row ${i + 2} has ${parts.length} fields, expected ${columns.length}`);
    }
    const row: Record<string, string> = {};
    columns.forEach((name, j) => (row[name] = parts[j]));
    return row;
  });
  return { columns, rows };
}

/** Throws naming the first missing column. */
export function requireColumns(table: Table, needed: string[]): void {
  for (const name of needed) {
    if (!table.columns.includes(name)) {
      throw new SchemaError(`missing column: ${name}`);
    }
  }
}

export const CELL_COLUMNS = [
  "scenario",
  "b",
  "hc",
  "label",
  "action_son_first",
  "action_dtr_first",
  "n_star_static",
  "value_root",
];

export const STATIC_COLUMNS = ["model", "sigma", "hc", "budget", "n_star", "invest_star", "utility"];

export const THRESHOLD_COLUMNS = [
  "scenario",
  "hc",
  "budget",
  "sigma_star",
  "bracket_low",
  "bracket_high",
  "status",
];
