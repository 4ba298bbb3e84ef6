import * as fs from "fs";
import * as os from "os";
import * as path from "path";
import { describe, expect, it } from "vitest";
import { renderHeatmap } from "../src/charts";
import { LABEL_FILL } from "../src/colors";
import { parseCsv } from "../src/csv";
import { loadSiblingCases, rasterize, renderFile } from "../src/render";
import { main } from "../src/cli";

const FIXTURES = path.join(__dirname, "..", "fixtures");

const SCENARIO_KINDS: Record<string, "lines" | "heatmap" | "cases"> = {
  fig1: "lines",
  fig2: "lines",
  fig3: "heatmap",
  fig4: "cases",
  A1: "heatmap",
  A2: "heatmap",
  A3: "heatmap",
  A4: "heatmap",
  A5: "heatmap",
  B1: "heatmap",
  B2: "heatmap",
};

function fixture(name: string): string {
  return fs.readFileSync(path.join(FIXTURES, name), "utf-8");
}

function tmpFile(name: string): string {
  const dir = fs.mkdtempSync(path.join(os.tmpdir(), "figs-"));
  return path.join(dir, name);
}

describe("fig3 heatmap", () => {
  const table = parseCsv(fixture("fig3.csv"));

  it("re-renders pixel-identically from identical CSV", () => {
    const out1 = tmpFile("a.png");
    const out2 = tmpFile("b.png");
    renderFile(path.join(FIXTURES, "fig3.csv"), "heatmap", out1);
    renderFile(path.join(FIXTURES, "fig3.csv"), "heatmap", out2);
    expect(fs.readFileSync(out1).equals(fs.readFileSync(out2))).toBe(true);
  });

  it("maps labels to the declared colors", () => {
    const image = renderHeatmap(table);
    const sample = (b: number, hc: number) => {
      const rect = image.cellRect(b, hc)!;
      return image.raster.get(rect.x + Math.floor(rect.w / 2), rect.y + Math.floor(rect.h / 2) + 1);
    };
    expect(sample(100, 6)).toEqual(LABEL_FILL.Grow); // poor diversifiers
    expect(sample(200, 12)).toEqual(LABEL_FILL.Stop); // trapped elite
    // conditional cell: hatched amber, so both colors appear inside the rect
    const rect = image.cellRect(350, 10)!;
    const seen = new Set<string>();
    for (let y = rect.y + 1; y < rect.y + rect.h - 1; y++) {
      for (let x = rect.x + 1; x < rect.x + rect.w - 1; x++) {
        seen.add(image.raster.get(x, y).join(","));
      }
    }
    expect(seen.has(LABEL_FILL.Conditional.join(","))).toBe(true);
    expect(seen.size).toBeGreaterThan(1); // stripes present
  });

  it("renders empty or unknown labels gray without crashing", () => {
    const rowsHeader = "scenario,b,hc,label,action_son_first,action_dtr_first,n_star_static,value_root";
    const table = parseCsv(`${rowsHeader}\nx,50,1,,,,,\nx,50,2,Mystery,,,,\nx,75,1,Grow,,,2,1\nx,75,2,Stop,,,1,1\n`);
    const image = renderHeatmap(table);
    const rect = image.cellRect(50, 1)!;
    expect(image.raster.get(rect.x + 5, rect.y + 5)).toEqual(LABEL_FILL.Infeasible);
  });
});

describe("whole registry", () => {
  it("renders all eleven scenarios without error", () => {
    for (const [scenario, kind] of Object.entries(SCENARIO_KINDS)) {
      const out = tmpFile(`${scenario}.png`);
      renderFile(path.join(FIXTURES, `${scenario}.csv`), kind, out);
      const bytes = fs.readFileSync(out);
      expect(bytes.length).toBeGreaterThan(800);
      expect(bytes.readUInt32BE(16)).toBeGreaterThan(100); // sane width
    }
  });

  it("case tree picks up the sibling policy dump", () => {
    const cases = loadSiblingCases(path.join(FIXTURES, "fig4.csv"));
    expect(cases).not.toBeNull();
    expect(cases!.map((c) => c.label)).toEqual(["Grow", "Stop", "Conditional"]);
    const raster = rasterize(parseCsv(fixture("fig4.csv")), "cases", cases);
    expect(raster.height).toBeGreaterThan(500);
  });
});

describe("schema validation", () => {
  it("rejects a heatmap CSV missing a column, naming it", () => {
    expect(() => rasterize(parseCsv("scenario,b,hc\nfig3,50,1\n"), "heatmap")).toThrow(
      /missing column: label/,
    );
  });

  it("rejects unknown lines schema naming candidates", () => {
    expect(() => rasterize(parseCsv("a,b\n1,2\n"), "lines")).toThrow(/missing column/);
  });
});

describe("cli", () => {
  it("renders via argv and exits 0", () => {
    const out = tmpFile("cli.png");
    const code = main(["render", "--in", path.join(FIXTURES, "fig1.csv"), "--kind", "lines", "--out", out]);
    expect(code).toBe(0);
    expect(fs.existsSync(out)).toBe(true);
  });

  it("exits 2 on schema mismatch", () => {
    const bad = tmpFile("bad.csv");
    fs.writeFileSync(bad, "scenario,b\nfig3,50\n");
    const code = main(["--in", bad, "--kind", "heatmap", "--out", tmpFile("x.png")]);
    expect(code).toBe(2);
  });

  it("exits 2 on bad usage", () => {
    expect(main(["--in", "only"])).toBe(2);
  });
});
