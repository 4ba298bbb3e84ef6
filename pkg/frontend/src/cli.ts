#!/usr/bin/env node
import { SchemaError } from "./csv";
import { FigureKind, renderFile } from "./render";

const KINDS: FigureKind[] = ["lines", "heatmap", "cases"];

function usage(): string {
  return "usage: render --in <csv> --kind <lines|heatmap|cases> --out <png>";
}

export function main(argv: string[]): number {
  const args = argv[0] === "render" ? argv.slice(1) : argv;
  const opts = new Map<string, string>();
  for (let i = 0; i < args.length; i += 2) {
    const key = args[i];
    const value = args[i + 1];
    if (!key?.startsWith("--") || value === undefined) {
      console.error(usage());
      return 2;
    }
    opts.set(key.slice(2), value);
  }
  const input = opts.get("in");
  const kind = opts.get("kind") as FigureKind | undefined;
  const output = opts.get("out");
  if (!input || !kind || !output || !KINDS.includes(kind)) {
    console.error(usage());
    return 2;
  }
  try {
    renderFile(input, kind, output);
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 2;
    }
    console.error(String(err));
    return 1;
  }
  console.log(`wrote ${output}`);
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
