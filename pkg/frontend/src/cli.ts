#!/usr/bin/env node
/**
 * mapf-plots --kind <timestep-fvalues|improvement-histogram|cost-success-bars>
 *            --in <file[,file...] or directory> --out <figure.svg>
 *
 * Exit codes: 0 ok, 1 usage error, 2 schema/validation error.
 */

import { readFileSync, readdirSync, statSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { renderCostSuccessBars, renderImprovementHistogram, renderTimestepFvalues } from "./plots.js";
import { SchemaError, UsageError } from "./schema.js";

const KINDS = ["timestep-fvalues", "improvement-histogram", "cost-success-bars"] as const;

function collectInputs(spec: string): string[] {
  const paths = spec.includes(",")
    ? spec.split(",").filter((p) => p !== "")
    : [spec];
  const files: string[] = [];
  for (const p of paths) {
    if (statSync(p).isDirectory()) {
      for (const name of readdirSync(p).sort()) {
        if (name.endsWith(".json")) {
          files.push(join(p, name));
        }
      }
    } else {
      files.push(p);
    }
  }
  return files;
}

export function run(argv: string[]): number {
  let kind: string | undefined;
  let input: string | undefined;
  let output: string | undefined;
  try {
    const { values } = parseArgs({
      args: argv,
      options: {
        kind: { type: "string" },
        in: { type: "string" },
        out: { type: "string" },
      },
    });
    kind = values.kind;
    input = values.in;
    output = values.out;
  } catch (e) {
    console.error(`error: ${(e as Error).message}`);
    return 1;
  }
  try {
    if (!kind || !(KINDS as readonly string[]).includes(kind)) {
      throw new UsageError(`--kind must be one of: ${KINDS.join(", ")}`);
    }
    if (!input || !output) {
      throw new UsageError("--in and --out are required");
    }
    let svg: string;
    if (kind === "timestep-fvalues") {
      svg = renderTimestepFvalues(readFileSync(input, "utf8"));
    } else if (kind === "improvement-histogram") {
      svg = renderImprovementHistogram(readFileSync(input, "utf8"));
    } else {
      const files = collectInputs(input);
      svg = renderCostSuccessBars(files.map((f) => readFileSync(f, "utf8")));
    }
    writeFileSync(output, svg);
    console.log(`wrote ${kind} figure to ${output}`);
    return 0;
  } catch (e) {
    if (e instanceof UsageError) {
      console.error(`usage error: ${e.message}`);
      return 1;
    }
    if (e instanceof SchemaError) {
      console.error(`schema error: ${e.message}`);
      return 2;
    }
    console.error(`error: ${(e as Error).message}`);
    return 2;
  }
}

const isMain =
  process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href;
if (isMain) {
  process.exit(run(process.argv.slice(2)));
}
