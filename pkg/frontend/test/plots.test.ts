import { mkdtempSync, readFileSync, readdirSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { run } from "../src/cli.js";
import {
  renderCostSuccessBars,
  renderImprovementHistogram,
  renderTimestepFvalues,
  summarizeCohorts,
} from "../src/plots.js";
import {
  SchemaError,
  UsageError,
  parseRunSummaries,
  parseStepRecords,
  parseStudyRecords,
} from "../src/schema.js";

const FIXTURES = join(__dirname, "fixtures");

const stepsCsv = readFileSync(join(FIXTURES, "steps.csv"), "utf8");
const studyCsv = readFileSync(join(FIXTURES, "study.csv"), "utf8");
const summaryDir = join(FIXTURES, "summaries");
const summaryTexts = readdirSync(summaryDir)
  .filter((f) => f.endsWith(".json"))
  .sort()
  .map((f) => readFileSync(join(summaryDir, f), "utf8"));

describe("timestep f-value figure", () => {
  it("renders the fixture without error", () => {
    const svg = renderTimestepFvalues(stepsCsv);
    expect(svg).toContain("<svg");
    expect(svg.match(/<polyline/g)).toHaveLength(2);
    expect(svg).toContain("initial (PIBT)");
  });

  it("is idempotent", () => {
    expect(renderTimestepFvalues(stepsCsv)).toEqual(renderTimestepFvalues(stepsCsv));
  });

  it("renders coincident series when nothing improves", () => {
    const header = "t,f_initial,f_final,f_lowerbound,groups,merges,plan_time_ms,finished_all_groups,schema_version";
    const csv = [header, "0,10,10,8,0,0,1.0,1,1", "1,9,9,9,0,0,1.0,1,1", "2,7,7,5,1,0,1.0,1,1"].join("\n");
    const records = parseStepRecords(csv);
    expect(records.map((r) => r.fInitial - r.fLowerbound)).toEqual([2, 0, 2]);
    expect(renderTimestepFvalues(csv)).toContain("<svg");
  });

  it("rejects missing columns", () => {
    expect(() => renderTimestepFvalues("t,f_initial\n0,5\n")).toThrow(SchemaError);
  });

  it("rejects an empty body", () => {
    const header = "t,f_initial,f_final,f_lowerbound,groups,merges,plan_time_ms,finished_all_groups,schema_version";
    expect(() => renderTimestepFvalues(header + "\n")).toThrow(/no data rows/);
  });

  it("rejects records violating the lower-bound ordering", () => {
    const header = "t,f_initial,f_final,f_lowerbound,groups,merges,plan_time_ms,finished_all_groups,schema_version";
    expect(() => renderTimestepFvalues(header + "\n0,5,4,6,0,0,1.0,1,1\n")).toThrow(SchemaError);
  });
});

describe("improvement histogram", () => {
  it("renders the fixture without error", () => {
    const svg = renderImprovementHistogram(studyCsv);
    expect(svg).toContain("<svg");
    expect(svg).toContain("budget 0 ms");
  });

  it("puts all mass at zero for a budget-0 study", () => {
    const rows = studyCsv
      .split("\n")
      .filter((l, i) => i === 0 || l.split(",")[1] === "0.0");
    const records = parseStudyRecords(rows.join("\n"));
    expect(records.every((r) => r.fInitial === r.fFinal)).toBe(true);
    expect(renderImprovementHistogram(rows.join("\n"))).toContain("<svg");
  });

  it("rejects negative improvements", () => {
    const bad = "t,budget,f_initial,f_final,f_lowerbound,schema_version\n0,4.0,10,12,8,1\n";
    expect(() => renderImprovementHistogram(bad)).toThrow(/f_final > f_initial/);
  });

  it("rejects unknown schema versions", () => {
    const bad = "t,budget,f_initial,f_final,f_lowerbound,schema_version\n0,4.0,10,9,8,99\n";
    expect(() => renderImprovementHistogram(bad)).toThrow(/schema_version/);
  });
});

describe("cost/success bars", () => {
  it("renders the fixture cohorts with masking", () => {
    const svg = renderCostSuccessBars(summaryTexts);
    expect(svg).toContain("<svg");
    expect(svg).toContain("masked (&lt;50%)"); // the failed apibt cohort
    expect(svg).toContain("100%");
  });

  it("groups and masks by the 50% rule", () => {
    const mk = (algorithm: string, success: boolean, cost: number) =>
      JSON.stringify({
        schema_version: 1, success, total_cost: cost, cost_lowerbound: 10,
        normalized_cost: cost / 10, makespan: 5, total_plan_time_ms: 1,
        algorithm, map: "m.map", scen: "s", agents: 4, seed: 0,
        step_budget_ms: 0, budget_mode: "wall", failure_reason: success ? null : "max-steps",
      });
    const cohorts = summarizeCohorts(
      parseRunSummaries([mk("a", true, 10), mk("a", false, 0), mk("a", false, 0), mk("a", false, 0), mk("b", true, 12)]),
    );
    const a = cohorts.find((c) => c.key.includes("| a |"))!;
    expect(a.successRate).toBeCloseTo(0.25);
    expect(a.meanNormalizedCost).toBeNull(); // masked below 50% success
    const b = cohorts.find((c) => c.key.includes("| b |"))!;
    expect(b.meanNormalizedCost).toBeCloseTo(1.2);
  });

  it("rejects an empty input list", () => {
    expect(() => renderCostSuccessBars([])).toThrow(UsageError);
  });

  it("rejects mixed schema versions", () => {
    const v1 = summaryTexts[0];
    const v2 = JSON.stringify({ ...JSON.parse(v1), schema_version: 2 });
    expect(() => renderCostSuccessBars([v1, v2])).toThrow(/mixed schema versions/);
  });

  it("rejects summaries with missing fields", () => {
    expect(() => parseRunSummaries(["{}"])).toThrow(SchemaError);
    expect(() => parseRunSummaries(["not json"])).toThrow(SchemaError);
  });
});

describe("cli", () => {
  it("writes figures for every kind", () => {
    const dir = mkdtempSync(join(tmpdir(), "mapf-plots-"));
    expect(run(["--kind", "timestep-fvalues", "--in", join(FIXTURES, "steps.csv"), "--out", join(dir, "a.svg")])).toBe(0);
    expect(run(["--kind", "improvement-histogram", "--in", join(FIXTURES, "study.csv"), "--out", join(dir, "b.svg")])).toBe(0);
    expect(run(["--kind", "cost-success-bars", "--in", summaryDir, "--out", join(dir, "c.svg")])).toBe(0);
    for (const f of ["a.svg", "b.svg", "c.svg"]) {
      expect(readFileSync(join(dir, f), "utf8")).toContain("</svg>");
    }
  });

  it("exits 1 on usage errors", () => {
    expect(run(["--kind", "pie-chart", "--in", "x", "--out", "y"])).toBe(1);
    expect(run(["--kind", "timestep-fvalues"])).toBe(1);
  });

  it("exits 2 on schema errors", () => {
    const dir = mkdtempSync(join(tmpdir(), "mapf-plots-"));
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "t,f_initial\n0,5\n");
    expect(run(["--kind", "timestep-fvalues", "--in", bad, "--out", join(dir, "out.svg")])).toBe(2);
  });
});
