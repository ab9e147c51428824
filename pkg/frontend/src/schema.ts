/**
 * Parsing and validation of the runner's output schemas.
 *
 * Step records CSV:  t,f_initial,f_final,f_lowerbound,groups,merges,
 *                    plan_time_ms,finished_all_groups,schema_version
 * Study CSV:         t,budget,f_initial,f_final,f_lowerbound,schema_version
 * Run summary JSON:  one object per run with a schema_version field.
 */

export const SCHEMA_VERSION = 1;

export class SchemaError extends Error {}
export class UsageError extends Error {}

export interface StepRecord {
  t: number;
  fInitial: number;
  fFinal: number;
  fLowerbound: number;
  groups: number;
  merges: number;
  planTimeMs: number;
  finishedAllGroups: boolean;
}

export interface StudyRecord {
  t: number;
  budget: number;
  fInitial: number;
  fFinal: number;
  fLowerbound: number;
}

export interface RunSummary {
  success: boolean;
  totalCost: number;
  costLowerbound: number;
  normalizedCost: number;
  makespan: number;
  algorithm: string;
  map: string;
  scen: string;
  agents: number;
  seed: number;
}

interface Csv {
  header: string[];
  rows: string[][];
}

function parseCsv(text: string, what: string): Csv {
  const lines = text.split(/\r?\n/).filter((l) => l.trim() !== "");
  if (lines.length === 0) {
    throw new SchemaError(`${what}: file is empty`);
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const rows = lines.slice(1).map((l) => l.split(",").map((c) => c.trim()));
  return { header, rows };
}

function columnIndex(csv: Csv, required: string[], what: string): Map<string, number> {
  const index = new Map<string, number>();
  for (const name of required) {
    const i = csv.header.indexOf(name);
    if (i < 0) {
      throw new SchemaError(`${what}: missing column '${name}' (header: ${csv.header.join(",")})`);
    }
    index.set(name, i);
  }
  return index;
}

function num(row: string[], idx: number, what: string, line: number): number {
  const v = Number(row[idx]);
  if (row[idx] === undefined || row[idx] === "" || Number.isNaN(v)) {
    throw new SchemaError(`${what}: non-numeric value '${row[idx]}' on data row ${line}`);
  }
  return v;
}

function checkVersion(version: number, what: string) {
  if (version !== SCHEMA_VERSION) {
    throw new SchemaError(`${what}: unrecognized schema_version ${version}`);
  }
}

const STEP_COLUMNS = [
  "t", "f_initial", "f_final", "f_lowerbound", "groups", "merges",
  "plan_time_ms", "finished_all_groups", "schema_version",
];

export function parseStepRecords(text: string): StepRecord[] {
  const csv = parseCsv(text, "step records");
  const col = columnIndex(csv, STEP_COLUMNS, "step records");
  if (csv.rows.length === 0) {
    throw new SchemaError("step records: no data rows to plot");
  }
  return csv.rows.map((row, i) => {
    const what = "step records";
    checkVersion(num(row, col.get("schema_version")!, what, i + 1), what);
    const rec: StepRecord = {
      t: num(row, col.get("t")!, what, i + 1),
      fInitial: num(row, col.get("f_initial")!, what, i + 1),
      fFinal: num(row, col.get("f_final")!, what, i + 1),
      fLowerbound: num(row, col.get("f_lowerbound")!, what, i + 1),
      groups: num(row, col.get("groups")!, what, i + 1),
      merges: num(row, col.get("merges")!, what, i + 1),
      planTimeMs: num(row, col.get("plan_time_ms")!, what, i + 1),
      finishedAllGroups: row[col.get("finished_all_groups")!] !== "0",
    };
    if (!(rec.fLowerbound <= rec.fFinal && rec.fFinal <= rec.fInitial)) {
      throw new SchemaError(
        `step records: row ${i + 1} violates f_lowerbound <= f_final <= f_initial`,
      );
    }
    return rec;
  });
}

const STUDY_COLUMNS = ["t", "budget", "f_initial", "f_final", "f_lowerbound", "schema_version"];

export function parseStudyRecords(text: string): StudyRecord[] {
  const csv = parseCsv(text, "study records");
  const col = columnIndex(csv, STUDY_COLUMNS, "study records");
  if (csv.rows.length === 0) {
    throw new SchemaError("study records: no data rows to plot");
  }
  return csv.rows.map((row, i) => {
    const what = "study records";
    checkVersion(num(row, col.get("schema_version")!, what, i + 1), what);
    const rec: StudyRecord = {
      t: num(row, col.get("t")!, what, i + 1),
      budget: num(row, col.get("budget")!, what, i + 1),
      fInitial: num(row, col.get("f_initial")!, what, i + 1),
      fFinal: num(row, col.get("f_final")!, what, i + 1),
      fLowerbound: num(row, col.get("f_lowerbound")!, what, i + 1),
    };
    if (rec.fFinal > rec.fInitial) {
      throw new SchemaError(
        `study records: row ${i + 1} has f_final > f_initial (negative improvement)`,
      );
    }
    return rec;
  });
}

export function parseRunSummaries(texts: string[]): RunSummary[] {
  if (texts.length === 0) {
    throw new UsageError("no run summaries given");
  }
  const summaries: RunSummary[] = [];
  const versions = new Set<number>();
  texts.forEach((text, i) => {
    let raw: Record<string, unknown>;
    try {
      raw = JSON.parse(text);
    } catch (e) {
      throw new SchemaError(`run summary ${i + 1}: invalid JSON (${(e as Error).message})`);
    }
    const need = [
      "schema_version", "success", "total_cost", "cost_lowerbound", "normalized_cost",
      "makespan", "algorithm", "map", "scen", "agents", "seed",
    ];
    for (const key of need) {
      if (!(key in raw)) {
        throw new SchemaError(`run summary ${i + 1}: missing field '${key}'`);
      }
    }
    versions.add(raw.schema_version as number);
    summaries.push({
      success: raw.success as boolean,
      totalCost: raw.total_cost as number,
      costLowerbound: raw.cost_lowerbound as number,
      normalizedCost: raw.normalized_cost as number,
      makespan: raw.makespan as number,
      algorithm: raw.algorithm as string,
      map: raw.map as string,
      scen: raw.scen as string,
      agents: raw.agents as number,
      seed: raw.seed as number,
    });
  });
  if (versions.size > 1) {
    throw new SchemaError(`mixed schema versions: ${[...versions].join(", ")}`);
  }
  checkVersion([...versions][0], "run summaries");
  return summaries;
}
