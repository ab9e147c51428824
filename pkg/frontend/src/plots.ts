/** The three figure kinds rendered from runner outputs. */

import {
  RunSummary,
  StepRecord,
  StudyRecord,
  UsageError,
  parseRunSummaries,
  parseStepRecords,
  parseStudyRecords,
} from "./schema.js";
import { PALETTE, SvgBuilder, linearScale } from "./svg.js";

const W = 760;
const H = 420;
const BOX = { left: 56, right: W - 16, top: 24, bottom: H - 44 };

/** Per-timestep normalized f-values: initial (PIBT) vs final (anytime). */
export function renderTimestepFvalues(stepsCsv: string): string {
  const records: StepRecord[] = parseStepRecords(stepsCsv);
  const tMax = Math.max(...records.map((r) => r.t));
  const yMax = Math.max(1, ...records.map((r) => r.fInitial - r.fLowerbound));
  const xs = linearScale([0, tMax || 1], [BOX.left, BOX.right]);
  const ys = linearScale([0, yMax], [BOX.bottom, BOX.top]);
  const svg = new SvgBuilder(W, H);
  svg.axes(xs, ys, BOX, "timestep", "f-value minus lower bound");
  svg.polyline(records.map((r) => [xs(r.t), ys(r.fInitial - r.fLowerbound)]), PALETTE[0]);
  svg.polyline(records.map((r) => [xs(r.t), ys(r.fFinal - r.fLowerbound)]), PALETTE[1]);
  svg.legend(BOX.left + 10, BOX.top + 12, [
    ["initial (PIBT)", PALETTE[0]],
    ["final (anytime)", PALETTE[1]],
  ]);
  return svg.toString();
}

/** Overlaid histograms of per-step improvement, one per budget. */
export function renderImprovementHistogram(studyCsv: string): string {
  const records: StudyRecord[] = parseStudyRecords(studyCsv);
  const budgets = [...new Set(records.map((r) => r.budget))].sort((a, b) => a - b);
  const improvements = records.map((r) => r.fInitial - r.fFinal);
  const maxImp = Math.max(...improvements);
  const bins = maxImp + 1; // integer-valued improvements
  const counts = new Map<number, number[]>();
  for (const b of budgets) {
    counts.set(b, new Array(bins).fill(0));
  }
  for (const r of records) {
    counts.get(r.budget)![r.fInitial - r.fFinal] += 1;
  }
  const yMax = Math.max(1, ...[...counts.values()].flat());
  const xs = linearScale([-0.5, bins - 0.5], [BOX.left, BOX.right]);
  const ys = linearScale([0, yMax], [BOX.bottom, BOX.top]);
  const svg = new SvgBuilder(W, H);
  svg.axes(xs, ys, BOX, "f-value improvement over PIBT", "timesteps");
  const slot = (xs(0.5) - xs(-0.5)) * 0.9;
  const barW = slot / budgets.length;
  budgets.forEach((b, bi) => {
    const color = PALETTE[bi % PALETTE.length];
    counts.get(b)!.forEach((count, imp) => {
      if (count === 0) return;
      const x = xs(imp - 0.45) + bi * barW;
      svg.rect(x, ys(count), barW, BOX.bottom - ys(count), color, 0.8);
    });
  });
  svg.legend(BOX.right - 150, BOX.top + 12, budgets.map(
    (b, bi) => [`budget ${b} ms`, PALETTE[bi % PALETTE.length]] as [string, string],
  ));
  return svg.toString();
}

interface Cohort {
  key: string;
  successRate: number;
  meanNormalizedCost: number | null; // null when below the 50% success mask
  runs: number;
}

/** Group summaries by (map, algorithm, N) and mask costs below 50% success. */
export function summarizeCohorts(summaries: RunSummary[]): Cohort[] {
  const groups = new Map<string, RunSummary[]>();
  for (const s of summaries) {
    const key = `${s.map} | ${s.algorithm} | ${s.agents}`;
    (groups.get(key) ?? groups.set(key, []).get(key)!).push(s);
  }
  return [...groups.entries()].sort(([a], [b]) => a.localeCompare(b)).map(([key, runs]) => {
    const succeeded = runs.filter((r) => r.success);
    const successRate = succeeded.length / runs.length;
    const meanNormalizedCost =
      successRate >= 0.5
        ? succeeded.reduce((acc, r) => acc + r.normalizedCost, 0) / succeeded.length
        : null;
    return { key, successRate, meanNormalizedCost, runs: runs.length };
  });
}

/** Success-rate and mean-normalized-cost bars per (map, algorithm, N) cohort. */
export function renderCostSuccessBars(summaryTexts: string[]): string {
  if (summaryTexts.length === 0) {
    throw new UsageError("cost-success-bars needs at least one run summary");
  }
  const cohorts = summarizeCohorts(parseRunSummaries(summaryTexts));
  const svg = new SvgBuilder(W, H);
  const mid = (BOX.top + BOX.bottom) / 2;
  const topBox = { ...BOX, bottom: mid - 28 };
  const botBox = { ...BOX, top: mid + 12 };
  const n = cohorts.length;
  const band = (BOX.right - BOX.left) / n;
  const barW = Math.min(48, band * 0.6);

  const ysSuccess = linearScale([0, 1], [topBox.bottom, topBox.top]);
  svg.line(topBox.left, topBox.bottom, topBox.right, topBox.bottom);
  svg.text(14, (topBox.top + topBox.bottom) / 2, "success rate", { anchor: "middle", rotate: true });
  for (const frac of [0, 0.5, 1]) {
    svg.line(topBox.left - 4, ysSuccess(frac), topBox.left, ysSuccess(frac));
    svg.text(topBox.left - 7, ysSuccess(frac) + 3, `${frac * 100}%`, { anchor: "end", size: 10 });
  }

  const costs = cohorts.map((c) => c.meanNormalizedCost).filter((v): v is number => v !== null);
  const costMax = Math.max(1.0, ...costs);
  const ysCost = linearScale([0, costMax], [botBox.bottom, botBox.top]);
  svg.line(botBox.left, botBox.bottom, botBox.right, botBox.bottom);
  svg.text(14, (botBox.top + botBox.bottom) / 2, "mean normalized cost", { anchor: "middle", rotate: true });
  for (const v of [1, costMax]) {
    svg.line(botBox.left - 4, ysCost(v), botBox.left, ysCost(v));
    svg.text(botBox.left - 7, ysCost(v) + 3, v.toFixed(2), { anchor: "end", size: 10 });
  }

  cohorts.forEach((c, i) => {
    const cx = BOX.left + band * (i + 0.5);
    svg.rect(cx - barW / 2, ysSuccess(c.successRate), barW, topBox.bottom - ysSuccess(c.successRate), PALETTE[0], 0.9);
    svg.text(cx, ysSuccess(c.successRate) - 4, `${Math.round(c.successRate * 100)}%`, { anchor: "middle", size: 9 });
    if (c.meanNormalizedCost !== null) {
      svg.rect(cx - barW / 2, ysCost(c.meanNormalizedCost), barW, botBox.bottom - ysCost(c.meanNormalizedCost), PALETTE[1], 0.9);
      svg.text(cx, ysCost(c.meanNormalizedCost) - 4, c.meanNormalizedCost.toFixed(3), { anchor: "middle", size: 9 });
    } else {
      svg.text(cx, (botBox.top + botBox.bottom) / 2, "masked (<50%)", { anchor: "middle", size: 9 });
    }
    svg.text(cx, BOX.bottom + 28, c.key, { anchor: "middle", size: 8 });
  });
  return svg.toString();
}
