// Pure chart-series builders: every number in a rendered chart comes out of
// one of these, which in turn read only API payloads.

import type { Claim, Projection, TruthPoint } from "./types.js";

export interface BinSeries {
  labels: string[];
  values: number[];
}

export function binLabel(low: number, high: number | null): string {
  const compact = (n: number) => (n >= 1000 ? `${n / 1000}k` : `${n}`);
  return high === null ? `≥${compact(low)}` : `${compact(low)}–${compact(high)}`;
}

/** Stacked/bar series for the fatality-bin chart, straight from a projection. */
export function binChartSeries(projection: Projection): BinSeries {
  return {
    labels: projection.bins.map((bin) => binLabel(bin.low, bin.high)),
    values: projection.bins.map((bin) => bin.probability),
  };
}

export interface StepPoint {
  hours: number;
  value: number;
  status: string;
}

/** Discovered-value step chart: one step per truth point, in round order. */
export function stepSeries(points: TruthPoint[], kind: string): StepPoint[] {
  return points
    .filter((p) => p.kind === kind)
    .sort((a, b) => a.round - b.round)
    .map((p) => ({ hours: p.earliest_hours, value: p.value, status: p.status }));
}

/** Post volume per round (claim-bearing posts only, deduplicated). */
export function volumeHistogram(claims: Claim[]): Map<number, number> {
  const seen = new Set<string>();
  const counts = new Map<number, number>();
  for (const claim of claims) {
    const key = `${claim.round}:${claim.post_id}`;
    if (seen.has(key)) continue;
    seen.add(key);
    counts.set(claim.round, (counts.get(claim.round) ?? 0) + 1);
  }
  return counts;
}

export interface ScorePanel {
  verified: boolean;
  count: number;
  xi: Summary;
  r: Summary;
  rho: Summary;
}

export interface Summary {
  mean: number;
  min: number;
  max: number;
}

function summarize(values: number[]): Summary {
  const mean = values.reduce((a, b) => a + b, 0) / values.length;
  return { mean, min: Math.min(...values), max: Math.max(...values) };
}

/** Credibility-score panels grouped by the source's verified flag. */
export function scorePanelSummary(claims: Claim[]): ScorePanel[] {
  const panels: ScorePanel[] = [];
  for (const verified of [true, false]) {
    const group = claims.filter((c) => c.verified === verified);
    if (!group.length) continue;
    panels.push({
      verified,
      count: group.length,
      xi: summarize(group.map((c) => c.xi)),
      r: summarize(group.map((c) => c.r)),
      rho: summarize(group.map((c) => c.rho)),
    });
  }
  return panels;
}
