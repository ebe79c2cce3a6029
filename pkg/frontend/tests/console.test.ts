import { afterEach, beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { binChartSeries, binLabel, scorePanelSummary, stepSeries, volumeHistogram } from "../src/charts.js";
import { ConsoleStore } from "../src/state.js";
import { makeClaims, makePoints, startFixture, type Fixture } from "./fixture_server.js";

let fixture: Fixture;
let store: ConsoleStore;

beforeEach(async () => {
  fixture = await startFixture();
  store = new ConsoleStore(new ApiClient(fixture.baseUrl), "tester");
  await store.loadEvents();
});

afterEach(async () => {
  await fixture.close();
});

describe("review queue", () => {
  it("lists pending points sorted by round with score breakdowns", () => {
    const queue = store.reviewQueue();
    expect(queue.map((entry) => entry.point.value)).toEqual([7, 21]);
    expect(queue.map((entry) => entry.point.round)).toEqual([7, 9]);

    const first = queue[0]!;
    expect(first.point.earliest_hours).toBeCloseTo(3.0);
    expect(first.evidence.map((c) => c.post_id)).toEqual(["l-d7a", "l-d7f"]);
    for (const claim of first.evidence) {
      expect(claim.xi).toBeGreaterThan(0);
      expect(claim.r).toBeGreaterThan(0);
      expect(claim.rho).toBeGreaterThanOrEqual(0);
      expect(typeof claim.verified).toBe("boolean");
    }
  });

  it("shows an error state with stale data on API failure", async () => {
    const broken = await startFixture(true);
    const badStore = new ConsoleStore(new ApiClient(broken.baseUrl));
    await badStore.loadEvents();
    expect(badStore.error).toBeTruthy();
    expect(badStore.stale).toBe(true);
    await broken.close();
  });
});

describe("review submission", () => {
  it("approve posts exactly once and the bin chart equals the next projection payload", async () => {
    const pointId = "luding-2022:deaths-r7-v7";
    const sent = await store.submitReview(pointId, "approve");
    expect(sent).toBe(true);

    const posts = fixture.state.reviewPosts;
    expect(posts).toHaveLength(1);
    expect(posts[0]).toEqual({ pointId, action: "approve", actor: "tester" });

    // chart series must equal what a fresh projection GET returns
    const independent = await new ApiClient(fixture.baseUrl).projection("luding-2022");
    expect(store.binChart()).toEqual(binChartSeries(independent));
    expect(store.projection?.updates).toBe(1);
  });

  it("double submit still issues a single API call", async () => {
    const pointId = "luding-2022:deaths-r7-v7";
    const [first, second] = await Promise.all([
      store.submitReview(pointId, "approve"),
      store.submitReview(pointId, "approve"),
    ]);
    expect([first, second].filter(Boolean)).toHaveLength(1);
    expect(fixture.state.reviewPosts).toHaveLength(1);
    await store.submitReview(pointId, "approve"); // a later click is also a no-op
    expect(fixture.state.reviewPosts).toHaveLength(1);
  });

  it("reject leaves the chart data bit-identical and moves the point", async () => {
    const before = JSON.stringify(store.binChart());
    const sent = await store.submitReview("luding-2022:deaths-r7-v7", "reject");
    expect(sent).toBe(true);
    expect(JSON.stringify(store.binChart())).toBe(before);
    expect(store.byStatus("rejected").map((p) => p.value)).toEqual([7]);
    expect(store.reviewQueue().map((entry) => entry.point.value)).toEqual([21]);
  });

  it("conflict on an already-reviewed point refreshes instead of throwing", async () => {
    // another operator approves behind our back
    await new ApiClient(fixture.baseUrl).review(
      "luding-2022:deaths-r7-v7", "approve", "someone-else",
    );
    const other = new ConsoleStore(new ApiClient(fixture.baseUrl), "tester");
    await other.loadEvents();
    // simulate the stale pending row: force the local copy back to pending
    other.points = other.points.map((p) =>
      p.point_id === "luding-2022:deaths-r7-v7" ? { ...p, status: "pending" as const } : p,
    );
    const sent = await other.submitReview("luding-2022:deaths-r7-v7", "approve");
    expect(sent).toBe(false);
    expect(other.error).toMatch(/already reviewed/);
    expect(fixture.state.reviewPosts.filter((p) => p.actor === "tester")).toHaveLength(0);
  });
});

describe("chart builders", () => {
  it("step series walks the discovered values in round order", () => {
    const points = makePoints();
    const series = stepSeries(points, "deaths");
    expect(series.map((p) => [p.hours, p.value])).toEqual([[3.0, 7], [4.1, 21]]);
    expect(stepSeries(points, "injuries")).toEqual([]);
  });

  it("bin labels cover the open-ended top bin", () => {
    expect(binLabel(10, 100)).toBe("10–100");
    expect(binLabel(100000, null)).toBe("≥100k");
  });

  it("bin series mirrors the projection payload exactly", async () => {
    const projection = await new ApiClient(fixture.baseUrl).projection("luding-2022");
    const series = binChartSeries(projection);
    expect(series.values).toEqual(projection.bins.map((b) => b.probability));
    expect(series.labels).toHaveLength(7);
  });

  it("volume histogram counts distinct claim posts per round", () => {
    const counts = volumeHistogram(makeClaims());
    expect(counts.get(7)).toBe(2);
    expect(counts.get(9)).toBe(2);
  });

  it("score panels group by the verified flag", () => {
    const panels = scorePanelSummary(makeClaims());
    expect(panels.map((p) => p.verified)).toEqual([true, false]);
    const verified = panels[0]!;
    expect(verified.count).toBe(2);
    expect(verified.rho.mean).toBeCloseTo((0.9 + 0.85) / 2);
  });
});
