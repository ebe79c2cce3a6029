// Canned API fixture server for console tests: serves the same JSON shapes
// as the real service and mutates its state on review POSTs.

import { createServer, type Server } from "node:http";
import type { AddressInfo } from "node:net";
import type { Bin, Claim, Projection, TruthPoint } from "../src/types.js";

const BIN_EDGES: Array<[number, number | null]> = [
  [0, 1], [1, 10], [10, 100], [100, 1000], [1000, 10000], [10000, 100000], [100000, null],
];

function projection(eventId: string, probs: number[], updates: number): Projection {
  return {
    event_id: eventId,
    timestamp: "2022-09-05T07:52:00+00:00",
    bins: BIN_EDGES.map(([low, high], i): Bin => ({ low, high, probability: probs[i]! })),
    median: updates ? 48 : 50,
    p5: updates ? 12 : 10,
    p95: updates ? 180 : 240,
    updates,
  };
}

export interface FixtureState {
  reviewPosts: Array<{ pointId: string; action: string; actor: string }>;
  requests: string[];
}

export interface Fixture {
  server: Server;
  baseUrl: string;
  state: FixtureState;
  close(): Promise<void>;
}

export function makePoints(): TruthPoint[] {
  return [
    {
      point_id: "luding-2022:deaths-r7-v7",
      kind: "deaths",
      value: 7,
      earliest_timestamp: "2022-09-05T07:52:00+00:00",
      earliest_hours: 3.0,
      round: 7,
      status: "pending",
      evidence: ["l-d7a", "l-d7f"],
    },
    {
      point_id: "luding-2022:deaths-r9-v21",
      kind: "deaths",
      value: 21,
      earliest_timestamp: "2022-09-05T08:58:00+00:00",
      earliest_hours: 4.1,
      round: 9,
      status: "pending",
      evidence: ["l-d21a", "l-d21b"],
    },
  ];
}

export function makeClaims(): Claim[] {
  const base = {
    kind: "deaths",
    timestamp: "2022-09-05T07:52:00+00:00",
    IS: 0.28,
    NIS: 1.0,
    D: 0.57,
    s: 1.0,
  };
  return [
    { ...base, round: 7, post_id: "l-d7a", source: "wit_a", verified: false,
      text: "7 dead after the earthquake in Luding, rescue underway",
      value: 7, xi: 0.6, r: 0.54, rho: 1.0 },
    { ...base, round: 7, post_id: "l-d7f", source: "fwd_1", verified: false,
      text: "7 dead after the earthquake in Luding, rescue underway",
      value: 7, xi: 0.6, r: 0.54, rho: 0.0, IS: 0, NIS: 0 },
    { ...base, round: 9, post_id: "l-d21a", source: "med_b", verified: true,
      text: "At least 21 dead in Luding earthquake, dozens injured",
      value: 21, xi: 0.6, r: 0.55, rho: 0.9 },
    { ...base, round: 9, post_id: "l-d21b", source: "med_c", verified: true,
      text: "Local officials confirm 21 killed in Sichuan quake",
      value: 21, xi: 0.6, r: 0.52, rho: 0.85 },
  ];
}

const PRIOR_PROBS = [0.0, 0.18, 0.5, 0.28, 0.04, 0.0, 0.0];
const POSTERIOR_PROBS = [0.0, 0.07, 0.71, 0.2, 0.02, 0.0, 0.0];

export async function startFixture(failHealthily = false): Promise<Fixture> {
  const points = makePoints();
  const claims = makeClaims();
  const state: FixtureState = { reviewPosts: [], requests: [] };
  let updates = 0;

  const server = createServer((req, res) => {
    const url = req.url ?? "/";
    state.requests.push(`${req.method} ${url}`);
    const json = (body: unknown, status = 200) => {
      res.writeHead(status, { "Content-Type": "application/json" });
      res.end(JSON.stringify(body));
    };
    if (failHealthily) {
      json({ detail: "backend exploded" }, 500);
      return;
    }
    if (url === "/events") {
      json({
        schema_version: "1",
        events: [{
          event_id: "luding-2022", magnitude: 6.8,
          region_names: ["Luding", "Sichuan", "China"],
          origin_time: "2022-09-05T04:52:00+00:00", mode: "replay", status: "active",
        }],
      });
    } else if (url.startsWith("/events/luding-2022/truth")) {
      json({ schema_version: "1", event_id: "luding-2022", points });
    } else if (url.startsWith("/events/luding-2022/claims")) {
      json({ schema_version: "1", event_id: "luding-2022", claims });
    } else if (url.startsWith("/events/luding-2022/projection")) {
      json({
        schema_version: "1",
        ...projection("luding-2022", updates ? POSTERIOR_PROBS : PRIOR_PROBS, updates),
      });
    } else if (req.method === "POST" && url.includes("/review")) {
      const pointId = decodeURIComponent(url.split("/")[2]!);
      let body = "";
      req.on("data", (chunk) => (body += chunk));
      req.on("end", () => {
        const { action, actor } = JSON.parse(body) as { action: string; actor: string };
        const point = points.find((p) => p.point_id === pointId);
        if (!point) {
          json({ detail: "unknown point" }, 404);
          return;
        }
        if (point.status !== "pending") {
          json({ detail: `point already ${point.status}` }, 409);
          return;
        }
        state.reviewPosts.push({ pointId, action, actor });
        point.status = action === "approve" ? "approved" : "rejected";
        if (action === "approve") updates += 1;
        json({ schema_version: "1", ...point });
      });
    } else {
      json({ detail: "not found" }, 404);
    }
  });

  await new Promise<void>((resolve) => server.listen(0, "127.0.0.1", resolve));
  const { port } = server.address() as AddressInfo;
  return {
    server,
    state,
    baseUrl: `http://127.0.0.1:${port}`,
    close: () => new Promise((resolve) => server.close(() => resolve())),
  };
}
