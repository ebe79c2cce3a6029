// Shapes mirror the service's JSON API responses (schema_version 1).

export interface EventSummary {
  event_id: string;
  magnitude: number;
  region_names: string[];
  origin_time: string;
  mode: string;
  status: string;
}

export interface TruthPoint {
  point_id: string;
  kind: string;
  value: number;
  earliest_timestamp: string;
  earliest_hours: number;
  round: number;
  status: "pending" | "approved" | "rejected";
  evidence: string[];
}

export interface Claim {
  round: number;
  kind: string;
  post_id: string;
  source: string;
  verified: boolean;
  timestamp: string | null;
  text: string | null;
  value: number;
  xi: number;
  r: number;
  rho: number;
  IS: number;
  NIS: number;
  D: number;
  s: number;
}

export interface Bin {
  low: number;
  high: number | null; // null marks the open-ended top bin
  probability: number;
}

export interface Projection {
  event_id: string;
  timestamp: string;
  bins: Bin[];
  median: number;
  p5: number;
  p95: number;
  updates: number;
}

export interface QueueEntry {
  point: TruthPoint;
  evidence: Claim[];
}
