// Console view model. All state derives from API responses; nothing here
// mutates a score or a count client-side.

import { ApiClient, ApiError } from "./api.js";
import { binChartSeries, type BinSeries } from "./charts.js";
import type { Claim, EventSummary, Projection, QueueEntry, TruthPoint } from "./types.js";

export class ConsoleStore {
  events: EventSummary[] = [];
  selected: string | null = null;
  points: TruthPoint[] = [];
  claims: Claim[] = [];
  projection: Projection | null = null;
  error: string | null = null;
  stale = false;

  /** point ids with a review request already issued (client-side guard). */
  private submitted = new Set<string>();

  constructor(
    private api: ApiClient,
    public actor: string = "console",
  ) {}

  async loadEvents(): Promise<void> {
    await this.guarded(async () => {
      this.events = await this.api.listEvents();
      if (!this.selected && this.events.length) {
        await this.select(this.events[0]!.event_id);
      }
    });
  }

  async select(eventId: string): Promise<void> {
    this.selected = eventId;
    await this.refresh();
  }

  /** Polling tick: re-pull everything for the selected event. */
  async refresh(): Promise<void> {
    if (!this.selected) return;
    const eventId = this.selected;
    await this.guarded(async () => {
      const [points, claims, projection] = await Promise.all([
        this.api.truthPoints(eventId),
        this.api.claims(eventId),
        this.api.projection(eventId),
      ]);
      this.points = points;
      this.claims = claims;
      this.projection = projection;
    });
  }

  private async guarded(action: () => Promise<void>): Promise<void> {
    try {
      await action();
      this.error = null;
      this.stale = false;
    } catch (err) {
      this.error = err instanceof Error ? err.message : String(err);
      this.stale = true; // keep showing the last good data, badged as stale
    }
  }

  byStatus(status: TruthPoint["status"]): TruthPoint[] {
    return this.points
      .filter((p) => p.status === status)
      .sort((a, b) => a.round - b.round);
  }

  /** Pending points in round order, each with its evidence claims. */
  reviewQueue(): QueueEntry[] {
    return this.byStatus("pending").map((point) => ({
      point,
      evidence: this.claims.filter(
        (claim) => claim.kind === point.kind && point.evidence.includes(claim.post_id),
      ),
    }));
  }

  /**
   * Issue a review. At most one request ever leaves the client per point:
   * repeat clicks (or a still-pending row after approval) are no-ops.
   * Returns true when a request was actually sent.
   */
  async submitReview(pointId: string, action: "approve" | "reject"): Promise<boolean> {
    const point = this.points.find((p) => p.point_id === pointId);
    if (!point || point.status !== "pending" || this.submitted.has(pointId)) {
      return false;
    }
    this.submitted.add(pointId);
    try {
      const updated = await this.api.review(pointId, action, this.actor);
      this.points = this.points.map((p) => (p.point_id === pointId ? updated : p));
      if (action === "approve" && this.selected) {
        // the projection may have moved; re-fetch so the bin chart animates
        this.projection = await this.api.projection(this.selected);
      }
      this.error = null;
      this.stale = false;
      return true;
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        // someone else reviewed it first: re-sync, then surface a toast
        await this.refresh();
        this.error = `already reviewed: ${err.message}`;
        return false;
      }
      this.submitted.delete(pointId); // transient failure: allow a retry
      this.error = err instanceof Error ? err.message : String(err);
      this.stale = true;
      return false;
    }
  }

  binChart(): BinSeries | null {
    return this.projection ? binChartSeries(this.projection) : null;
  }
}
