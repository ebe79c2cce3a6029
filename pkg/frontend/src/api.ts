import type { Claim, EventSummary, Projection, TruthPoint } from "./types.js";

export class ApiError extends Error {
  constructor(message: string, public status: number) {
    super(message);
  }
}

/** Thin fetch client for the quaketruth JSON API. */
export class ApiClient {
  constructor(
    private baseUrl: string,
    private token: string | null = null,
    private fetchFn: typeof fetch = fetch,
  ) {}

  private headers(json = false): Record<string, string> {
    const headers: Record<string, string> = {};
    if (json) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    return headers;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    } catch (err) {
      throw new ApiError(`network failure: ${String(err)}`, 0);
    }
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(detail, response.status);
    }
    return (await response.json()) as T;
  }

  async listEvents(): Promise<EventSummary[]> {
    const body = await this.request<{ events: EventSummary[] }>("/events", {
      headers: this.headers(),
    });
    return body.events;
  }

  async truthPoints(eventId: string, status?: string): Promise<TruthPoint[]> {
    const query = status ? `?status=${encodeURIComponent(status)}` : "";
    const body = await this.request<{ points: TruthPoint[] }>(
      `/events/${encodeURIComponent(eventId)}/truth${query}`,
      { headers: this.headers() },
    );
    return body.points;
  }

  async claims(eventId: string): Promise<Claim[]> {
    const body = await this.request<{ claims: Claim[] }>(
      `/events/${encodeURIComponent(eventId)}/claims`,
      { headers: this.headers() },
    );
    return body.claims;
  }

  async projection(eventId: string): Promise<Projection> {
    return this.request<Projection>(
      `/events/${encodeURIComponent(eventId)}/projection`,
      { headers: this.headers() },
    );
  }

  async review(pointId: string, action: "approve" | "reject", actor: string): Promise<TruthPoint> {
    return this.request<TruthPoint>(`/truth/${encodeURIComponent(pointId)}/review`, {
      method: "POST",
      headers: this.headers(true),
      body: JSON.stringify({ action, actor }),
    });
  }
}
