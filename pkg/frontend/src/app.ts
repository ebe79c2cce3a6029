// DOM wiring for the single-page console. Rendering is template-string
// based; every displayed figure comes from the store, which only holds API
// payloads. Polling keeps the view fresh at batch cadence.

import { ApiClient } from "./api.js";
import { scorePanelSummary, stepSeries, volumeHistogram, type StepPoint } from "./charts.js";
import { ConsoleStore } from "./state.js";
import type { QueueEntry } from "./types.js";

const POLL_MS = 5_000;

declare global {
  interface Window {
    QT_API_URL?: string;
    QT_API_TOKEN?: string;
  }
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function esc(text: string): string {
  return text.replace(/[&<>"]/g, (ch) =>
    ({ "&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;" })[ch]!,
  );
}

function fmt(x: number, digits = 3): string {
  return x.toFixed(digits);
}

function renderBanner(store: ConsoleStore): string {
  if (!store.error) return "";
  const badge = store.stale ? '<span class="badge stale">stale data</span>' : "";
  return `<div class="banner error">${esc(store.error)} ${badge}</div>`;
}

function renderEvents(store: ConsoleStore): string {
  return store.events
    .map(
      (event) => `
      <li class="${event.event_id === store.selected ? "active" : ""}"
          data-event="${esc(event.event_id)}">
        <strong>${esc(event.event_id)}</strong>
        <span>M${event.magnitude} · ${esc(event.status)}</span>
      </li>`,
    )
    .join("");
}

function renderEvidence(entry: QueueEntry): string {
  const rows = entry.evidence
    .map(
      (claim) => `
      <tr>
        <td>${esc(claim.source)}${claim.verified ? " ✔" : ""}</td>
        <td class="post-text">${esc(claim.text ?? claim.post_id)}</td>
        <td>${fmt(claim.xi)}</td><td>${fmt(claim.r)}</td><td>${fmt(claim.rho)}</td>
        <td>${fmt(claim.IS)}</td><td>${fmt(claim.NIS)}</td>
        <td>${fmt(claim.D)}</td><td>${fmt(claim.s)}</td>
      </tr>`,
    )
    .join("");
  return `
    <table class="evidence">
      <thead><tr><th>source</th><th>post</th><th>ξ</th><th>r</th><th>ρ</th>
                 <th>IS</th><th>NIS</th><th>D</th><th>s</th></tr></thead>
      <tbody>${rows}</tbody>
    </table>`;
}

function renderQueue(store: ConsoleStore): string {
  const entries = store.reviewQueue();
  if (!entries.length) {
    return '<p class="empty">No pending truth points. New discoveries appear here as batches run.</p>';
  }
  return entries
    .map(
      (entry) => `
      <details class="point" data-point="${esc(entry.point.point_id)}">
        <summary>
          <span class="kind ${entry.point.kind}">${entry.point.kind}</span>
          <strong>${entry.point.value}</strong>
          <span>first reported ${entry.point.earliest_hours.toFixed(1)}h · round ${entry.point.round}</span>
          <span class="actions">
            <button class="approve" data-point="${esc(entry.point.point_id)}">approve</button>
            <button class="reject" data-point="${esc(entry.point.point_id)}">reject</button>
          </span>
        </summary>
        ${renderEvidence(entry)}
      </details>`,
    )
    .join("");
}

function renderResolved(store: ConsoleStore): string {
  const row = (status: "approved" | "rejected") =>
    store
      .byStatus(status)
      .map(
        (p) =>
          `<li>${p.kind} ${p.value} @ ${p.earliest_hours.toFixed(1)}h · round ${p.round}</li>`,
      )
      .join("") || "<li class='empty'>none</li>";
  return `
    <div class="cols">
      <div><h3>Approved</h3><ul>${row("approved")}</ul></div>
      <div><h3>Rejected</h3><ul>${row("rejected")}</ul></div>
    </div>`;
}

function renderBinChart(store: ConsoleStore): string {
  const series = store.binChart();
  if (!series) return "";
  const bars = series.labels
    .map((label, i) => {
      const pct = (series.values[i]! * 100).toFixed(1);
      return `
      <div class="bin-row">
        <span class="bin-label">${esc(label)}</span>
        <div class="bin-track"><div class="bin-bar" style="width:${pct}%"></div></div>
        <span class="bin-value">${pct}%</span>
      </div>`;
    })
    .join("");
  const proj = store.projection!;
  return `
    ${bars}
    <p class="quantiles">median ${proj.median.toFixed(0)} ·
       5–95% ${proj.p5.toFixed(0)}–${proj.p95.toFixed(0)} ·
       ${proj.updates} update${proj.updates === 1 ? "" : "s"}</p>`;
}

function renderStepChart(points: StepPoint[], width = 560, height = 180): string {
  if (!points.length) return '<p class="empty">no discoveries yet</p>';
  const maxH = Math.max(...points.map((p) => p.hours)) * 1.05 || 1;
  const maxV = Math.max(...points.map((p) => p.value)) * 1.1 || 1;
  const x = (h: number) => 40 + (h / maxH) * (width - 60);
  const y = (v: number) => height - 20 - (v / maxV) * (height - 40);
  let d = `M ${x(points[0]!.hours)} ${y(points[0]!.value)}`;
  for (let i = 1; i < points.length; i++) {
    d += ` H ${x(points[i]!.hours)} V ${y(points[i]!.value)}`;
  }
  const dots = points
    .map(
      (p) =>
        `<circle cx="${x(p.hours)}" cy="${y(p.value)}" r="3"
                 class="dot ${p.status}"><title>${p.value} @ ${p.hours.toFixed(1)}h</title></circle>`,
    )
    .join("");
  return `
    <svg viewBox="0 0 ${width} ${height}" class="step-chart" role="img">
      <path d="${d}" fill="none" class="step-line"/>
      ${dots}
    </svg>`;
}

function renderTimeseries(store: ConsoleStore): string {
  const deaths = stepSeries(store.points, "deaths");
  const injuries = stepSeries(store.points, "injuries");
  const volume = [...volumeHistogram(store.claims).entries()].sort((a, b) => a[0] - b[0]);
  const maxVol = Math.max(1, ...volume.map(([, n]) => n));
  const volBars = volume
    .map(
      ([round, n]) => `
      <div class="vol-bar" style="height:${(n / maxVol) * 100}%"
           title="round ${round}: ${n} posts"></div>`,
    )
    .join("");
  const injuriesBlock = injuries.length
    ? `<h3>Discovered injuries</h3>${renderStepChart(injuries)}`
    : "";
  return `
    <h3>Discovered deaths</h3>${renderStepChart(deaths)}
    ${injuriesBlock}
    <h3>Claim-bearing post volume per round</h3>
    <div class="volume">${volBars}</div>`;
}

function renderScorePanels(store: ConsoleStore): string {
  const panels = scorePanelSummary(store.claims);
  if (!panels.length) return "";
  return panels
    .map(
      (panel) => `
      <div class="score-panel">
        <h4>${panel.verified ? "Verified" : "Unverified"} sources (${panel.count})</h4>
        <table>
          <tr><th></th><th>mean</th><th>min</th><th>max</th></tr>
          <tr><td>ξ</td><td>${fmt(panel.xi.mean)}</td><td>${fmt(panel.xi.min)}</td><td>${fmt(panel.xi.max)}</td></tr>
          <tr><td>r</td><td>${fmt(panel.r.mean)}</td><td>${fmt(panel.r.min)}</td><td>${fmt(panel.r.max)}</td></tr>
          <tr><td>ρ</td><td>${fmt(panel.rho.mean)}</td><td>${fmt(panel.rho.min)}</td><td>${fmt(panel.rho.max)}</td></tr>
        </table>
      </div>`,
    )
    .join("");
}

function render(store: ConsoleStore): void {
  el("banner").innerHTML = renderBanner(store);
  el("events").innerHTML = renderEvents(store);
  el("queue").innerHTML = renderQueue(store);
  el("resolved").innerHTML = renderResolved(store);
  el("bins").innerHTML = renderBinChart(store);
  el("timeseries").innerHTML = renderTimeseries(store);
  el("scores").innerHTML = renderScorePanels(store);
}

export function boot(): void {
  const api = new ApiClient(
    window.QT_API_URL ?? "http://127.0.0.1:8000",
    window.QT_API_TOKEN ?? null,
  );
  const store = new ConsoleStore(api, "console-operator");

  document.body.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const eventRow = target.closest<HTMLElement>("li[data-event]");
    if (eventRow?.dataset.event) {
      void store.select(eventRow.dataset.event).then(() => render(store));
      return;
    }
    if (target instanceof HTMLButtonElement && target.dataset.point) {
      const action = target.classList.contains("approve") ? "approve" : "reject";
      target.disabled = true;
      void store.submitReview(target.dataset.point, action).then(() => render(store));
    }
  });

  void store.loadEvents().then(() => render(store));
  setInterval(() => {
    void store.refresh().then(() => render(store));
  }, POLL_MS);
}

if (typeof document !== "undefined" && document.getElementById("queue")) {
  boot();
}
