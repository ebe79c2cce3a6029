"""Command-line client for the quaketruth API.

Every verb except ``serve`` is a thin HTTP client. With ``--url`` it talks
to a running server; without it, an in-process service (backed by
``--data-dir``) is mounted over httpx's ASGI transport, so replay runs need
no separate process.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import httpx

from .config import load_config


def _client(ctx: click.Context) -> httpx.Client:
    url = ctx.obj.get("url")
    token = ctx.obj.get("token")
    headers = {"Authorization": f"Bearer {token}"} if token else {}
    if url:
        return httpx.Client(base_url=url, headers=headers, timeout=120.0)
    from .api import create_app
    from .pipeline import Service
    from .transport import SyncASGITransport

    config = load_config(ctx.obj.get("config"), **ctx.obj.get("overrides", {}))
    app = create_app(Service(config), api_token=token or "")
    return httpx.Client(
        base_url="http://quaketruth.local", transport=SyncASGITransport(app),
        headers=headers, timeout=120.0,
    )


def _fail_on_error(response: httpx.Response) -> None:
    if response.status_code >= 400:
        try:
            detail = response.json().get("detail", response.text)
        except json.JSONDecodeError:
            detail = response.text
        click.echo(f"error ({response.status_code}): {detail}", err=True)
        sys.exit(1)


def _load_event_payload(path: str) -> dict:
    return json.loads(Path(path).read_text("utf-8"))


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="TOML config file.")
@click.option("--url", default=None, help="Base URL of a running server (default: in-process).")
@click.option("--token", default=None, help="Bearer token for the API.")
@click.option("--data-dir", default=None, help="Override the data directory.")
@click.pass_context
def main(ctx: click.Context, config_path: str | None, url: str | None,
         token: str | None, data_dir: str | None) -> None:
    """Discover and review earthquake casualty counts from crowdsourced posts."""
    ctx.ensure_object(dict)
    ctx.obj["config"] = config_path
    ctx.obj["url"] = url
    ctx.obj["token"] = token
    ctx.obj["overrides"] = {"data_dir": data_dir} if data_dir else {}


@main.command()
@click.option("--event", "event_file", required=True, type=click.Path(exists=True),
              help="Event registration payload (JSON).")
@click.pass_context
def register(ctx: click.Context, event_file: str) -> None:
    """Register an earthquake event and schedule its batches."""
    with _client(ctx) as client:
        response = client.post("/events", json=_load_event_payload(event_file))
        _fail_on_error(response)
        body = response.json()
        click.echo(f"registered {body['event_id']} (mode={body['mode']}, status={body['status']})")


def _print_truth_points(points: list[dict], kind_filter: str | None = None) -> None:
    for point in points:
        if kind_filter and point["kind"] != kind_filter:
            continue
        click.echo(
            f"{point['kind']} value={point['value']} hours={point['earliest_hours']:.1f} "
            f"round={point['round']} status={point['status']} id={point['point_id']}"
        )


@main.command()
@click.option("--event", "event_file", required=True, type=click.Path(exists=True))
@click.option("--file", "replay_file", type=click.Path(exists=True), default=None,
              help="Replay file; overrides the payload's replay_file.")
@click.option("--kind", default=None, help="Restrict printed truth points to one kind.")
@click.pass_context
def replay(ctx: click.Context, event_file: str, replay_file: str | None, kind: str | None) -> None:
    """Register an event against a replay file and run it to exhaustion."""
    payload = _load_event_payload(event_file)
    if replay_file:
        payload["replay_file"] = replay_file
    payload.setdefault("mode", "replay")
    with _client(ctx) as client:
        response = client.post("/events", json=payload)
        _fail_on_error(response)
        event_id = response.json()["event_id"]
        response = client.post(f"/events/{event_id}/batch", json={"all": True})
        _fail_on_error(response)
        batches = response.json()["batches"]
        click.echo(f"replayed {event_id}: {len(batches)} batches")
        response = client.get(f"/events/{event_id}/truth")
        _fail_on_error(response)
        _print_truth_points(response.json()["points"], kind)


@main.command()
@click.option("--event-id", required=True)
@click.option("--count", default=1, show_default=True)
@click.option("--all", "run_all", is_flag=True, help="Run until the replay is exhausted.")
@click.pass_context
def batch(ctx: click.Context, event_id: str, count: int, run_all: bool) -> None:
    """Run one or more pipeline batches for an event."""
    with _client(ctx) as client:
        body = {"all": True} if run_all else {"count": count}
        response = client.post(f"/events/{event_id}/batch", json=body)
        _fail_on_error(response)
        for summary in response.json()["batches"]:
            click.echo(
                f"round={summary['round']} fetched={summary['fetched']} "
                f"filtered={summary['filtered']} claims={summary['claims']} "
                f"points={len(summary['points'])} errors={len(summary['errors'])}"
            )


@main.command()
@click.option("--event-id", required=True)
@click.option("--status", default=None)
@click.option("--kind", default=None)
@click.pass_context
def truth(ctx: click.Context, event_id: str, status: str | None, kind: str | None) -> None:
    """List discovered truth points."""
    with _client(ctx) as client:
        params = {}
        if status:
            params["status"] = status
        if kind:
            params["kind"] = kind
        response = client.get(f"/events/{event_id}/truth", params=params)
        _fail_on_error(response)
        _print_truth_points(response.json()["points"])


@main.command()
@click.option("--point-id", required=True)
@click.option("--action", type=click.Choice(["approve", "reject"]), required=True)
@click.option("--actor", required=True)
@click.pass_context
def review(ctx: click.Context, point_id: str, action: str, actor: str) -> None:
    """Approve or reject a pending truth point."""
    with _client(ctx) as client:
        response = client.post(
            f"/truth/{point_id}/review", json={"action": action, "actor": actor}
        )
        _fail_on_error(response)
        point = response.json()
        click.echo(f"{point['point_id']} -> {point['status']}")


@main.command()
@click.option("--event-id", required=True)
@click.pass_context
def project(ctx: click.Context, event_id: str) -> None:
    """Show the current fatality-bin probabilities and toll quantiles."""
    with _client(ctx) as client:
        response = client.get(f"/events/{event_id}/projection")
        _fail_on_error(response)
        body = response.json()
        for entry in body["bins"]:
            high = entry["high"]
            label = f"{entry['low']:g}-{high:g}" if high is not None else f">={entry['low']:g}"
            click.echo(f"bin {label:>14}: {entry['probability']:.4f}")
        click.echo(
            f"median={body['median']:.1f} p5={body['p5']:.1f} p95={body['p95']:.1f} "
            f"updates={body['updates']}"
        )


@main.command()
@click.option("--event-id", required=True)
@click.option("--kind", type=click.Choice(["truth_csv", "scores_csv", "bins_csv", "language_csv"]),
              required=True)
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Write to a file instead of stdout.")
@click.pass_context
def report(ctx: click.Context, event_id: str, kind: str, out_path: str | None) -> None:
    """Export one of the CSV reports."""
    with _client(ctx) as client:
        response = client.get(f"/events/{event_id}/reports/{kind}")
        _fail_on_error(response)
        if out_path:
            Path(out_path).write_bytes(response.content)
            click.echo(f"wrote {out_path}")
        else:
            click.echo(response.text, nl=False)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.pass_context
def serve(ctx: click.Context, host: str, port: int) -> None:
    """Run the HTTP API server."""
    import uvicorn

    from .api import create_app
    from .pipeline import Service

    config = load_config(ctx.obj.get("config"), **ctx.obj.get("overrides", {}))
    service = Service(config)
    service.start_scheduler()
    app = create_app(service, api_token=ctx.obj.get("token"))
    try:
        uvicorn.run(app, host=host, port=port)
    finally:
        service.stop_scheduler()


if __name__ == "__main__":
    main()
