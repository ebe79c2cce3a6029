"""Sync httpx transport over an in-process ASGI app.

Lets the CLI (and tests) run against the service without a listening
socket: each request spins the app's handler in a private event loop.
"""

from __future__ import annotations

import asyncio

import httpx


class SyncASGITransport(httpx.BaseTransport):
    def __init__(self, app):
        self.app = app

    def handle_request(self, request: httpx.Request) -> httpx.Response:
        async def call() -> httpx.Response:
            transport = httpx.ASGITransport(app=self.app)
            async_request = httpx.Request(
                request.method,
                request.url,
                headers=request.headers,
                content=request.read(),
            )
            response = await transport.handle_async_request(async_request)
            body = b"".join([chunk async for chunk in response.stream])
            return httpx.Response(
                response.status_code, headers=response.headers, content=body
            )

        return asyncio.run(call())


def in_process_client(app, base_url: str = "http://quaketruth.local", **kwargs) -> httpx.Client:
    return httpx.Client(base_url=base_url, transport=SyncASGITransport(app), **kwargs)
