"""WebSocket front end for the session service.

All session mutation funnels through one asyncio lock per service, keeping the
logical executor single-threaded; connection I/O stays concurrent. The tick
driver advances every session at the fixed 20 Hz step in the background.
"""

from __future__ import annotations

import asyncio
import contextlib
import itertools
import time
from typing import Dict, List

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from meetmotion.catalog import default_catalog
from meetmotion.protocol import WireMessage, encode
from meetmotion.session import Outbound, SessionConfig, SessionService

TICK_DRIVER_SLEEP_S = 0.02


def now_ms() -> int:
    return int(time.monotonic() * 1000)


class WsGateway:
    def __init__(self, service: SessionService) -> None:
        self.service = service
        self.lock = asyncio.Lock()
        self.sockets: Dict[str, WebSocket] = {}
        self._seq: Dict[str, itertools.count] = {}
        self._conn_ids = itertools.count(1)

    def register(self, ws: WebSocket) -> str:
        conn_id = f"c{next(self._conn_ids)}"
        self.sockets[conn_id] = ws
        self._seq[conn_id] = itertools.count(1)
        self.service.register_connection(conn_id)
        return conn_id

    async def unregister(self, conn_id: str) -> None:
        self.sockets.pop(conn_id, None)
        self._seq.pop(conn_id, None)
        async with self.lock:
            outs = self.service.drop_connection(conn_id)
        await self.deliver(outs)

    async def handle(self, conn_id: str, raw: str) -> bool:
        """Process one inbound frame; True means the connection must close."""
        async with self.lock:
            outs = self.service.handle_message(conn_id, raw, now_ms())
        await self.deliver(outs)
        must_close = any(
            out.type == "error" and out.payload.get("code") == "bad-version"
            for out in outs
        )
        if must_close:
            ws = self.sockets.get(conn_id)
            if ws is not None:
                with contextlib.suppress(Exception):
                    await ws.close(code=1002)
        return must_close

    async def tick(self) -> None:
        async with self.lock:
            outs = self.service.advance(now_ms())
        await self.deliver(outs)

    async def deliver(self, outs: List[Outbound]) -> None:
        stamp = now_ms()
        for out in outs:
            if out.target.startswith("session:"):
                sid = out.target.split(":", 1)[1]
                conn_ids = self.service.connections_in(sid)
            else:
                sid = self._sid_of(out.target)
                conn_ids = [out.target]
            for conn_id in conn_ids:
                ws = self.sockets.get(conn_id)
                if ws is None:
                    continue
                message = WireMessage(
                    type=out.type,
                    payload=out.payload,
                    seq=next(self._seq.get(conn_id, itertools.count())),
                    ts=stamp,
                    sid=sid,
                )
                try:
                    await ws.send_text(encode(message))
                except Exception:
                    pass  # racing a disconnect; the receive loop cleans up

    def _sid_of(self, conn_id: str) -> str:
        conn = self.service.connections.get(conn_id)
        return conn.sid if conn is not None and conn.sid else ""


def build_server(
    data_dir: str | None = None,
    session_config: SessionConfig | None = None,
    seed: int = 0,
    tick_driver: bool = True,
) -> FastAPI:
    service = SessionService(data_dir)
    default_sid = service.create_session(session_config, seed=seed)
    gateway = WsGateway(service)

    @contextlib.asynccontextmanager
    async def lifespan(_: FastAPI):
        ticker = None
        if tick_driver:

            async def run() -> None:
                while True:
                    await gateway.tick()
                    await asyncio.sleep(TICK_DRIVER_SLEEP_S)

            ticker = asyncio.create_task(run())
        try:
            yield
        finally:
            if ticker is not None:
                ticker.cancel()
                with contextlib.suppress(asyncio.CancelledError):
                    await ticker

    app = FastAPI(title="meetmotion", lifespan=lifespan)
    app.state.service = service
    app.state.gateway = gateway
    app.state.default_sid = default_sid

    @app.get("/")
    async def info() -> dict:
        return {
            "name": "meetmotion",
            "default_session": default_sid,
            "protocol_version": 1,
            "ws_path": "/ws",
        }

    @app.get("/catalog")
    async def catalog() -> list:
        return [profile.to_dict() for profile in default_catalog()]

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket) -> None:
        await ws.accept()
        conn_id = gateway.register(ws)
        try:
            while True:
                raw = await ws.receive_text()
                if await gateway.handle(conn_id, raw):
                    break
        except (WebSocketDisconnect, RuntimeError):
            pass
        finally:
            await gateway.unregister(conn_id)

    return app
