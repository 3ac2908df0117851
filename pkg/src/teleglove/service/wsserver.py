"""Websocket broadcast/control bridge for the cockpit, plus static UI serving.

Outbound: every broadcast-type bus message goes to all connected clients as
one JSON text frame. Inbound: ``ctl_tilt`` / ``ctl_flex`` / ``ctl_gesture``
messages are validated and routed into the live session's ingest queues, so
cockpit input flows through exactly the same paths as wearable data.
"""

from __future__ import annotations

import asyncio
import functools
import http.server
import json
import logging
import queue
import threading
from pathlib import Path
from typing import Optional

from websockets.asyncio.server import broadcast, serve

from ..synth import LABEL_TO_CLASS
from .bus import BROADCAST_TYPES, BusMessage
from .live import LiveSession

log = logging.getLogger("teleglove.ws")


class CockpitServer:
    """Runs an asyncio websocket server on its own thread."""

    def __init__(self, live: LiveSession, host: str = "127.0.0.1", port: int = 8765) -> None:
        self.live = live
        self.host = host
        self.port = port
        self._outbox: "queue.Queue[Optional[str]]" = queue.Queue()
        self._clients: set = set()
        self._thread: Optional[threading.Thread] = None
        self._started = threading.Event()
        self._shutdown: Optional[asyncio.Event] = None
        self._loop: Optional[asyncio.AbstractEventLoop] = None
        live.core.subscribers.append(self.on_bus_message)

    # Called from worker threads; only the wire-schema types go out.
    def on_bus_message(self, msg: BusMessage) -> None:
        if msg.type in BROADCAST_TYPES:
            self._outbox.put(msg.to_json())

    def _route_control(self, text: str) -> None:
        try:
            obj = json.loads(text)
            kind = obj["type"]
            payload = obj.get("payload", {})
            if kind == "ctl_tilt":
                theta, phi = float(payload["theta"]), float(payload["phi"])
                self.live.left_queue.put(("ctl_tilt", (theta, phi)))
            elif kind == "ctl_flex":
                finger = payload["finger"]
                if finger in ("index", "middle"):
                    self.live.left_queue.put(("ctl_flex", (finger,)))
            elif kind == "ctl_gesture":
                label = payload.get("label")
                if label in LABEL_TO_CLASS:
                    self.live.right_queue.put(("ctl_gesture", (LABEL_TO_CLASS[label],)))
            else:
                log.warning("unknown control type %r", kind)
        except (json.JSONDecodeError, KeyError, TypeError, ValueError):
            log.warning("dropping malformed control frame: %.80s", text)

    async def _handler(self, ws) -> None:
        self._clients.add(ws)
        try:
            async for text in ws:
                self._route_control(text)
        finally:
            self._clients.discard(ws)

    async def _pump(self) -> None:
        loop = asyncio.get_running_loop()
        while True:
            text = await loop.run_in_executor(None, self._outbox.get)
            if text is None:
                return
            if self._clients:
                broadcast(self._clients, text)

    async def _main(self) -> None:
        self._shutdown = asyncio.Event()
        self._loop = asyncio.get_running_loop()
        async with serve(self._handler, self.host, self.port) as server:
            if self.port == 0:
                self.port = server.sockets[0].getsockname()[1]
            self._started.set()
            pump = asyncio.create_task(self._pump())
            await self._shutdown.wait()
            self._outbox.put(None)
            await pump

    def start(self) -> None:
        self._thread = threading.Thread(target=lambda: asyncio.run(self._main()),
                                        name="teleglove-ws", daemon=True)
        self._thread.start()
        if not self._started.wait(timeout=5.0):
            raise RuntimeError("websocket server failed to start")

    def stop(self) -> None:
        if self._loop is not None and self._shutdown is not None:
            self._loop.call_soon_threadsafe(self._shutdown.set)
        if self._thread is not None:
            self._thread.join(timeout=5.0)
            self._thread = None


class StaticServer:
    """Minimal static file server for the built cockpit bundle."""

    def __init__(self, directory: str | Path, host: str = "127.0.0.1", port: int = 8000) -> None:
        handler = functools.partial(
            http.server.SimpleHTTPRequestHandler, directory=str(directory)
        )
        self._httpd = http.server.ThreadingHTTPServer((host, port), handler)
        self.port = self._httpd.server_address[1]
        self._thread: Optional[threading.Thread] = None

    def start(self) -> None:
        self._thread = threading.Thread(
            target=self._httpd.serve_forever, name="teleglove-static", daemon=True
        )
        self._thread.start()

    def stop(self) -> None:
        self._httpd.shutdown()
        if self._thread is not None:
            self._thread.join(timeout=2.0)
