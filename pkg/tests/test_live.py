"""Real-time driver tests: wall-clock pacing, path independence, websocket."""

import asyncio
import json
import time

import numpy as np
import pytest

from teleglove.service.live import LiveSession
from teleglove.service.protocol import LeftLine, ReplayEvent, RightLine
from teleglove.service.session import SessionCore
from teleglove.service.wsserver import CockpitServer
from teleglove.synth import GestureClass

FWD = LeftLine((0.545, 0.0, 0.838), (300, 300))


def left_events(duration_ms, period_ms=10.0, line=FWD):
    return [ReplayEvent(t * period_ms, line) for t in range(int(duration_ms / period_ms))]


class TestLiveSession:
    def test_left_stream_drives_base(self):
        core = SessionCore()
        live = LiveSession(core)
        live.run(left=left_events(1000), duration_ms=1400)
        # forward for ~1 s then the feeder stops: expect roughly v*t displacement
        assert core.drive.pose.x > 0.3

    def test_gesture_dispatch_latency_under_100ms(self):
        core = SessionCore()
        live = LiveSession(core)
        right = [ReplayEvent(200.0, RightLine(GestureClass.UP_DOWN, 0.95))]
        live.run(right=right, duration_ms=800)
        latency = [m for m in core.log if m.type == "latency"]
        assert len(latency) == 1
        assert latency[0].payload["total_ms"] < 100.0

    def test_right_stall_leaves_left_cadence_unchanged(self):
        core = SessionCore()
        core.right_hook = lambda: time.sleep(1.0)  # 1 s stall in the right path
        live = LiveSession(core)
        right = [ReplayEvent(500.0, RightLine(GestureClass.UP_DOWN, 0.95))]
        live.run(left=left_events(3000), right=right, duration_ms=3200)
        twists = [m for m in core.log if m.type == "twist" and "safe_stop" not in m.payload]
        ts = np.array([m.t for m in twists])
        stall_window = ts[(ts > 600) & (ts < 1400)]  # interval covering the stall
        gaps = np.diff(stall_window)
        assert len(stall_window) >= 72  # >= 90% of the nominal 80 twists
        assert abs(float(gaps.mean()) - core.config.tick_ms) <= 1.0
        assert gaps.max() <= 100.0  # a blocked path would gap ~1000 ms

    def test_disconnect_issues_safe_stop(self):
        core = SessionCore()
        live = LiveSession(core)
        live.run(left=left_events(300), duration_ms=900)
        twists = [m for m in core.log if m.type == "twist"]
        stops = [m for m in twists if m.payload.get("safe_stop")]
        assert stops, "no safe stop after the left feeder disconnected"


class TestCockpitServer:
    def test_broadcast_and_control_round_trip(self):
        import websockets.sync.client as wsclient

        core = SessionCore()
        live = LiveSession(core)
        server = CockpitServer(live, port=0)
        server.start()
        try:
            live.start(duration_ms=4000)
            with wsclient.connect(f"ws://127.0.0.1:{server.port}", open_timeout=5) as ws:
                ws.send(json.dumps({"type": "ctl_tilt", "payload": {"theta": 25.0, "phi": 0.0}}))
                ws.send(json.dumps({"type": "ctl_flex", "payload": {"finger": "index"}}))
                ws.send(json.dumps({"type": "ctl_gesture", "payload": {"label": "up-down"}}))
                ws.send("this is not json")  # must not kill the server
                wanted = {"pose", "joints", "caps", "gesture"}
                got_types = set()
                deadline = time.time() + 3.0
                while time.time() < deadline and not wanted <= got_types:
                    msg = json.loads(ws.recv(timeout=2.0))
                    got_types.add(msg["type"])
                assert wanted <= got_types
        finally:
            live.stop()
            server.stop()
        # the injected controls reached the session core
        assert core.controller.caps.v_max == pytest.approx(0.55)
        gestures = [m for m in core.log if m.type == "gesture"]
        assert gestures and gestures[0].payload["dispatched"]
        assert core.drive.pose.x > 0.0
