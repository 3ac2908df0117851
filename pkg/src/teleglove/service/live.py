"""Real-time session driver: one thread per ingest path plus a ticker.

Replay scripts are paced against the wall clock; live sources (the cockpit
websocket) feed the same queues. The left and right paths are independent
failure domains: each worker owns its queue and takes only its own path
lock, so a stall in one never changes the other's cadence.
"""

from __future__ import annotations

import queue
import threading
import time
from typing import Iterable, Optional

from ..imu import ImuSample
from .protocol import LeftLine, ReplayEvent, RightLine
from .session import SessionCore

_STOP = object()


class LiveSession:
    def __init__(self, core: SessionCore) -> None:
        self.core = core
        self.left_queue: "queue.Queue[object]" = queue.Queue()
        self.right_queue: "queue.Queue[object]" = queue.Queue()
        self._threads: list[threading.Thread] = []
        self._stop = threading.Event()
        self._t0 = 0.0

    # -------------------------------------------------------------- clock

    def now_ms(self) -> float:
        return (time.perf_counter() - self._t0) * 1000.0

    # ------------------------------------------------------------ feeders

    def _feed(self, events: Iterable[ReplayEvent], q: "queue.Queue[object]") -> None:
        for ev in events:
            if self._stop.is_set():
                break
            wait = ev.t_ms - self.now_ms()
            if wait > 0:
                time.sleep(wait / 1000.0)
            q.put(ev.line)
        q.put(_STOP)

    def _feed_samples(self, samples: Iterable[tuple[float, ImuSample]]) -> None:
        for t_ms, sample in samples:
            if self._stop.is_set():
                break
            wait = t_ms - self.now_ms()
            if wait > 0:
                time.sleep(wait / 1000.0)
            self.right_queue.put(sample)
        self.right_queue.put(_STOP)

    # ------------------------------------------------------------ workers

    def _left_worker(self) -> None:
        while not self._stop.is_set():
            try:
                item = self.left_queue.get(timeout=0.05)
            except queue.Empty:
                continue
            if item is _STOP:
                self.core.on_left_disconnect(self.now_ms())
                break
            if isinstance(item, LeftLine):
                self.core.on_left_line(self.now_ms(), item)
            elif isinstance(item, tuple):  # cockpit ctl messages for the base
                kind, args = item
                if kind == "ctl_tilt":
                    self.core.on_ctl_tilt(self.now_ms(), *args)
                elif kind == "ctl_flex":
                    self.core.on_ctl_flex(self.now_ms(), *args)

    def _right_worker(self) -> None:
        while not self._stop.is_set():
            try:
                item = self.right_queue.get(timeout=0.05)
            except queue.Empty:
                continue
            if item is _STOP:
                break
            if isinstance(item, RightLine):
                self.core.on_right_line(self.now_ms(), item)
            elif isinstance(item, ImuSample):
                self.core.on_right_sample(self.now_ms(), item)
            elif isinstance(item, tuple):  # cockpit ctl messages for the arm
                kind, args = item
                if kind == "ctl_gesture":
                    self.core.on_ctl_gesture(self.now_ms(), *args)

    def _ticker(self, duration_ms: Optional[float]) -> None:
        tick_s = self.core.config.tick_ms / 1000.0
        k = 1
        while not self._stop.is_set():
            target = self._t0 + k * tick_s
            now = time.perf_counter()
            if target > now:
                time.sleep(target - now)
            self.core.tick(k * self.core.config.tick_ms)
            k += 1
            if duration_ms is not None and k * self.core.config.tick_ms > duration_ms:
                break

    # -------------------------------------------------------------- public

    def start(
        self,
        left: Iterable[ReplayEvent] = (),
        right: Iterable[ReplayEvent] = (),
        right_samples: Iterable[tuple[float, ImuSample]] = (),
        duration_ms: Optional[float] = None,
    ) -> None:
        self._t0 = time.perf_counter()
        specs = [
            ("ticker", self._ticker, (duration_ms,)),
            ("left-worker", self._left_worker, ()),
            ("right-worker", self._right_worker, ()),
        ]
        if left:
            specs.append(("left-feeder", self._feed, (left, self.left_queue)))
        if right:
            specs.append(("right-feeder", self._feed, (right, self.right_queue)))
        if right_samples:
            specs.append(("right-sample-feeder", self._feed_samples, (right_samples,)))
        for name, fn, args in specs:
            th = threading.Thread(target=fn, args=args, name=f"teleglove-{name}", daemon=True)
            th.start()
            self._threads.append(th)

    def run(
        self,
        left: Iterable[ReplayEvent] = (),
        right: Iterable[ReplayEvent] = (),
        right_samples: Iterable[tuple[float, ImuSample]] = (),
        duration_ms: float = 1000.0,
    ) -> None:
        """Run for a fixed wall-clock duration and join all threads."""
        self.start(left, right, right_samples, duration_ms)
        deadline = time.perf_counter() + duration_ms / 1000.0 + 2.0
        ticker = self._threads[0]
        ticker.join(timeout=max(0.0, deadline - time.perf_counter()))
        self.stop()

    def stop(self) -> None:
        self._stop.set()
        for th in self._threads:
            th.join(timeout=1.0)
        self._threads.clear()
