"""The event loop core binding wearable streams to the simulators.

SessionCore is transport-free: callers push timestamped lines, raw samples,
or cockpit control messages, and drive the clock through tick(). The left
(base) and right (arm) paths keep separate locks so one path stalling never
blocks the other; replay drivers run it single-threaded on a simulated
clock, the live driver runs one thread per path.
"""

from __future__ import annotations

import math
import threading
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from ..arm_sim import ArmSimulator, NamedPose
from ..base_control import HALT, BaseController, Twist
from ..drive_sim import DriveSimulator
from ..errors import ArmBusyError
from ..imu import DEFAULT_HOP_MS, WINDOW_SAMPLES, ImuSample, ImuWindow, TiltPair
from ..nn.evaluate import AnyModel
from ..spectral import extract_features
from ..synth import GESTURE_LABELS, GestureClass, SynthSpec, synth_gesture
from .bus import BusMessage, LatencyRecord
from .protocol import LeftLine, ReplayEvent, RightLine

Subscriber = Callable[[BusMessage], None]


@dataclass(frozen=True)
class SessionConfig:
    tick_ms: float = 10.0
    broadcast_ms: float = 100.0  # 10 Hz cockpit refresh
    safe_stop_ms: float = 500.0
    hop_ms: float = DEFAULT_HOP_MS
    fs: float = 100.0

    def __post_init__(self) -> None:
        if self.tick_ms <= 0 or self.broadcast_ms < self.tick_ms:
            raise ValueError("need tick_ms > 0 and broadcast_ms >= tick_ms")


@dataclass
class GestureOutcome:
    label: GestureClass
    confidence: float
    dispatched: bool
    reason: str = ""
    plan_segments: tuple[str, ...] = ()


class SessionCore:
    """Owns one base controller + drive sim (left) and one arm sim (right)."""

    def __init__(
        self,
        config: SessionConfig | None = None,
        model: Optional[AnyModel] = None,
        poses: Optional[dict[str, NamedPose]] = None,
        controller: Optional[BaseController] = None,
        subscribers: Sequence[Subscriber] = (),
    ) -> None:
        self.config = config or SessionConfig()
        self.model = model
        self.controller = controller or BaseController()
        self.drive = DriveSimulator(dt=self.config.tick_ms / 1000.0)
        self.arm = ArmSimulator(poses, dt=self.config.tick_ms / 1000.0)
        self.log: list[BusMessage] = []
        self.subscribers = list(subscribers)
        self.right_hook: Optional[Callable[[], None]] = None  # test stall injection

        if self.model is not None:
            # prime numpy/BLAS paths so the first live inference is not slow
            self.model.forward(np.zeros(self.model.n_in))

        self._lock_left = threading.RLock()
        self._lock_right = threading.RLock()
        self._log_lock = threading.Lock()
        self._last_left_ms = -math.inf
        self._last_twist = HALT
        self._episode_label: Optional[GestureClass] = None
        self._window: deque[ImuSample] = deque(maxlen=WINDOW_SAMPLES)
        self._since_window = 0
        self._next_broadcast_ms = 0.0
        self.now_ms = 0.0

    # ------------------------------------------------------------------ bus

    def emit(self, type_: str, t_ms: float, payload: dict) -> BusMessage:
        msg = BusMessage(type_, max(t_ms, 0.0), payload)
        with self._log_lock:
            self.log.append(msg)
        for sub in self.subscribers:
            sub(msg)
        return msg

    # ------------------------------------------------------------ left path

    def on_left_line(self, t_ms: float, line: LeftLine) -> Twist:
        with self._lock_left:
            twist = self.controller.feed_acc(line.acc, t_ms)
            events = self.controller.feed_flex(line.flex[0], line.flex[1], t_ms)
            self._apply_twist(twist, t_ms)
            for _ in events:
                self._emit_caps(t_ms)
            return twist

    def on_ctl_tilt(self, t_ms: float, theta: float, phi: float) -> Twist:
        with self._lock_left:
            twist = self.controller.feed_tilt(TiltPair(theta, phi))
            self._apply_twist(twist, t_ms)
            return twist

    def on_ctl_flex(self, t_ms: float, finger: str) -> None:
        with self._lock_left:
            self.controller.bend(finger, t_ms)
            self._emit_caps(t_ms)

    def on_left_disconnect(self, t_ms: float) -> None:
        """Immediate safe stop when the left source drops."""
        with self._lock_left:
            self._apply_twist(HALT, t_ms, safe_stop=True)

    def _apply_twist(self, twist: Twist, t_ms: float, safe_stop: bool = False) -> None:
        self.drive.apply_command(twist, t_ms)
        self._last_left_ms = t_ms if not safe_stop else self._last_left_ms
        self._last_twist = twist
        payload = {"v": twist.linear_x, "w": twist.angular_z}
        if safe_stop:
            payload["safe_stop"] = True
        self.emit("twist", t_ms, payload)

    def _emit_caps(self, t_ms: float) -> None:
        caps = self.controller.caps
        self.emit("caps", t_ms, {"v_max": caps.v_max, "w_max": caps.w_max})

    # ----------------------------------------------------------- right path

    def on_right_line(self, t_ms: float, line: RightLine) -> GestureOutcome:
        with self._lock_right:
            if self.right_hook is not None:
                self.right_hook()
            return self._handle_gesture(line.label, line.confidence, t_ms, classify_ms=0.0,
                                        receipt_pc=time.perf_counter())

    def on_right_sample(self, t_ms: float, sample: ImuSample) -> Optional[GestureOutcome]:
        """Raw-mode ingest: window, featurize, classify, then dispatch."""
        with self._lock_right:
            self._window.append(sample)
            self._since_window += 1
            hop_n = round(self.config.hop_ms * self.config.fs / 1000.0)
            if len(self._window) < WINDOW_SAMPLES or self._since_window < hop_n:
                return None
            self._since_window = 0
            if self.right_hook is not None:
                self.right_hook()
            receipt = time.perf_counter()
            if self.model is None:
                return None
            window = ImuWindow(tuple(self._window), fs=self.config.fs)
            features = extract_features(window)
            # classify stage is the network forward alone; featurization time
            # still lands in the total
            t0 = time.perf_counter()
            probs = self.model.forward(features)
            classify_ms = (time.perf_counter() - t0) * 1000.0
            label = GestureClass(int(probs.argmax()))
            conf = float(probs.max())
            return self._handle_gesture(label, conf, t_ms, classify_ms, receipt)

    def on_ctl_gesture(self, t_ms: float, label: GestureClass) -> GestureOutcome:
        """Cockpit gesture request: synthesize the motion server-side and keep
        the classifier in the loop when a model is loaded."""
        with self._lock_right:
            if self.model is not None:
                receipt = time.perf_counter()
                spec = SynthSpec(gesture=GestureClass(label), seed=int(t_ms) & 0x7FFFFFFF)
                window = ImuWindow(tuple(synth_gesture(spec)), fs=spec.fs)
                features = extract_features(window)
                t0 = time.perf_counter()
                probs = self.model.forward(features)
                classify_ms = (time.perf_counter() - t0) * 1000.0
                pred = GestureClass(int(probs.argmax()))
                return self._handle_gesture(pred, float(probs.max()), t_ms, classify_ms, receipt)
            return self._handle_gesture(GestureClass(label), 0.99, t_ms, 0.0, time.perf_counter())

    def _handle_gesture(
        self,
        label: GestureClass,
        confidence: float,
        t_ms: float,
        classify_ms: float,
        receipt_pc: float,
    ) -> GestureOutcome:
        if label is GestureClass.IDLE:
            self._episode_label = None
            outcome = GestureOutcome(label, confidence, False, reason="idle")
        elif label == self._episode_label:
            # one plan per gesture episode: repeats need an intervening idle
            # or a different label
            outcome = GestureOutcome(label, confidence, False, reason="episode")
        else:
            t0 = time.perf_counter()
            try:
                plan = self.arm.command(label, confidence)
            except ArmBusyError:
                plan = None
                outcome = GestureOutcome(label, confidence, False, reason="busy")
            else:
                if plan is None:
                    outcome = GestureOutcome(label, confidence, False, reason="low_confidence")
                else:
                    dispatch_ms = (time.perf_counter() - t0) * 1000.0
                    total_ms = (time.perf_counter() - receipt_pc) * 1000.0
                    self._episode_label = label
                    outcome = GestureOutcome(
                        label, confidence, True, plan_segments=tuple(s.name for s in plan.segments)
                    )
                    rec = LatencyRecord(classify_ms, dispatch_ms, max(total_ms, classify_ms))
                    self.emit("latency", t_ms, rec.as_payload())

        self.emit(
            "gesture",
            t_ms,
            {
                "label": GESTURE_LABELS[label],
                "confidence": round(confidence, 4),
                "dispatched": outcome.dispatched,
                "reason": outcome.reason,
                "plan": list(outcome.plan_segments),
            },
        )
        return outcome

    # ----------------------------------------------------------------- time

    def tick(self, t_ms: float) -> None:
        """Advance both simulators one step and broadcast on the decimated clock."""
        with self._lock_left:
            if (
                t_ms - self._last_left_ms > self.config.safe_stop_ms
                and self._last_twist != HALT
            ):
                self._apply_twist(HALT, t_ms, safe_stop=True)
            self.drive.tick()
        with self._lock_right:
            self.arm.tick()
        self.now_ms = t_ms
        if t_ms >= self._next_broadcast_ms:
            self._broadcast(t_ms)
            self._next_broadcast_ms = t_ms + self.config.broadcast_ms

    def _broadcast(self, t_ms: float) -> None:
        pose = self.drive.pose
        cmd = self.drive.active_command
        self.emit(
            "pose",
            t_ms,
            {"x": pose.x, "y": pose.y, "heading": pose.heading, "v": cmd.linear_x, "w": cmd.angular_z},
        )
        state = self.arm.state
        active = self.arm.current_segment
        self.emit(
            "joints",
            t_ms,
            {
                "q": [round(float(q), 6) for q in state.current],
                "at_pose": state.at_pose,
                "busy": state.busy,
                "segment": active,
            },
        )
        self._emit_caps(t_ms)

    # --------------------------------------------------------------- replay

    def run_replay(
        self,
        left: Iterable[ReplayEvent] = (),
        right: Iterable[ReplayEvent] = (),
        right_samples: Iterable[tuple[float, ImuSample]] = (),
        duration_ms: Optional[float] = None,
    ) -> list[BusMessage]:
        """Deterministic simulated-time run merging all scheduled inputs."""
        events: list[tuple[float, int, object]] = []
        for ev in left:
            events.append((ev.t_ms, 0, ev.line))
        for ev in right:
            events.append((ev.t_ms, 1, ev.line))
        for t_ms, sample in right_samples:
            events.append((t_ms, 2, sample))
        events.sort(key=lambda e: (e[0], e[1]))

        end_ms = duration_ms if duration_ms is not None else (events[-1][0] + 1000.0 if events else 0.0)
        tick = self.config.tick_ms
        n_ticks = int(round(end_ms / tick))
        i = 0
        for k in range(1, n_ticks + 1):
            t_now = k * tick
            while i < len(events) and events[i][0] <= t_now - tick + 1e-9:
                t_ev, kind, item = events[i]
                if kind == 0:
                    self.on_left_line(t_ev, item)
                elif kind == 1:
                    self.on_right_line(t_ev, item)
                else:
                    self.on_right_sample(t_ev, item)
                i += 1
            self.tick(t_now)
        return self.log
