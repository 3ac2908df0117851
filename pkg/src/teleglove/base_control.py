"""Left-hand control law: tilt to twist commands, flex bends to speed caps.

Tilt maps to bang-bang twists at the current cap values with pitch taking
priority over roll (the motion table defines no combined rows, so a total
order is required). Flex bends scale both caps by +/-10% per event, clipped
to preset bounds. All angles are degrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .errors import CalibrationError
from .imu import DEFAULT_ALPHA, LowPassFilter, TiltPair, gate_dead_zone, tilt_angles

DEFAULT_THRESH_DEG = 15.0
DEFAULT_DEAD_ZONE_DEG = 5.0
GAMMA_INDEX = 1.10
GAMMA_MIDDLE = 0.90
DEFAULT_FLEX_THRESHOLD = 600
DEFAULT_HYSTERESIS = 50
DEFAULT_DEBOUNCE_MS = 300.0


@dataclass(frozen=True)
class Twist:
    """Base velocity command: forward speed (m/s) and yaw rate (rad/s)."""

    linear_x: float = 0.0
    angular_z: float = 0.0


HALT = Twist(0.0, 0.0)


@dataclass(frozen=True)
class SpeedCaps:
    """Mutable-by-replacement maximum speeds with their clip bounds."""

    v_max: float = 0.50
    w_max: float = 0.50
    v_bounds: tuple[float, float] = (0.10, 1.00)
    w_bounds: tuple[float, float] = (0.10, 1.00)

    def __post_init__(self) -> None:
        v_lo, v_hi = self.v_bounds
        w_lo, w_hi = self.w_bounds
        if not v_lo <= self.v_max <= v_hi:
            raise ValueError(f"v_max {self.v_max} outside bounds {self.v_bounds}")
        if not w_lo <= self.w_max <= w_hi:
            raise ValueError(f"w_max {self.w_max} outside bounds {self.w_bounds}")


@dataclass(frozen=True)
class FlexEvent:
    """One debounced bend of a finger."""

    finger: str  # "index" | "middle"
    t: float  # ms

    def __post_init__(self) -> None:
        if self.finger not in ("index", "middle"):
            raise ValueError(f"unknown finger {self.finger!r}")


@dataclass(frozen=True)
class NeutralCalibration:
    theta_offset: float = 0.0
    phi_offset: float = 0.0

    def __post_init__(self) -> None:
        if abs(self.theta_offset) >= 45.0 or abs(self.phi_offset) >= 45.0:
            raise CalibrationError(
                f"offsets ({self.theta_offset}, {self.phi_offset}) exceed the 45 degree sanity bound"
            )

    def apply(self, tilt: TiltPair) -> TiltPair:
        return TiltPair(tilt.theta - self.theta_offset, tilt.phi - self.phi_offset)


def tilt_to_twist(
    tilt: TiltPair,
    caps: SpeedCaps,
    thresh: float = DEFAULT_THRESH_DEG,
    dz: float = DEFAULT_DEAD_ZONE_DEG,
) -> Twist:
    """Discrete twist from tilt: pitch over roll, halt inside the dead zone.

    theta > thresh drives forward, theta < -thresh backward; otherwise
    phi > thresh turns CCW, phi < -thresh CW. Everything else halts, so the
    emitted twist is always axis-exclusive at exactly the cap magnitude.
    """
    if not thresh > dz >= 0:
        raise ValueError(f"need thresh > dz >= 0, got thresh={thresh} dz={dz}")
    if gate_dead_zone(tilt, dz) is None:
        return HALT
    if tilt.theta > thresh:
        return Twist(caps.v_max, 0.0)
    if tilt.theta < -thresh:
        return Twist(-caps.v_max, 0.0)
    if tilt.phi > thresh:
        return Twist(0.0, caps.w_max)
    if tilt.phi < -thresh:
        return Twist(0.0, -caps.w_max)
    return HALT


def flex_update_caps(caps: SpeedCaps, ev: FlexEvent) -> SpeedCaps:
    """Scale both caps by 1.10 (index) or 0.90 (middle), then clip to bounds."""
    gamma = GAMMA_INDEX if ev.finger == "index" else GAMMA_MIDDLE
    v_lo, v_hi = caps.v_bounds
    w_lo, w_hi = caps.w_bounds
    return replace(
        caps,
        v_max=min(max(caps.v_max * gamma, v_lo), v_hi),
        w_max=min(max(caps.w_max * gamma, w_lo), w_hi),
    )


class FlexDetector:
    """Schmitt-trigger bend detector with debounce for one finger.

    Emits one event on a rising edge through the threshold; re-arms only
    after the reading falls below threshold - hysteresis AND the debounce
    interval has elapsed since the last event.
    """

    def __init__(
        self,
        finger: str,
        threshold: int = DEFAULT_FLEX_THRESHOLD,
        hysteresis: int = DEFAULT_HYSTERESIS,
        debounce_ms: float = DEFAULT_DEBOUNCE_MS,
    ) -> None:
        if not 0 <= threshold <= 1023:
            raise ValueError(f"threshold must be within 0..1023, got {threshold}")
        self.finger = finger
        self.threshold = threshold
        self.hysteresis = hysteresis
        self.debounce_ms = debounce_ms
        self._armed = True
        self._released = True
        self._last_event_t = -math.inf

    def update(self, raw: float, t: float) -> Optional[FlexEvent]:
        if not self._armed:
            # release is latched so a brief dip below the hysteresis band
            # still counts once the debounce interval has passed
            if raw < self.threshold - self.hysteresis:
                self._released = True
            if self._released and t - self._last_event_t >= self.debounce_ms:
                self._armed = True
        if self._armed and raw >= self.threshold:
            self._armed = False
            self._released = False
            self._last_event_t = t
            return FlexEvent(self.finger, t)
        return None

    def reset(self) -> None:
        self._armed = True
        self._released = True
        self._last_event_t = -math.inf


def calibrate_neutral(samples: Sequence[TiltPair]) -> NeutralCalibration:
    """Record the neutral hand position as the mean tilt over rest samples.

    Requires at least 100 samples; a spread above 10 degrees std on either
    axis means the hand was not at rest and calibration is rejected.
    """
    if len(samples) < 100:
        raise CalibrationError(f"need >= 100 rest samples, got {len(samples)}")
    thetas = [s.theta for s in samples]
    phis = [s.phi for s in samples]
    n = len(samples)
    mean_t = sum(thetas) / n
    mean_p = sum(phis) / n
    std_t = math.sqrt(sum((v - mean_t) ** 2 for v in thetas) / n)
    std_p = math.sqrt(sum((v - mean_p) ** 2 for v in phis) / n)
    if std_t > 10.0 or std_p > 10.0:
        raise CalibrationError(
            f"calibration unstable: tilt std ({std_t:.2f}, {std_p:.2f}) exceeds 10 degrees"
        )
    return NeutralCalibration(mean_t, mean_p)


class BaseController:
    """Stateful left-hand pipeline: filter, tilt, calibration, caps, flex.

    Single-owner state machine; feed readings from one thread at a time.
    Emitted values (Twist, SpeedCaps, FlexEvent) are immutable snapshots.
    """

    def __init__(
        self,
        caps: SpeedCaps | None = None,
        thresh: float = DEFAULT_THRESH_DEG,
        dz: float = DEFAULT_DEAD_ZONE_DEG,
        alpha: float = DEFAULT_ALPHA,
        flex_threshold: int = DEFAULT_FLEX_THRESHOLD,
        hysteresis: int = DEFAULT_HYSTERESIS,
        debounce_ms: float = DEFAULT_DEBOUNCE_MS,
        calibration: NeutralCalibration | None = None,
    ) -> None:
        self.caps = caps or SpeedCaps()
        self.thresh = thresh
        self.dz = dz
        self.calibration = calibration or NeutralCalibration()
        self._filter = LowPassFilter(alpha)
        self._index = FlexDetector("index", flex_threshold, hysteresis, debounce_ms)
        self._middle = FlexDetector("middle", flex_threshold, hysteresis, debounce_ms)

    def calibrate(self, samples: Sequence[TiltPair]) -> NeutralCalibration:
        self.calibration = calibrate_neutral(samples)
        return self.calibration

    def feed_acc(self, acc: Sequence[float], t: float) -> Twist:
        """Filtered accel reading to twist; dead zone and caps applied."""
        filtered = self._filter.update(acc)
        tilt = self.calibration.apply(tilt_angles(filtered))
        return tilt_to_twist(tilt, self.caps, self.thresh, self.dz)

    def feed_tilt(self, tilt: TiltPair) -> Twist:
        """Direct tilt injection (cockpit pad); calibration already applied."""
        return tilt_to_twist(tilt, self.caps, self.thresh, self.dz)

    def feed_flex(self, index_raw: float, middle_raw: float, t: float) -> list[FlexEvent]:
        events = []
        for det, raw in ((self._index, index_raw), (self._middle, middle_raw)):
            ev = det.update(raw, t)
            if ev is not None:
                events.append(ev)
                self.caps = flex_update_caps(self.caps, ev)
        return events

    def bend(self, finger: str, t: float) -> FlexEvent:
        """Inject one discrete bend event (cockpit button), bypassing detection."""
        ev = FlexEvent(finger, t)
        self.caps = flex_update_caps(self.caps, ev)
        return ev
