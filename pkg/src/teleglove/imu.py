"""Raw IMU sample types, low-pass filtering, tilt angles, and windowing.

Conventions: accelerometer in g, gyroscope in deg/s, magnetometer in uT,
timestamps in milliseconds since stream start. Tilt angles are kept in
degrees throughout the control path because every control threshold
(dead zone, command threshold) is specified in degrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import FilterError, UndefinedOrientationError, WindowingError

FS_HZ = 100.0
WINDOW_MS = 2000.0
WINDOW_SAMPLES = 200
DEFAULT_ALPHA = 0.2
DEFAULT_HOP_MS = 250.0

Vec3 = tuple[float, float, float]


@dataclass(frozen=True)
class ImuSample:
    """One timestamped 9-axis reading: acc (g), gyr (deg/s), mag (uT)."""

    t: float
    acc: Vec3
    gyr: Vec3
    mag: Vec3

    def __post_init__(self) -> None:
        for name, vec in (("acc", self.acc), ("gyr", self.gyr), ("mag", self.mag)):
            if len(vec) != 3 or not all(math.isfinite(c) for c in vec):
                raise ValueError(f"{name} must be a finite 3-vector, got {vec!r}")
        if not math.isfinite(self.t):
            raise ValueError(f"t must be finite, got {self.t!r}")

    def as_row(self) -> np.ndarray:
        """The 9 axis values in canonical order accX..magZ."""
        return np.array(self.acc + self.gyr + self.mag, dtype=np.float64)


@dataclass(frozen=True)
class TiltPair:
    """Pitch/roll of the hand in degrees, derived from gravity direction."""

    theta: float
    phi: float


@dataclass(frozen=True)
class ImuWindow:
    """A fixed-length run of equally spaced samples, optionally labeled.

    Invariant: exactly fs * T samples (200 at 100 Hz / 2000 ms), consecutive
    timestamps equally spaced within one sample period.
    """

    samples: tuple[ImuSample, ...]
    fs: float = FS_HZ
    label: Optional[int] = None

    def __post_init__(self) -> None:
        n_expected = WINDOW_SAMPLES if self.fs == FS_HZ else round(self.fs * WINDOW_MS / 1000.0)
        if len(self.samples) != n_expected:
            raise WindowingError(
                f"window must hold exactly {n_expected} samples, got {len(self.samples)}"
            )
        period = 1000.0 / self.fs
        ts = [s.t for s in self.samples]
        for a, b in zip(ts, ts[1:]):
            if b <= a:
                raise WindowingError("sample timestamps must be strictly increasing")
            if abs((b - a) - period) > period:
                raise WindowingError(
                    f"samples not equally spaced: dt={b - a:.3f} ms vs period {period:.3f} ms"
                )

    def axes(self) -> np.ndarray:
        """Window data as an (n_samples, 9) array, axis-major columns accX..magZ."""
        return np.stack([s.as_row() for s in self.samples])


def low_pass(prev: Sequence[float], raw: Sequence[float], alpha: float = DEFAULT_ALPHA) -> Vec3:
    """First-order exponential moving average: alpha*raw + (1-alpha)*prev.

    Stands in for the hardware RC filter on the accelerometer; alpha=1 is a
    passthrough. Rejects non-finite inputs.
    """
    if not 0.0 < alpha <= 1.0:
        raise FilterError(f"alpha must be in (0, 1], got {alpha!r}")
    if len(prev) != 3 or len(raw) != 3:
        raise FilterError("low_pass expects 3-vectors")
    if not all(math.isfinite(c) for c in (*prev, *raw)):
        raise FilterError(f"non-finite input: prev={prev!r} raw={raw!r}")
    return (
        alpha * raw[0] + (1.0 - alpha) * prev[0],
        alpha * raw[1] + (1.0 - alpha) * prev[1],
        alpha * raw[2] + (1.0 - alpha) * prev[2],
    )


class LowPassFilter:
    """Stateful per-axis EMA over 3-vectors; the first update seeds the state."""

    def __init__(self, alpha: float = DEFAULT_ALPHA) -> None:
        if not 0.0 < alpha <= 1.0:
            raise FilterError(f"alpha must be in (0, 1], got {alpha!r}")
        self.alpha = alpha
        self._state: Optional[Vec3] = None

    def update(self, raw: Sequence[float]) -> Vec3:
        if self._state is None:
            if len(raw) != 3 or not all(math.isfinite(c) for c in raw):
                raise FilterError(f"non-finite or malformed seed: {raw!r}")
            self._state = (float(raw[0]), float(raw[1]), float(raw[2]))
        else:
            self._state = low_pass(self._state, raw, self.alpha)
        return self._state

    def reset(self) -> None:
        self._state = None


def tilt_angles(acc: Sequence[float]) -> TiltPair:
    """Pitch/roll in degrees from a gravity-dominated accelerometer vector.

    theta = atan(a_x / sqrt(a_y^2 + a_z^2)), phi = atan(a_y / sqrt(a_x^2 + a_z^2)).
    Scale-invariant. An all-zero vector means sensor dropout, not a flat hand,
    and is rejected explicitly.
    """
    ax, ay, az = acc
    if ax == 0.0 and ay == 0.0 and az == 0.0:
        raise UndefinedOrientationError("zero acceleration vector has no orientation")
    theta = math.degrees(math.atan2(ax, math.hypot(ay, az)))
    phi = math.degrees(math.atan2(ay, math.hypot(ax, az)))
    return TiltPair(theta, phi)


def gate_dead_zone(tilt: TiltPair, dz: float = 5.0) -> Optional[TiltPair]:
    """Return None when both |theta| and |phi| fall inside the dead zone."""
    if dz < 0.0:
        raise ValueError(f"dead zone must be non-negative, got {dz!r}")
    if abs(tilt.theta) < dz and abs(tilt.phi) < dz:
        return None
    return tilt


def window_stream(
    stream: Iterable[ImuSample],
    fs: float = FS_HZ,
    window_ms: float = WINDOW_MS,
    hop_ms: float = DEFAULT_HOP_MS,
    label: Optional[int] = None,
) -> Iterator[ImuWindow]:
    """Slice a sorted sample stream into fixed windows advancing by hop_ms.

    Emits windows of exactly fs*window_ms/1000 samples; the partial tail is
    discarded. Fewer samples than one window yields nothing. The hop must be
    a whole number of sample periods.
    """
    period = 1000.0 / fs
    n = round(fs * window_ms / 1000.0)
    hop = hop_ms / period
    if abs(hop - round(hop)) > 1e-9 or round(hop) < 1:
        raise WindowingError(f"hop {hop_ms} ms is not a whole number of {period} ms periods")
    hop_n = round(hop)

    buf: list[ImuSample] = []
    skip = 0
    last_t: Optional[float] = None
    for s in stream:
        if last_t is not None and s.t <= last_t:
            raise WindowingError(f"stream not sorted: t={s.t} after t={last_t}")
        last_t = s.t
        if skip:
            skip -= 1
            continue
        buf.append(s)
        if len(buf) == n:
            yield ImuWindow(tuple(buf), fs=fs, label=label)
            buf = buf[hop_n:]
            skip = max(0, hop_n - n)
