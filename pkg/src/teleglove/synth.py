"""Parametric generators for the seven gesture classes and a dataset builder.

Waveform families are chosen to be spectrally distinguishable inside the
0-43.75 Hz band the feature pipeline sees: pure / quadrature sinusoids for
the oscillatory gestures and piecewise-constant cycles for the rectangles.
All classes carry the +1 g gravity bias on accZ so tilt logic and gesture
logic share realistic data. Generation is deterministic for a given seed.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import GenerationError
from .imu import DEFAULT_HOP_MS, FS_HZ, WINDOW_MS, ImuSample, ImuWindow, window_stream
from .spectral import extract_features_batch


class GestureClass(enum.IntEnum):
    IDLE = 0
    UP_DOWN = 1
    TO_FRO = 2
    LEFT_RIGHT = 3
    RECTANGLE = 4
    RECTANGLE_FLAT = 5
    CIRCLE = 6


GESTURE_LABELS = (
    "idle",
    "up-down",
    "to-fro",
    "left-right",
    "rectangle",
    "rectangle-flat",
    "circle",
)

LABEL_TO_CLASS = {name: GestureClass(i) for i, name in enumerate(GESTURE_LABELS)}

DEFAULT_AMPLITUDE_G = 1.5
DEFAULT_FREQ_HZ = 2.0
DEFAULT_NOISE_SIGMA_G = 0.15
DEFAULT_PER_CLASS_MS = 300_000.0  # 150 windows per class

GYR_GAIN = 2.0  # deg/s of gyro swing per g of gesture amplitude
GYR_NOISE_GAIN = 4.0
MAG_BASE_UT = (5.0, -3.0, 8.0)
MAG_WOBBLE_GAIN = 2.0  # uT per g of (gravity-free) acceleration pattern
MAG_NOISE_GAIN = 5.0

CSV_HEADER = ["t_ms", "accX", "accY", "accZ", "gyrX", "gyrY", "gyrZ", "magX", "magY", "magZ", "label"]


@dataclass(frozen=True)
class SynthSpec:
    gesture: GestureClass
    duration_ms: float = WINDOW_MS
    fs: float = FS_HZ
    amplitude: float = DEFAULT_AMPLITUDE_G
    freq: float = DEFAULT_FREQ_HZ
    noise_sigma: float = DEFAULT_NOISE_SIGMA_G
    seed: int = 0

    def __post_init__(self) -> None:
        if self.fs <= 0:
            raise GenerationError(f"fs must be positive, got {self.fs}")
        if self.duration_ms < WINDOW_MS:
            raise GenerationError(f"duration must be >= {WINDOW_MS} ms, got {self.duration_ms}")
        if self.noise_sigma < 0:
            raise GenerationError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        if self.amplitude <= 0 or self.freq <= 0:
            raise GenerationError("amplitude and freq must be positive")


def _patterns(spec: SynthSpec, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Noise-free acceleration (gravity excluded) and gyro patterns."""
    n = t.size
    acc = np.zeros((n, 3))
    gyr = np.zeros((n, 3))
    a, f = spec.amplitude, spec.freq
    ag = a * GYR_GAIN
    sin = np.sin(2 * np.pi * f * t)
    cos = np.cos(2 * np.pi * f * t)

    g = spec.gesture
    if g is GestureClass.IDLE:
        pass
    elif g is GestureClass.UP_DOWN:
        acc[:, 2] = a * sin
        gyr[:, 0] = ag * cos
    elif g is GestureClass.TO_FRO:
        acc[:, 0] = a * sin
        gyr[:, 1] = ag * cos
    elif g is GestureClass.LEFT_RIGHT:
        acc[:, 1] = a * sin
        gyr[:, 2] = ag * cos
    elif g is GestureClass.CIRCLE:
        # accX leads accY by a quarter period (90 degrees)
        acc[:, 0] = a * sin
        acc[:, 1] = -a * cos
        gyr[:, 0] = ag * cos
        gyr[:, 1] = ag * sin
    elif g in (GestureClass.RECTANGLE, GestureClass.RECTANGLE_FLAT):
        # piecewise-constant +/-amplitude quarters cycling first axis then second
        phase = np.mod(t * f, 1.0)
        first = np.where(phase < 0.25, a, 0.0) + np.where((0.5 <= phase) & (phase < 0.75), -a, 0.0)
        second = np.where((0.25 <= phase) & (phase < 0.5), a, 0.0) + np.where(phase >= 0.75, -a, 0.0)
        other_axis = 1 if g is GestureClass.RECTANGLE else 2
        acc[:, 0] = first
        acc[:, other_axis] += second
        sign = np.where(np.abs(first) > 0, np.sign(first), -np.sign(second))
        gyr_axis = 2 if g is GestureClass.RECTANGLE else 1
        gyr[:, gyr_axis] = ag * sign
    else:  # pragma: no cover - enum is closed
        raise GenerationError(f"unknown gesture {g!r}")
    return acc, gyr


def synth_gesture(spec: SynthSpec, t0_ms: float = 0.0) -> list[ImuSample]:
    """Generate one deterministic 9-axis stream for a gesture spec.

    Timestamps start at ``t0_ms`` and advance by the sample period.
    """
    n = round(spec.duration_ms * spec.fs / 1000.0)
    t = np.arange(n) / spec.fs
    rng = np.random.default_rng(spec.seed)

    acc_pat, gyr_pat = _patterns(spec, t)
    acc = acc_pat + rng.normal(0.0, spec.noise_sigma, size=(n, 3))
    acc[:, 2] += 1.0  # gravity bias
    gyr = gyr_pat + rng.normal(0.0, GYR_NOISE_GAIN * spec.noise_sigma, size=(n, 3))
    mag = (
        np.asarray(MAG_BASE_UT)
        + MAG_WOBBLE_GAIN * acc_pat
        + rng.normal(0.0, MAG_NOISE_GAIN * spec.noise_sigma, size=(n, 3))
    )

    period_ms = 1000.0 / spec.fs
    acc_l, gyr_l, mag_l = acc.tolist(), gyr.tolist(), mag.tolist()
    return [
        ImuSample(
            t=t0_ms + i * period_ms,
            acc=tuple(acc_l[i]),
            gyr=tuple(gyr_l[i]),
            mag=tuple(mag_l[i]),
        )
        for i in range(n)
    ]


@dataclass(frozen=True)
class GestureRecording:
    """One continuous labeled stream, like a recorded session for one class."""

    label: int
    samples: tuple[ImuSample, ...]


def synth_recording(
    gesture: GestureClass,
    duration_ms: float,
    fs: float = FS_HZ,
    noise_sigma: float = DEFAULT_NOISE_SIGMA_G,
    seed: int = 0,
    amplitude: float = DEFAULT_AMPLITUDE_G,
    freq: float = DEFAULT_FREQ_HZ,
    t0_ms: float = 0.0,
) -> GestureRecording:
    """A continuous performance of one gesture class.

    The stream is built from consecutive 2 s segments, each with independent
    +/-20% amplitude and frequency jitter, imitating a human varying pace and
    effort over a long recording.
    """
    if duration_ms < WINDOW_MS:
        raise GenerationError(f"duration must be >= {WINDOW_MS} ms, got {duration_ms}")
    rng = np.random.default_rng(seed)
    samples: list[ImuSample] = []
    t = t0_ms
    remaining = duration_ms
    while remaining >= 1:
        seg_ms = min(WINDOW_MS, remaining)
        spec = SynthSpec(
            gesture=gesture,
            duration_ms=WINDOW_MS,
            fs=fs,
            amplitude=amplitude * (1.0 + rng.uniform(-0.2, 0.2)),
            freq=freq * (1.0 + rng.uniform(-0.2, 0.2)),
            noise_sigma=noise_sigma,
            seed=int(rng.integers(0, 2**31 - 1)),
        )
        seg = synth_gesture(spec, t0_ms=t)
        keep = round(seg_ms * fs / 1000.0)
        samples.extend(seg[:keep])
        if keep:
            t = samples[-1].t + 1000.0 / fs
        remaining -= seg_ms
    return GestureRecording(label=int(gesture), samples=tuple(samples))


def windows_from_recordings(
    recordings: Iterable[GestureRecording], hop_ms: float = DEFAULT_HOP_MS
) -> list[ImuWindow]:
    """Slice labeled recordings into windows with the given hop."""
    windows: list[ImuWindow] = []
    for rec in recordings:
        windows.extend(
            window_stream(rec.samples, hop_ms=hop_ms, label=rec.label)
        )
    return windows


def build_dataset(
    per_class_ms: float = DEFAULT_PER_CLASS_MS,
    fs: float = FS_HZ,
    noise_sigma: float = DEFAULT_NOISE_SIGMA_G,
    seed: int = 0,
    amplitude: float = DEFAULT_AMPLITUDE_G,
    freq: float = DEFAULT_FREQ_HZ,
    hop_ms: float = DEFAULT_HOP_MS,
) -> list[ImuWindow]:
    """Balanced labeled windows for all seven classes.

    One continuous recording per class is synthesized and sliced with the
    given hop (each 2 s stretch carries independent +/-20% amplitude and
    frequency jitter). Class counts are exactly balanced. Deterministic for
    a given seed.
    """
    recordings = synth_recordings(
        per_class_ms, fs=fs, noise_sigma=noise_sigma, seed=seed, amplitude=amplitude, freq=freq
    )
    windows = windows_from_recordings(recordings, hop_ms=hop_ms)
    per_class = len(windows) // len(GestureClass)
    if per_class < 2:
        raise GenerationError(
            f"per-class duration too short: {per_class_ms} ms yields {per_class} window(s), need >= 2"
        )
    return windows


def synth_recordings(
    per_class_ms: float = DEFAULT_PER_CLASS_MS,
    fs: float = FS_HZ,
    noise_sigma: float = DEFAULT_NOISE_SIGMA_G,
    seed: int = 0,
    amplitude: float = DEFAULT_AMPLITUDE_G,
    freq: float = DEFAULT_FREQ_HZ,
) -> list[GestureRecording]:
    """One recording per gesture class on a shared continuous clock."""
    if per_class_ms < 2 * WINDOW_MS:
        raise GenerationError(
            f"per-class duration too short: {per_class_ms} ms, need >= {2 * WINDOW_MS}"
        )
    rng = np.random.default_rng(seed)
    recordings = []
    t0 = 0.0
    for gesture in GestureClass:
        rec = synth_recording(
            gesture,
            per_class_ms,
            fs=fs,
            noise_sigma=noise_sigma,
            seed=int(rng.integers(0, 2**31 - 1)),
            amplitude=amplitude,
            freq=freq,
            t0_ms=t0,
        )
        recordings.append(rec)
        t0 = rec.samples[-1].t + 1000.0 / fs
    return recordings


def features_and_labels(windows: Sequence[ImuWindow]) -> tuple[np.ndarray, np.ndarray]:
    """Stack windows into (n, 117) features and an int label vector."""
    if not windows:
        raise ValueError("no windows given")
    data = np.stack([w.axes() for w in windows])
    X = extract_features_batch(data, fs=windows[0].fs)
    y = np.array([-1 if w.label is None else int(w.label) for w in windows], dtype=np.int64)
    return X, y


def save_dataset_csv(recordings: Iterable[GestureRecording], path: str | Path) -> int:
    """Write labeled recordings as sample rows; returns the row count.

    The same format holds real recorded data: one row per sample, a label
    column, consecutive rows of one label forming a continuous stream.
    """
    rows = 0
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for rec in recordings:
            label = GESTURE_LABELS[rec.label]
            for s in rec.samples:
                writer.writerow(
                    [f"{s.t:.1f}"]
                    + [f"{v:.6f}" for v in (*s.acc, *s.gyr, *s.mag)]
                    + [label]
                )
                rows += 1
    return rows


def load_dataset_csv(path: str | Path) -> list[GestureRecording]:
    """Read labeled recordings back from the dataset CSV format."""
    recordings: list[GestureRecording] = []
    buf: list[ImuSample] = []
    current: str | None = None

    def flush() -> None:
        nonlocal buf
        if buf and current is not None:
            recordings.append(GestureRecording(label=int(LABEL_TO_CLASS[current]), samples=tuple(buf)))
        buf = []

    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise ValueError(f"unexpected dataset header: {header!r}")
        for row in reader:
            if len(row) != len(CSV_HEADER):
                raise ValueError(f"bad dataset row: {row!r}")
            label = row[10]
            if label not in LABEL_TO_CLASS:
                raise ValueError(f"unknown gesture label {label!r}")
            if label != current:
                flush()
                current = label
            vals = [float(v) for v in row[:10]]
            buf.append(
                ImuSample(t=vals[0], acc=tuple(vals[1:4]), gyr=tuple(vals[4:7]), mag=tuple(vals[7:10]))
            )
    flush()
    return recordings


def load_windows_csv(path: str | Path, hop_ms: float = DEFAULT_HOP_MS) -> list[ImuWindow]:
    """Load a dataset CSV and slice it into labeled windows."""
    return windows_from_recordings(load_dataset_csv(path), hop_ms=hop_ms)
