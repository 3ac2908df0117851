"""Newline-delimited serial protocol for the two wearables, plus replay files.

Left hand:  ``L,<ax>,<ay>,<az>,<f1>,<f2>``  (acc in g, flex raw 0..1023)
Right hand: ``R,<label>,<confidence>``      (gesture name, confidence 0..1)

Formatting is canonical (3 decimals); parsing is strict apart from trailing
whitespace. Replay files carry one event per line: ``<ms> <line>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from ..errors import ProtocolError
from ..synth import GESTURE_LABELS, LABEL_TO_CLASS, GestureClass

FLEX_MAX = 1023


@dataclass(frozen=True)
class LeftLine:
    acc: tuple[float, float, float]
    flex: tuple[int, int]


@dataclass(frozen=True)
class RightLine:
    label: GestureClass
    confidence: float


Line = Union[LeftLine, RightLine]


def _field_offsets(raw: str) -> list[int]:
    offsets, pos = [0], 0
    for i, ch in enumerate(raw):
        if ch == ",":
            offsets.append(i + 1)
    return offsets


def parse_line(raw: str) -> Line:
    """Parse one protocol line; raises ProtocolError naming offset or field."""
    line = raw.rstrip()
    if not line:
        raise ProtocolError("empty line (offset 0)")
    fields = line.split(",")
    offsets = _field_offsets(line)
    kind = fields[0]

    if kind == "L":
        if len(fields) != 6:
            raise ProtocolError(f"left line needs 6 fields, got {len(fields)} (offset 0)")
        acc = []
        for i in range(1, 4):
            try:
                v = float(fields[i])
            except ValueError:
                raise ProtocolError(f"bad acc value {fields[i]!r} (offset {offsets[i]})") from None
            if not math.isfinite(v):
                raise ProtocolError(f"field acc[{i - 1}] must be finite, got {fields[i]!r}")
            acc.append(v)
        flex = []
        for i in range(4, 6):
            try:
                v = int(fields[i])
            except ValueError:
                raise ProtocolError(f"bad flex value {fields[i]!r} (offset {offsets[i]})") from None
            if not 0 <= v <= FLEX_MAX:
                raise ProtocolError(f"field flex[{i - 4}] out of range 0..{FLEX_MAX}: {v}")
            flex.append(v)
        return LeftLine(acc=(acc[0], acc[1], acc[2]), flex=(flex[0], flex[1]))

    if kind == "R":
        if len(fields) != 3:
            raise ProtocolError(f"right line needs 3 fields, got {len(fields)} (offset 0)")
        label = fields[1]
        if label not in LABEL_TO_CLASS:
            raise ProtocolError(f"unknown label {label!r} (offset {offsets[1]})")
        try:
            conf = float(fields[2])
        except ValueError:
            raise ProtocolError(f"bad confidence {fields[2]!r} (offset {offsets[2]})") from None
        if not 0.0 <= conf <= 1.0:
            raise ProtocolError(f"field confidence out of range 0..1: {fields[2]}")
        return RightLine(label=LABEL_TO_CLASS[label], confidence=conf)

    raise ProtocolError(f"unknown line kind {kind!r} (offset 0)")


def format_line(line: Line) -> str:
    if isinstance(line, LeftLine):
        ax, ay, az = line.acc
        f1, f2 = line.flex
        return f"L,{ax:.3f},{ay:.3f},{az:.3f},{f1},{f2}"
    if isinstance(line, RightLine):
        return f"R,{GESTURE_LABELS[line.label]},{line.confidence:.3f}"
    raise TypeError(f"not a protocol line: {line!r}")


@dataclass(frozen=True)
class ReplayEvent:
    t_ms: float
    line: Line


def parse_replay_line(raw: str, lineno: int = 0) -> ReplayEvent:
    parts = raw.rstrip().split(" ", 1)
    if len(parts) != 2:
        raise ProtocolError(f"replay line {lineno}: expected '<ms> <line>'")
    try:
        t_ms = float(parts[0])
    except ValueError:
        raise ProtocolError(f"replay line {lineno}: bad timestamp {parts[0]!r}") from None
    if t_ms < 0:
        raise ProtocolError(f"replay line {lineno}: negative timestamp")
    try:
        return ReplayEvent(t_ms, parse_line(parts[1]))
    except ProtocolError as exc:
        raise ProtocolError(f"replay line {lineno}: {exc}") from None


def load_replay(path: str | Path) -> list[ReplayEvent]:
    """Read a replay file; events must be time-sorted."""
    events = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        events.append(parse_replay_line(raw, lineno))
    for a, b in zip(events, events[1:]):
        if b.t_ms < a.t_ms:
            raise ProtocolError(f"replay events out of order at t={b.t_ms}")
    return events


def save_replay(events: list[ReplayEvent], path: str | Path) -> None:
    with open(path, "w") as fh:
        for ev in events:
            fh.write(f"{ev.t_ms:.1f} {format_line(ev.line)}\n")
