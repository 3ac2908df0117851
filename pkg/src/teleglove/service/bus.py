"""Timestamped bus messages, session logs, and latency aggregation."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

BROADCAST_TYPES = ("pose", "joints", "caps", "gesture", "latency")
CONTROL_TYPES = ("ctl_tilt", "ctl_flex", "ctl_gesture")
LATENCY_STAGES = ("classify", "dispatch", "total")


@dataclass(frozen=True)
class BusMessage:
    """One structured event: a type tag, monotonic timestamp (ms), payload."""

    type: str
    t: float
    payload: dict

    def __post_init__(self) -> None:
        if self.t < 0 or not math.isfinite(self.t):
            raise ValueError(f"timestamp must be finite and non-negative, got {self.t}")

    def to_json(self) -> str:
        return json.dumps({"type": self.type, "t": round(self.t, 3), "payload": self.payload})

    @classmethod
    def from_json(cls, text: str) -> "BusMessage":
        obj = json.loads(text)
        return cls(type=obj["type"], t=float(obj["t"]), payload=obj["payload"])


@dataclass(frozen=True)
class LatencyRecord:
    """Per-gesture stage timings in milliseconds; total covers receipt to plan start."""

    classify_ms: float
    dispatch_ms: float
    total_ms: float

    def __post_init__(self) -> None:
        if min(self.classify_ms, self.dispatch_ms, self.total_ms) < 0:
            raise ValueError("latency values must be non-negative")
        if self.total_ms < self.classify_ms:
            raise ValueError("total latency cannot undercut the classify stage")

    def as_payload(self) -> dict:
        return {
            "classify_ms": round(self.classify_ms, 4),
            "dispatch_ms": round(self.dispatch_ms, 4),
            "total_ms": round(self.total_ms, 4),
        }


def write_session_log(messages: Iterable[BusMessage], path: str | Path) -> int:
    n = 0
    with open(path, "w") as fh:
        for msg in messages:
            fh.write(msg.to_json() + "\n")
            n += 1
    return n


def read_session_log(path: str | Path) -> list[BusMessage]:
    return [
        BusMessage.from_json(line)
        for line in Path(path).read_text().splitlines()
        if line.strip()
    ]


def _percentile(sorted_vals: list[float], q: float) -> float:
    if not sorted_vals:
        raise ValueError("no values")
    idx = q * (len(sorted_vals) - 1)
    lo = int(math.floor(idx))
    hi = int(math.ceil(idx))
    if lo == hi:
        return sorted_vals[lo]
    frac = idx - lo
    return sorted_vals[lo] * (1 - frac) + sorted_vals[hi] * frac


def latency_report(messages: Iterable[BusMessage]) -> dict[str, dict[str, float]]:
    """Mean, std, and p95 in ms per latency stage over a session log.

    Raises ValueError when the log holds no gesture latency records.
    """
    stages: dict[str, list[float]] = {s: [] for s in LATENCY_STAGES}
    for msg in messages:
        if msg.type != "latency":
            continue
        for stage in LATENCY_STAGES:
            stages[stage].append(float(msg.payload[f"{stage}_ms"]))
    if not stages["total"]:
        raise ValueError("no latency records in session log")
    report = {}
    for stage, vals in stages.items():
        n = len(vals)
        mean = sum(vals) / n
        std = math.sqrt(sum((v - mean) ** 2 for v in vals) / n)
        report[stage] = {
            "count": float(n),
            "mean_ms": mean,
            "std_ms": std,
            "p95_ms": _percentile(sorted(vals), 0.95),
        }
    return report


def format_latency_report(report: dict[str, dict[str, float]]) -> str:
    lines = ["stage     count      mean_ms       std_ms       p95_ms"]
    for stage in LATENCY_STAGES:
        r = report[stage]
        lines.append(
            f"{stage:<9}{int(r['count']):>6}{r['mean_ms']:>13.3f}{r['std_ms']:>13.3f}{r['p95_ms']:>13.3f}"
        )
    return "\n".join(lines)
