"""Wire protocols and the real-time event loop binding wearables to simulators."""

from .bus import (
    BROADCAST_TYPES,
    BusMessage,
    LatencyRecord,
    format_latency_report,
    latency_report,
    read_session_log,
    write_session_log,
)
from .live import LiveSession
from .protocol import (
    LeftLine,
    ReplayEvent,
    RightLine,
    format_line,
    load_replay,
    parse_line,
    parse_replay_line,
    save_replay,
)
from .session import GestureOutcome, SessionConfig, SessionCore

__all__ = [
    "BROADCAST_TYPES",
    "BusMessage",
    "LatencyRecord",
    "LeftLine",
    "RightLine",
    "ReplayEvent",
    "GestureOutcome",
    "SessionConfig",
    "SessionCore",
    "LiveSession",
    "parse_line",
    "format_line",
    "parse_replay_line",
    "load_replay",
    "save_replay",
    "latency_report",
    "format_latency_report",
    "read_session_log",
    "write_session_log",
]
