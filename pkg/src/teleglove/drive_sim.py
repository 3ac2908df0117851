"""Differential-drive (unicycle) kinematics standing in for the physics sim.

Pose integration uses the exact arc solution, so results are independent of
the step size; commands are zero-order held between arrivals and time out
to a safe stop after 500 ms of silence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .base_control import HALT, Twist
from .errors import SimulationFault

DEFAULT_DT = 0.01
COMMAND_TIMEOUT_MS = 500.0
TRAJECTORY_HEADER = "t,x,y,heading,v_cmd,w_cmd"


def wrap_angle(theta: float) -> float:
    """Wrap to (-pi, pi]."""
    wrapped = theta - 2.0 * math.pi * math.floor((theta + math.pi) / (2.0 * math.pi))
    if wrapped <= -math.pi:
        wrapped = math.pi
    return wrapped


@dataclass(frozen=True)
class Pose2D:
    x: float = 0.0
    y: float = 0.0
    heading: float = 0.0

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in (self.x, self.y, self.heading)):
            raise SimulationFault(f"non-finite pose ({self.x}, {self.y}, {self.heading})")


@dataclass
class SimClock:
    t: float = 0.0
    dt: float = DEFAULT_DT

    def __post_init__(self) -> None:
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")

    def tick(self) -> float:
        self.t += self.dt
        return self.t


def step_pose(pose: Pose2D, twist: Twist, dt: float) -> Pose2D:
    """Exact arc integration of the unicycle model over one step.

    Written via the identity (v/w)(sin(th + w dt) - sin th) =
    v dt sinc(w dt / 2) cos(th + w dt / 2), which equals the textbook arc
    form but stays well conditioned as w -> 0 and reduces to the straight
    line exactly at w = 0.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    v, w = twist.linear_x, twist.angular_z
    if not (math.isfinite(v) and math.isfinite(w)):
        raise SimulationFault(f"non-finite twist ({v}, {w})")
    th = pose.heading
    half = 0.5 * w * dt
    sinc = math.sin(half) / half if half != 0.0 else 1.0
    mid = th + half
    return Pose2D(
        pose.x + v * dt * sinc * math.cos(mid),
        pose.y + v * dt * sinc * math.sin(mid),
        wrap_angle(th + w * dt) if w != 0.0 else th,
    )


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    pose: Pose2D
    v_cmd: float
    w_cmd: float

    def csv_row(self) -> str:
        p = self.pose
        return f"{self.t:.3f},{p.x:.6f},{p.y:.6f},{p.heading:.6f},{self.v_cmd:.4f},{self.w_cmd:.4f}"


class DriveSimulator:
    """Fixed-step simulator owning one pose; observers get immutable snapshots."""

    def __init__(
        self,
        dt: float = DEFAULT_DT,
        timeout_ms: float = COMMAND_TIMEOUT_MS,
        pose: Pose2D | None = None,
    ) -> None:
        self.dt = dt
        self.timeout_ms = timeout_ms
        self.pose = pose or Pose2D()
        self.t = 0.0
        self._cmd = HALT
        self._cmd_t_ms = -math.inf
        self.log: list[TrajectoryPoint] = []

    def apply_command(self, twist: Twist, t_ms: float) -> None:
        if not (math.isfinite(twist.linear_x) and math.isfinite(twist.angular_z)):
            raise SimulationFault(f"non-finite twist {twist}")
        self._cmd = twist
        self._cmd_t_ms = t_ms

    @property
    def active_command(self) -> Twist:
        """Latest command, or a halt once the command timeout has passed."""
        if self.t * 1000.0 - self._cmd_t_ms > self.timeout_ms:
            return HALT
        return self._cmd

    def tick(self) -> Pose2D:
        cmd = self.active_command
        self.pose = step_pose(self.pose, cmd, self.dt)
        self.t += self.dt
        self.log.append(TrajectoryPoint(self.t, self.pose, cmd.linear_x, cmd.angular_z))
        return self.pose

    def run(self, commands: Iterable[tuple[float, Twist]], duration: float) -> list[TrajectoryPoint]:
        """Replay timestamped commands (seconds) for a fixed duration.

        Commands apply with zero-order hold at their timestamps; the applied
        command of every tick is logged.
        """
        pending = sorted(commands, key=lambda c: c[0])
        i = 0
        n_steps = round(duration / self.dt)
        for _ in range(n_steps):
            while i < len(pending) and pending[i][0] <= self.t + 1e-12:
                self.apply_command(pending[i][1], pending[i][0] * 1000.0)
                i += 1
            self.tick()
        return self.log

    def write_log_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(TRAJECTORY_HEADER + "\n")
            for p in self.log:
                fh.write(p.csv_row() + "\n")
