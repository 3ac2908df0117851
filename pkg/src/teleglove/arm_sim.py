"""Gesture-to-trajectory dispatch and joint-space execution for a 7-DOF arm.

There is no IK or collision planner here: actions are predefined joint-space
poses reached through trapezoidal time-scaling, and the homing-first policy
is enforced structurally — any plan toward a non-home target starts with a
homing segment unless the arm is already at home. Joint angles are radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import ArmBusyError, PlanningError, ProtocolError
from .synth import GESTURE_LABELS, GestureClass

N_JOINTS = 7
JOINT_LIMIT = 2.0 * math.pi
DEFAULT_V_SCALE = 0.1
DEFAULT_A_SCALE = 0.05
WAYPOINT_DT = 0.05
TICK_DT = 0.01
CONFIDENCE_THRESHOLD = 0.6
HOME_DEG_130 = 130.0 * math.pi / 180.0

JOINTS_HEADER = "t,q1,q2,q3,q4,q5,q6,q7,segment"

# gesture -> named action; idle never actuates
GESTURE_ACTION = {
    GestureClass.UP_DOWN: "home",
    GestureClass.TO_FRO: "pickup",
    GestureClass.LEFT_RIGHT: "place",
    GestureClass.RECTANGLE: "place2",
    GestureClass.RECTANGLE_FLAT: "place3",
    GestureClass.CIRCLE: "top",
}


@dataclass(frozen=True)
class NamedPose:
    name: str
    joints: np.ndarray
    nominal_duration: float

    def __post_init__(self) -> None:
        joints = np.asarray(self.joints, dtype=np.float64)
        object.__setattr__(self, "joints", joints)
        if joints.shape != (N_JOINTS,):
            raise ValueError(f"pose {self.name!r} needs {N_JOINTS} joints, got {joints.shape}")
        if self.nominal_duration <= 0:
            raise ValueError(f"pose {self.name!r} duration must be positive")
        if np.any(np.abs(joints) > JOINT_LIMIT):
            raise ValueError(f"pose {self.name!r} exceeds joint limits")


def default_poses() -> dict[str, NamedPose]:
    """Built-in pose table; durations follow the measured per-action times."""
    table = {
        "home":   ([HOME_DEG_130, 0.2618, 0.0, 1.0472, 0.0, 0.5236, 0.0], 3.3),
        "pickup": ([0.7854, 0.9599, 0.1745, 1.7453, 0.0873, 0.6981, 0.3491], 5.7),
        "place":  ([-0.5236, 0.6981, -0.2618, 1.3963, 0.1745, 0.8727, -0.1745], 6.1),
        "place2": ([-1.0472, 0.5236, -0.3491, 1.2217, 0.2618, 1.0472, -0.3491], 6.4),
        "place3": ([-1.3963, 1.0472, -0.1745, 1.9199, 0.0873, 0.3491, -0.5236], 7.1),
        "top":    ([0.1745, -0.5236, 0.0873, 0.6981, -0.1745, 1.2217, 0.1745], 5.9),
    }
    return {name: NamedPose(name, np.array(q), dur) for name, (q, dur) in table.items()}


def save_pose_config(poses: dict[str, NamedPose], path: str | Path) -> None:
    """One pose per line: name, 7 joint angles (rad), nominal duration (s)."""
    lines = ["# name q1 q2 q3 q4 q5 q6 q7 duration_s"]
    for pose in poses.values():
        joints = " ".join(f"{q:.6f}" for q in pose.joints)
        lines.append(f"{pose.name} {joints} {pose.nominal_duration:.3f}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_pose_config(path: str | Path) -> dict[str, NamedPose]:
    poses: dict[str, NamedPose] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 1 + N_JOINTS + 1:
            raise ValueError(f"pose config line {lineno}: expected name + 7 joints + duration")
        name = parts[0]
        try:
            values = [float(v) for v in parts[1:]]
        except ValueError as exc:
            raise ValueError(f"pose config line {lineno}: {exc}") from None
        poses[name] = NamedPose(name, np.array(values[:N_JOINTS]), values[N_JOINTS])
    missing = sorted(set(GESTURE_ACTION.values()) - set(poses))
    if missing:
        raise ValueError(f"pose config missing required poses: {missing}")
    return poses


@dataclass
class ArmState:
    current: np.ndarray = field(default_factory=lambda: default_poses()["home"].joints.copy())
    at_pose: Optional[str] = "home"
    busy: bool = False

    def snapshot(self) -> "ArmState":
        return ArmState(self.current.copy(), self.at_pose, self.busy)


@dataclass(frozen=True)
class TrajectoryPlan:
    """Timed waypoints through an ordered list of named targets."""

    segments: tuple[NamedPose, ...]
    times: np.ndarray  # strictly increasing, starting at 0
    waypoints: np.ndarray  # (n, 7), first row equals the start state
    segment_of: tuple[str, ...]  # segment name per waypoint
    v_scale: float = DEFAULT_V_SCALE
    a_scale: float = DEFAULT_A_SCALE
    preempting: bool = False

    @property
    def total_duration(self) -> float:
        return float(self.times[-1])

    @property
    def final_pose_name(self) -> str:
        return self.segments[-1].name


def plan_segment(
    start: np.ndarray,
    target: np.ndarray,
    duration: float,
    v_scale: float = DEFAULT_V_SCALE,
    a_scale: float = DEFAULT_A_SCALE,
) -> tuple[np.ndarray, np.ndarray]:
    """Trapezoidal time-scaling between two joint vectors over a shared duration.

    All joints share one normalized profile s(t) in [0, 1]; the acceleration
    phase lasts min(duration / 3, v_scale / a_scale) seconds on each end.
    Returns (times, waypoints) sampled every 50 ms plus the exact endpoint.
    """
    start = np.asarray(start, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if start.shape != (N_JOINTS,) or target.shape != (N_JOINTS,):
        raise PlanningError("joint vectors must have 7 entries")
    if duration <= 0 or np.array_equal(start, target):
        return np.array([0.0]), start[None, :].copy()

    t_acc = min(duration / 3.0, v_scale / a_scale)
    peak = 1.0 / (duration - t_acc)  # normalized cruise rate

    times = np.arange(0.0, duration, WAYPOINT_DT)
    if times[-1] < duration:
        times = np.append(times, duration)

    s = np.empty_like(times)
    for i, t in enumerate(times):
        if t < t_acc:
            s[i] = peak * t * t / (2.0 * t_acc)
        elif t <= duration - t_acc:
            s[i] = peak * (t - t_acc / 2.0)
        else:
            s[i] = 1.0 - peak * (duration - t) ** 2 / (2.0 * t_acc)
    s[-1] = 1.0  # endpoint exact by construction

    waypoints = start[None, :] + s[:, None] * (target - start)[None, :]
    over = np.abs(waypoints) > JOINT_LIMIT
    if np.any(over):
        joint = int(np.argwhere(over)[0][1])
        raise PlanningError(f"waypoint exceeds limit on joint {joint + 1}")
    return times, waypoints


def build_plan(
    start: np.ndarray,
    segments: Sequence[NamedPose],
    v_scale: float = DEFAULT_V_SCALE,
    a_scale: float = DEFAULT_A_SCALE,
    preempting: bool = False,
) -> TrajectoryPlan:
    """Chain per-segment trapezoids into one timed waypoint sequence."""
    times_all = [np.array([0.0])]
    points_all = [np.asarray(start, dtype=np.float64)[None, :]]
    names_all = [segments[0].name]
    t_offset = 0.0
    cur = np.asarray(start, dtype=np.float64)
    for seg in segments:
        times, points = plan_segment(cur, seg.joints, seg.nominal_duration, v_scale, a_scale)
        if len(times) > 1:
            times_all.append(times[1:] + t_offset)
            points_all.append(points[1:])
            names_all.extend([seg.name] * (len(times) - 1))
            t_offset += times[-1]
        cur = seg.joints
    return TrajectoryPlan(
        segments=tuple(segments),
        times=np.concatenate(times_all),
        waypoints=np.vstack(points_all),
        segment_of=tuple(names_all),
        v_scale=v_scale,
        a_scale=a_scale,
        preempting=preempting,
    )


def dispatch(
    label: int | GestureClass,
    confidence: float,
    state: ArmState,
    poses: dict[str, NamedPose] | None = None,
) -> Optional[TrajectoryPlan]:
    """Map a classified gesture to a trajectory plan under homing-first.

    idle and low-confidence classifications never actuate. A homing gesture
    plans from anywhere (and may preempt a busy arm); any other action is
    rejected while busy, and gets a leading homing segment unless the arm is
    already at home.
    """
    if not 0.0 <= confidence <= 1.0:
        raise ValueError(f"confidence must be within [0, 1], got {confidence}")
    try:
        gesture = GestureClass(label)
    except ValueError:
        raise ProtocolError(f"unknown gesture label {label!r}") from None

    if gesture is GestureClass.IDLE or confidence < CONFIDENCE_THRESHOLD:
        return None

    poses = poses or default_poses()
    if gesture is GestureClass.UP_DOWN:
        return build_plan(state.current, [poses["home"]], preempting=True)

    if state.busy:
        raise ArmBusyError(f"arm is executing; {GESTURE_LABELS[gesture]} rejected")
    target = poses[GESTURE_ACTION[gesture]]
    if state.at_pose == "home":
        return build_plan(state.current, [target])
    return build_plan(state.current, [poses["home"], target])


@dataclass(frozen=True)
class JointTracePoint:
    t: float
    joints: np.ndarray
    segment: Optional[str]

    def csv_row(self) -> str:
        q = ",".join(f"{v:.6f}" for v in self.joints)
        return f"{self.t:.3f},{q},{self.segment or ''}"


class ArmSimulator:
    """Owns the arm state; advances along the active plan one tick at a time.

    Preemption (a homing plan) replaces the active plan at a tick boundary;
    any other submission while busy is a busy-rejection.
    """

    def __init__(self, poses: dict[str, NamedPose] | None = None, dt: float = TICK_DT) -> None:
        self.poses = poses or default_poses()
        self.dt = dt
        self.state = ArmState(self.poses["home"].joints.copy(), "home", False)
        self.t = 0.0
        self._plan: Optional[TrajectoryPlan] = None
        self._plan_start = 0.0
        self.trace: list[JointTracePoint] = []

    def submit(self, plan: TrajectoryPlan) -> None:
        if self.state.busy and not plan.preempting:
            raise ArmBusyError("arm is executing; plan rejected")
        if not np.allclose(plan.waypoints[0], self.state.current, atol=1e-6):
            raise PlanningError("plan does not start at the current joint state")
        self._plan = plan
        self._plan_start = self.t
        self.state.busy = True
        self.state.at_pose = None

    def command(self, label: int | GestureClass, confidence: float) -> Optional[TrajectoryPlan]:
        """Dispatch a gesture against the live state and start the plan."""
        plan = dispatch(label, confidence, self.state, self.poses)
        if plan is not None:
            self.submit(plan)
        return plan

    def tick(self) -> ArmState:
        self.t += self.dt
        segment = None
        if self._plan is not None:
            rel = self.t - self._plan_start
            plan = self._plan
            if rel >= plan.total_duration:
                self.state.current = plan.waypoints[-1].copy()
                self.state.at_pose = plan.final_pose_name
                self.state.busy = False
                segment = plan.final_pose_name
                self._plan = None
            else:
                idx = int(np.searchsorted(plan.times, rel, side="right"))
                t0, t1 = plan.times[idx - 1], plan.times[idx]
                q0, q1 = plan.waypoints[idx - 1], plan.waypoints[idx]
                frac = (rel - t0) / (t1 - t0) if t1 > t0 else 0.0
                self.state.current = q0 + frac * (q1 - q0)
                segment = plan.segment_of[idx]
        self.trace.append(JointTracePoint(self.t, self.state.current.copy(), segment))
        return self.state.snapshot()

    @property
    def busy(self) -> bool:
        return self.state.busy

    @property
    def current_segment(self) -> Optional[str]:
        return self.trace[-1].segment if self.trace else None

    def execute(self, plan: TrajectoryPlan) -> list[JointTracePoint]:
        """Run a plan to completion, returning the per-tick trace."""
        self.submit(plan)
        start_len = len(self.trace)
        while self.state.busy:
            self.tick()
        return self.trace[start_len:]

    def write_trace_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(JOINTS_HEADER + "\n")
            for p in self.trace:
                fh.write(p.csv_row() + "\n")
