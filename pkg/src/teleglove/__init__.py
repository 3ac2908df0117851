"""Hardware-free bimanual glove teleoperation stack.

Left-hand tilt and flex signals drive a simulated differential-drive base;
right-hand IMU windows become 117-dim spectral features classified by a
tiny quantizable dense network whose gestures dispatch predefined 7-DOF
arm trajectories under a homing-first policy.
"""

from .base_control import (
    BaseController,
    FlexDetector,
    FlexEvent,
    NeutralCalibration,
    SpeedCaps,
    Twist,
    calibrate_neutral,
    flex_update_caps,
    tilt_to_twist,
)
from .drive_sim import DriveSimulator, Pose2D, SimClock, step_pose
from .arm_sim import (
    ArmSimulator,
    ArmState,
    NamedPose,
    TrajectoryPlan,
    default_poses,
    dispatch,
    load_pose_config,
    plan_segment,
    save_pose_config,
)
from .estimators import TinyGestureClassifier, WindowFeaturizer
from .imu import (
    ImuSample,
    ImuWindow,
    LowPassFilter,
    TiltPair,
    gate_dead_zone,
    low_pass,
    tilt_angles,
    window_stream,
)
from .spectral import axis_stats, extract_features, extract_features_batch, fft16, psd_welch
from .synth import (
    GESTURE_LABELS,
    GestureClass,
    GestureRecording,
    SynthSpec,
    build_dataset,
    features_and_labels,
    load_dataset_csv,
    load_windows_csv,
    save_dataset_csv,
    synth_gesture,
    synth_recordings,
)

__version__ = "0.1.0"
