"""Operator command line: dataset generation, training, quantization,
evaluation, simulation runs, replay, and latency reporting.

Every subcommand is deterministic given its seed and inputs, exits 0 on
success, and reports failures as a single machine-parseable line
``error: <message>`` on stderr. Set TELEGLOVE_LOG=debug for verbose logs.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import __version__
from .arm_sim import default_poses, load_pose_config, save_pose_config
from .base_control import BaseController, SpeedCaps
from .config import RunConfig
from .errors import TelegloveError
from .nn import (
    TrainConfig,
    evaluate,
    float_payload_bytes,
    int8_payload_bytes,
    load_file,
    quantize_int8,
    save_file,
    train,
)
from .nn.model import TinyModel
from .nn.quant import QuantModel
from .service.bus import format_latency_report, latency_report, read_session_log, write_session_log
from .service.live import LiveSession
from .service.protocol import load_replay
from .service.session import SessionConfig, SessionCore
from .spectral import N_FEATURES
from .synth import GESTURE_LABELS, features_and_labels, load_windows_csv, synth_recordings, save_dataset_csv

log = logging.getLogger("teleglove")


def parse_duration_ms(text: str) -> float:
    """Accept '60s', '2500ms', or a bare number meaning milliseconds."""
    text = text.strip().lower()
    try:
        if text.endswith("ms"):
            return float(text[:-2])
        if text.endswith("s"):
            return float(text[:-1]) * 1000.0
        return float(text)
    except ValueError:
        raise TelegloveError(f"cannot parse duration {text!r}") from None


def _load_config(args) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        cfg = cfg.merged_with_file(args.config)
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, seed=args.seed)
    return cfg


def _session_core(cfg: RunConfig, model_path: str | None, poses_path: str | None) -> SessionCore:
    model = load_file(model_path) if model_path else None
    poses = load_pose_config(poses_path) if poses_path else default_poses()
    controller = BaseController(
        caps=SpeedCaps(cfg.v_max, cfg.w_max, (cfg.v_lo, cfg.v_hi), (cfg.w_lo, cfg.w_hi)),
        thresh=cfg.thresh_deg,
        dz=cfg.dead_zone_deg,
        alpha=cfg.alpha,
        flex_threshold=cfg.flex_threshold,
        hysteresis=cfg.hysteresis,
        debounce_ms=cfg.debounce_ms,
    )
    session_cfg = SessionConfig(
        tick_ms=cfg.tick_ms, safe_stop_ms=cfg.safe_stop_ms, hop_ms=cfg.hop_ms, fs=cfg.fs
    )
    return SessionCore(session_cfg, model=model, controller=controller, poses=poses)


def _write_session_outputs(core: SessionCore, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    core.drive.write_log_csv(out_dir / "trajectory.csv")
    core.arm.write_trace_csv(out_dir / "joints.csv")
    write_session_log(core.log, out_dir / "session.jsonl")
    try:
        report = latency_report(core.log)
    except ValueError:
        print("no gesture events; latency report skipped")
    else:
        print(format_latency_report(report))
    print(f"logs written to {out_dir}")


# ----------------------------------------------------------- subcommands


def cmd_gen(args) -> int:
    cfg = _load_config(args)
    per_class = parse_duration_ms(args.per_class) if args.per_class else cfg.per_class_ms
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    def build(seed: int, duration: float, name: str) -> None:
        recs = synth_recordings(
            duration, fs=cfg.fs, noise_sigma=cfg.noise_sigma, seed=seed,
            amplitude=cfg.amplitude, freq=cfg.freq,
        )
        save_dataset_csv(recs, out / name)
        windows = load_windows_csv(out / name, hop_ms=cfg.hop_ms)
        counts = {}
        for w in windows:
            counts[w.label] = counts.get(w.label, 0) + 1
        per_class_counts = ", ".join(f"{GESTURE_LABELS[c]}={n}" for c, n in sorted(counts.items()))
        print(f"{name}: {len(windows)} windows @hop {cfg.hop_ms:.0f} ms ({per_class_counts})")

    build(cfg.seed, per_class, "train.csv")
    build(cfg.seed + 1000, max(per_class / 4.0, 4000.0), "test.csv")
    return 0


def cmd_train(args) -> int:
    cfg = _load_config(args)
    windows = load_windows_csv(args.data, hop_ms=cfg.hop_ms)
    X, y = features_and_labels(windows)
    t0 = time.perf_counter()
    model, history = train(
        X,
        y,
        TrainConfig(
            epochs=cfg.epochs, base_lr=cfg.base_lr, batch_size=cfg.batch_size,
            val_fraction=cfg.val_fraction, seed=cfg.seed,
        ),
    )
    elapsed = time.perf_counter() - t0
    size = save_file(model, args.out)
    metrics_path = args.metrics or str(Path(args.out).with_suffix(".metrics.csv"))
    Path(metrics_path).write_text("\n".join(history.metrics_lines()) + "\n")
    final = history.final
    print(
        f"trained on {len(y)} windows in {elapsed:.1f} s: "
        f"val_acc={final.val_acc:.4f} val_loss={final.val_loss:.4f}"
    )
    print(f"model ({size} bytes) -> {args.out}; metrics -> {metrics_path}")
    return 0


def cmd_quantize(args) -> int:
    cfg = _load_config(args)
    model = load_file(args.model)
    if not isinstance(model, TinyModel):
        raise TelegloveError(f"{args.model} is already quantized")
    windows = load_windows_csv(args.calib, hop_ms=cfg.hop_ms)
    X, _ = features_and_labels(windows)
    qmodel = quantize_int8(model, X)
    size = save_file(qmodel, args.out)
    fp, ip = float_payload_bytes(model), int8_payload_bytes(qmodel)
    print(f"int8 payload {ip} B / float32 payload {fp} B = {ip / fp:.1%}")
    print(f"quantized model ({size} bytes) -> {args.out}")
    return 0


def cmd_eval(args) -> int:
    cfg = _load_config(args)
    model = load_file(args.model)
    if model.n_in != N_FEATURES:
        raise TelegloveError(
            f"model expects {model.n_in} features but this pipeline produces {N_FEATURES}"
        )
    windows = load_windows_csv(args.data, hop_ms=cfg.hop_ms)
    X, y = features_and_labels(windows)
    cm, acc = evaluate(model, X, y)
    kind = "int8" if isinstance(model, QuantModel) else "float32"
    print(f"{kind} model on {len(y)} windows: accuracy {acc:.4f}")
    print(cm.to_table(list(GESTURE_LABELS)))
    recalls = cm.per_class_recall()
    print("per-class recall: " + ", ".join(
        f"{GESTURE_LABELS[i]}={recalls[i]:.3f}" for i in range(len(recalls))
    ))
    if args.matrix_csv:
        Path(args.matrix_csv).write_text(cm.to_csv() + "\n")
        print(f"matrix -> {args.matrix_csv}")
    return 0


def cmd_replay(args) -> int:
    cfg = _load_config(args)
    core = _session_core(cfg, args.model, args.poses)
    left = load_replay(args.left) if args.left else []
    right = load_replay(args.right) if args.right else []
    duration = parse_duration_ms(args.duration) if args.duration else None
    core.run_replay(left=left, right=right, duration_ms=duration)
    _write_session_outputs(core, Path(args.out))
    return 0


def cmd_sim(args) -> int:
    cfg = _load_config(args)
    core = _session_core(cfg, args.model, args.poses)
    live = LiveSession(core)
    server = static = None
    if args.serve:
        from .service.wsserver import CockpitServer, StaticServer

        server = CockpitServer(live, host=args.host, port=args.port)
        server.start()
        print(f"websocket channel on ws://{args.host}:{server.port}", flush=True)
        if args.ui:
            static = StaticServer(args.ui, host=args.host, port=args.ui_port)
            static.start()
            print(f"cockpit ui on http://{args.host}:{static.port}", flush=True)
    left = load_replay(args.left) if args.left else []
    right = load_replay(args.right) if args.right else []
    duration = parse_duration_ms(args.duration) if args.duration else None
    try:
        if duration is None:
            live.start(left=left, right=right)
            print("running until interrupted (ctrl-c) ...")
            while True:
                time.sleep(0.5)
        else:
            live.run(left=left, right=right, duration_ms=duration)
    except KeyboardInterrupt:
        print("interrupted")
    finally:
        live.stop()
        if server is not None:
            server.stop()
        if static is not None:
            static.stop()
    _write_session_outputs(core, Path(args.out))
    return 0


def cmd_report(args) -> int:
    messages = read_session_log(args.session)
    try:
        report = latency_report(messages)
    except ValueError as exc:
        raise TelegloveError(str(exc)) from None
    print(format_latency_report(report))
    if args.csv:
        lines = ["stage,count,mean_ms,std_ms,p95_ms"]
        for stage, r in report.items():
            lines.append(
                f"{stage},{int(r['count'])},{r['mean_ms']:.4f},{r['std_ms']:.4f},{r['p95_ms']:.4f}"
            )
        Path(args.csv).write_text("\n".join(lines) + "\n")
        print(f"report -> {args.csv}")
    return 0


def cmd_poses(args) -> int:
    save_pose_config(default_poses(), args.out)
    print(f"default pose table -> {args.out}")
    return 0


# ----------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="teleglove",
        description="Bimanual glove teleoperation stack: data, models, and simulators.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="key=value config file; flags override")
        p.add_argument("--seed", type=int, help="override config seed")

    p = sub.add_parser("gen", help="generate synthetic train/test dataset CSVs")
    add_common(p)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--per-class", help="recording duration per class, e.g. 60s")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("train", help="train the float32 classifier")
    add_common(p)
    p.add_argument("--data", required=True, help="training dataset CSV")
    p.add_argument("--out", required=True, help="model file to write")
    p.add_argument("--metrics", help="metrics CSV (default: <model>.metrics.csv)")
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("quantize", help="post-training int8 quantization")
    add_common(p)
    p.add_argument("--model", required=True, help="float32 model file")
    p.add_argument("--calib", required=True, help="calibration dataset CSV")
    p.add_argument("--out", required=True, help="quantized model file to write")
    p.set_defaults(fn=cmd_quantize)

    p = sub.add_parser("eval", help="confusion matrix and accuracy on a dataset")
    add_common(p)
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--matrix-csv", help="also write the matrix as CSV")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("replay", help="deterministic simulated-time replay")
    add_common(p)
    p.add_argument("--left", help="left-hand replay file")
    p.add_argument("--right", help="right-hand replay file")
    p.add_argument("--model", help="classifier model for raw/ctl gestures")
    p.add_argument("--poses", help="pose config file (default: built-in table)")
    p.add_argument("--duration", help="session length, e.g. 10s (default: inputs + 1s)")
    p.add_argument("--out", required=True, help="output directory for logs")
    p.set_defaults(fn=cmd_replay)

    p = sub.add_parser("sim", help="real-time session, optionally serving the cockpit")
    add_common(p)
    p.add_argument("--left", help="left-hand replay file")
    p.add_argument("--right", help="right-hand replay file")
    p.add_argument("--model", help="classifier model for raw/ctl gestures")
    p.add_argument("--poses", help="pose config file")
    p.add_argument("--duration", help="wall-clock session length, e.g. 10s")
    p.add_argument("--serve", action="store_true", help="host the websocket channel")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765, help="websocket port")
    p.add_argument("--ui", help="serve this directory as the cockpit bundle")
    p.add_argument("--ui-port", type=int, default=8000)
    p.add_argument("--out", required=True, help="output directory for logs")
    p.set_defaults(fn=cmd_sim)

    p = sub.add_parser("report", help="latency summary from a session log")
    p.add_argument("--session", required=True, help="session.jsonl path")
    p.add_argument("--csv", help="also write the summary as CSV")
    p.set_defaults(fn=cmd_report)

    p = sub.add_parser("poses", help="write the default pose table config")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_poses)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("TELEGLOVE_LOG", "warning").upper())
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (TelegloveError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
