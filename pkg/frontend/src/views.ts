/** Canvas renderers. All values drawn here come from service messages. */

import { DEAD_ZONE_DEG, THRESHOLD_DEG, ringFraction, Tilt } from "./padmath.js";
import type { CockpitState } from "./state.js";

const TAU = Math.PI * 2;
const JOINT_LIMIT = TAU; // radians, +/-

export function drawBaseView(ctx: CanvasRenderingContext2D, state: CockpitState, stale: boolean): void {
  const { width: w, height: h } = ctx.canvas;
  ctx.clearRect(0, 0, w, h);
  ctx.fillStyle = "#10151c";
  ctx.fillRect(0, 0, w, h);

  const scale = 60; // px per meter
  const toX = (x: number) => w / 2 + x * scale;
  const toY = (y: number) => h / 2 - y * scale;

  ctx.strokeStyle = "#1d2633";
  ctx.lineWidth = 1;
  for (let gx = -10; gx <= 10; gx++) {
    ctx.beginPath();
    ctx.moveTo(toX(gx), 0);
    ctx.lineTo(toX(gx), h);
    ctx.stroke();
    ctx.beginPath();
    ctx.moveTo(0, toY(gx));
    ctx.lineTo(w, toY(gx));
    ctx.stroke();
  }

  if (state.trail.length > 1) {
    ctx.strokeStyle = "#2f81f7";
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.moveTo(toX(state.trail[0].x), toY(state.trail[0].y));
    for (const p of state.trail) ctx.lineTo(toX(p.x), toY(p.y));
    ctx.stroke();
  }

  const pose = state.pose;
  if (pose) {
    const px = toX(pose.x);
    const py = toY(pose.y);
    ctx.save();
    ctx.translate(px, py);
    ctx.rotate(-pose.heading);
    ctx.fillStyle = stale ? "#6b7280" : "#4ade80";
    ctx.beginPath();
    ctx.moveTo(14, 0);
    ctx.lineTo(-9, 7);
    ctx.lineTo(-9, -7);
    ctx.closePath();
    ctx.fill();
    ctx.restore();
  }
}

export function drawPad(ctx: CanvasRenderingContext2D, tilt: Tilt | null): void {
  const { width: w, height: h } = ctx.canvas;
  const cx = w / 2;
  const cy = h / 2;
  const half = Math.min(w, h) / 2 - 4;
  ctx.clearRect(0, 0, w, h);
  ctx.fillStyle = "#10151c";
  ctx.fillRect(0, 0, w, h);

  for (const [deg, color] of [
    [DEAD_ZONE_DEG, "#f87171"],
    [THRESHOLD_DEG, "#fbbf24"],
  ] as const) {
    ctx.strokeStyle = color;
    ctx.setLineDash([4, 4]);
    ctx.beginPath();
    ctx.arc(cx, cy, ringFraction(deg) * half, 0, TAU);
    ctx.stroke();
  }
  ctx.setLineDash([]);
  ctx.strokeStyle = "#334155";
  ctx.strokeRect(cx - half, cy - half, 2 * half, 2 * half);

  if (tilt) {
    const px = cx - (tilt.phi / 30) * half;
    const py = cy - (tilt.theta / 30) * half;
    ctx.fillStyle = "#38bdf8";
    ctx.beginPath();
    ctx.arc(px, py, 7, 0, TAU);
    ctx.fill();
  }
}

export function drawJointGauges(ctx: CanvasRenderingContext2D, state: CockpitState): void {
  const { width: w, height: h } = ctx.canvas;
  ctx.clearRect(0, 0, w, h);
  ctx.fillStyle = "#10151c";
  ctx.fillRect(0, 0, w, h);
  const joints = state.joints?.q ?? new Array(7).fill(0);
  const rowH = h / 7;
  joints.forEach((q, i) => {
    const y = i * rowH + rowH * 0.25;
    const barH = rowH * 0.5;
    ctx.fillStyle = "#1d2633";
    ctx.fillRect(30, y, w - 40, barH);
    const frac = (q + JOINT_LIMIT) / (2 * JOINT_LIMIT);
    ctx.fillStyle = state.joints?.busy ? "#fbbf24" : "#4ade80";
    ctx.fillRect(30, y, (w - 40) * frac, barH);
    ctx.strokeStyle = "#64748b";
    ctx.beginPath();
    ctx.moveTo(30 + (w - 40) / 2, y);
    ctx.lineTo(30 + (w - 40) / 2, y + barH);
    ctx.stroke();
    ctx.fillStyle = "#94a3b8";
    ctx.font = "11px monospace";
    ctx.fillText(`q${i + 1}`, 6, y + barH - 1);
    ctx.fillText(q.toFixed(2), w - 42, y + barH - 1);
  });
}

export function drawSparkline(ctx: CanvasRenderingContext2D, values: number[]): void {
  const { width: w, height: h } = ctx.canvas;
  ctx.clearRect(0, 0, w, h);
  ctx.fillStyle = "#10151c";
  ctx.fillRect(0, 0, w, h);
  if (values.length === 0) return;
  const max = Math.max(...values, 1);
  ctx.strokeStyle = "#38bdf8";
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  values.forEach((v, i) => {
    const x = (i / Math.max(values.length - 1, 1)) * (w - 8) + 4;
    const y = h - 4 - (v / max) * (h - 8);
    if (i === 0) ctx.moveTo(x, y);
    else ctx.lineTo(x, y);
  });
  ctx.stroke();
}
