/** Cockpit wiring: socket, inputs, and the render loop. */

import {
  GESTURE_LABELS,
  GestureLabel,
  encodeCtlFlex,
  encodeCtlGesture,
  encodeCtlTilt,
  parseBusMessage,
} from "./protocol.js";
import { PadRect, RateLimiter, Tilt, pointerToTilt } from "./padmath.js";
import { ReconnectingSocket } from "./socket.js";
import {
  applyMessage,
  clearToast,
  initialState,
  isStale,
  latencySummary,
  setConnected,
} from "./state.js";
import { drawBaseView, drawJointGauges, drawPad, drawSparkline } from "./views.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const params = new URLSearchParams(location.search);
const wsUrl = params.get("ws") ?? `ws://${location.hostname || "127.0.0.1"}:8765`;

let state = initialState();
let padTilt: Tilt | null = null;
let toastUntil = 0;

const socket = new ReconnectingSocket(wsUrl, {
  onMessage(text) {
    const msg = parseBusMessage(text);
    if (msg) state = applyMessage(state, msg, performance.now());
  },
  onStatus(connected) {
    state = setConnected(state, connected);
  },
});
socket.connect();

// ------------------------------------------------------------------- pad

const padCanvas = $<HTMLCanvasElement>("pad");
const limiter = new RateLimiter();
let padActive = false;

function padRect(): PadRect {
  const r = padCanvas.getBoundingClientRect();
  return { left: r.left, top: r.top, width: r.width, height: r.height };
}

function sendTilt(tilt: Tilt, force = false): void {
  padTilt = tilt;
  if (force || limiter.allow(performance.now())) {
    socket.send(encodeCtlTilt(Number(tilt.theta.toFixed(2)), Number(tilt.phi.toFixed(2))));
  }
}

padCanvas.addEventListener("pointerdown", (ev) => {
  padActive = true;
  padCanvas.setPointerCapture(ev.pointerId);
  sendTilt(pointerToTilt(ev.clientX, ev.clientY, padRect()));
});
padCanvas.addEventListener("pointermove", (ev) => {
  if (padActive) sendTilt(pointerToTilt(ev.clientX, ev.clientY, padRect()));
});
for (const evName of ["pointerup", "pointercancel"] as const) {
  padCanvas.addEventListener(evName, () => {
    padActive = false;
    sendTilt({ theta: 0, phi: 0 }, true); // release always lands
  });
}

// --------------------------------------------------------------- buttons

$("flex-index").addEventListener("click", () => socket.send(encodeCtlFlex("index")));
$("flex-middle").addEventListener("click", () => socket.send(encodeCtlFlex("middle")));

const gesturePanel = $("gestures");
for (const label of GESTURE_LABELS) {
  const btn = document.createElement("button");
  btn.textContent = label;
  btn.addEventListener("click", () => socket.send(encodeCtlGesture(label)));
  gesturePanel.appendChild(btn);
}

// optional keyboard bindings: arrows tilt, q/z bend, 1-7 gestures
const KEY_TILT: Record<string, Tilt> = {
  ArrowUp: { theta: 20, phi: 0 },
  ArrowDown: { theta: -20, phi: 0 },
  ArrowLeft: { theta: 0, phi: 20 },
  ArrowRight: { theta: 0, phi: -20 },
};
document.addEventListener("keydown", (ev) => {
  if (ev.repeat) return;
  if (ev.key in KEY_TILT) sendTilt(KEY_TILT[ev.key], true);
  else if (ev.key === "q") socket.send(encodeCtlFlex("index"));
  else if (ev.key === "z") socket.send(encodeCtlFlex("middle"));
  else if (ev.key >= "1" && ev.key <= "7") {
    socket.send(encodeCtlGesture(GESTURE_LABELS[Number(ev.key) - 1] as GestureLabel));
  }
});
document.addEventListener("keyup", (ev) => {
  if (ev.key in KEY_TILT) sendTilt({ theta: 0, phi: 0 }, true);
});

// ----------------------------------------------------------- render loop

const baseCtx = $<HTMLCanvasElement>("base-view").getContext("2d")!;
const padCtx = padCanvas.getContext("2d")!;
const gaugesCtx = $<HTMLCanvasElement>("gauges").getContext("2d")!;
const sparkCtx = $<HTMLCanvasElement>("sparkline").getContext("2d")!;

function renderDom(now: number, stale: boolean): void {
  $("status").textContent = state.connected ? `connected ${wsUrl}` : `connecting ${wsUrl} ...`;
  $("status").className = state.connected ? "ok" : "bad";
  $("stale-banner").style.display = stale ? "block" : "none";

  const caps = state.caps;
  $("cap-v").textContent = caps ? `${caps.v_max.toFixed(2)} m/s` : "-";
  $("cap-w").textContent = caps ? `${caps.w_max.toFixed(2)} rad/s` : "-";
  $<HTMLElement>("cap-v-bar").style.width = caps ? `${caps.v_max * 100}%` : "0";
  $<HTMLElement>("cap-w-bar").style.width = caps ? `${caps.w_max * 100}%` : "0";

  const pose = state.pose;
  $("pose-text").textContent = pose
    ? `x ${pose.x.toFixed(2)} m   y ${pose.y.toFixed(2)} m   heading ${pose.heading.toFixed(2)} rad   v ${pose.v.toFixed(2)}   w ${pose.w.toFixed(2)}`
    : "no pose yet";

  const joints = state.joints;
  $("segment").textContent = joints
    ? joints.busy
      ? `executing: ${joints.segment ?? "?"}`
      : `at: ${joints.at_pose ?? "(between poses)"}`
    : "-";
  $("timeline").textContent = state.timeline.length ? state.timeline.join(" -> ") : "-";

  const g = state.gesture;
  $("gesture-text").textContent = g
    ? `${g.label} (${g.confidence.toFixed(2)}) ${g.dispatched ? "dispatched" : g.reason}`
    : "-";

  const lat = latencySummary(state);
  $("latency-text").textContent = lat
    ? `n=${lat.count}  last ${lat.last.toFixed(1)} ms  mean ${lat.mean.toFixed(1)} ms  p95 ${lat.p95.toFixed(1)} ms`
    : "no gesture latency yet";

  const toastEl = $("toast");
  if (state.toast) {
    toastEl.textContent = state.toast;
    toastEl.style.display = "block";
    toastUntil = now + 3000;
    state = clearToast(state);
  } else if (now > toastUntil) {
    toastEl.style.display = "none";
  }
}

function frame(): void {
  const now = performance.now();
  const stale = isStale(state, now);
  drawBaseView(baseCtx, state, stale);
  drawPad(padCtx, padTilt);
  drawJointGauges(gaugesCtx, state);
  drawSparkline(sparkCtx, state.latencies);
  renderDom(now, stale);
  requestAnimationFrame(frame);
}
requestAnimationFrame(frame);
