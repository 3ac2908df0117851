/**
 * Cockpit state: a pure reducer over bus messages.
 *
 * The cockpit is stateless about physics — every displayed pose, joint
 * vector, and cap value originates from a service message; nothing is
 * integrated or predicted client-side. Data older than one second is
 * flagged stale.
 */

import type {
  BusMessage,
  CapsPayload,
  GesturePayload,
  JointsPayload,
  PosePayload,
} from "./protocol.js";

export const STALE_AFTER_MS = 1000;
export const TRAIL_MAX = 600;
export const LATENCY_MAX = 120;

export interface CockpitState {
  connected: boolean;
  lastMessageAt: number | null;
  pose: PosePayload | null;
  trail: Array<{ x: number; y: number }>;
  joints: JointsPayload | null;
  caps: CapsPayload | null;
  gesture: GesturePayload | null;
  timeline: string[];
  latencies: number[];
  toast: string | null;
}

export function initialState(): CockpitState {
  return {
    connected: false,
    lastMessageAt: null,
    pose: null,
    trail: [],
    joints: null,
    caps: null,
    gesture: null,
    timeline: [],
    latencies: [],
    toast: null,
  };
}

export function applyMessage(state: CockpitState, msg: BusMessage, now: number): CockpitState {
  const next: CockpitState = { ...state, lastMessageAt: now };
  switch (msg.type) {
    case "pose": {
      next.pose = msg.payload;
      const last = state.trail[state.trail.length - 1];
      if (!last || last.x !== msg.payload.x || last.y !== msg.payload.y) {
        next.trail = [...state.trail, { x: msg.payload.x, y: msg.payload.y }].slice(-TRAIL_MAX);
      }
      break;
    }
    case "joints":
      next.joints = msg.payload;
      break;
    case "caps":
      next.caps = msg.payload;
      break;
    case "gesture": {
      const g: GesturePayload = msg.payload;
      next.gesture = g;
      if (g.dispatched) {
        next.timeline = [...g.plan];
        next.toast = null;
      } else if (g.reason === "busy") {
        next.toast = `arm busy: ${g.label} rejected`;
      }
      break;
    }
    case "latency":
      next.latencies = [...state.latencies, msg.payload.total_ms].slice(-LATENCY_MAX);
      break;
  }
  return next;
}

export function setConnected(state: CockpitState, connected: boolean): CockpitState {
  return { ...state, connected };
}

export function clearToast(state: CockpitState): CockpitState {
  return state.toast === null ? state : { ...state, toast: null };
}

/** True when no message has arrived for over a second (or never). */
export function isStale(state: CockpitState, now: number): boolean {
  if (!state.connected) return true;
  if (state.lastMessageAt === null) return true;
  return now - state.lastMessageAt > STALE_AFTER_MS;
}

export interface LatencySummary {
  count: number;
  last: number;
  mean: number;
  p95: number;
}

export function latencySummary(state: CockpitState): LatencySummary | null {
  const vals = state.latencies;
  if (vals.length === 0) return null;
  const sorted = [...vals].sort((a, b) => a - b);
  const idx = 0.95 * (sorted.length - 1);
  const lo = Math.floor(idx);
  const hi = Math.ceil(idx);
  const p95 = lo === hi ? sorted[lo] : sorted[lo] * (1 - (idx - lo)) + sorted[hi] * (idx - lo);
  return {
    count: vals.length,
    last: vals[vals.length - 1],
    mean: vals.reduce((a, b) => a + b, 0) / vals.length,
    p95,
  };
}
