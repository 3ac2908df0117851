/**
 * Wire schema for the teleoperation service's websocket channel.
 *
 * Outbound control messages are encoded canonically (type then payload) so
 * they match the documented schema byte for byte; inbound bus messages are
 * validated structurally and dropped (null) when malformed.
 */

export const GESTURE_LABELS = [
  "idle",
  "up-down",
  "to-fro",
  "left-right",
  "rectangle",
  "rectangle-flat",
  "circle",
] as const;

export type GestureLabel = (typeof GESTURE_LABELS)[number];

export interface PosePayload {
  x: number;
  y: number;
  heading: number;
  v: number;
  w: number;
}

export interface JointsPayload {
  q: number[];
  at_pose: string | null;
  busy: boolean;
  segment: string | null;
}

export interface CapsPayload {
  v_max: number;
  w_max: number;
}

export interface GesturePayload {
  label: string;
  confidence: number;
  dispatched: boolean;
  reason: string;
  plan: string[];
}

export interface LatencyPayload {
  classify_ms: number;
  dispatch_ms: number;
  total_ms: number;
}

export type BusMessage =
  | { type: "pose"; t: number; payload: PosePayload }
  | { type: "joints"; t: number; payload: JointsPayload }
  | { type: "caps"; t: number; payload: CapsPayload }
  | { type: "gesture"; t: number; payload: GesturePayload }
  | { type: "latency"; t: number; payload: LatencyPayload };

const isNum = (v: unknown): v is number => typeof v === "number" && Number.isFinite(v);
const isStr = (v: unknown): v is string => typeof v === "string";

function validPayload(type: string, p: Record<string, unknown>): boolean {
  switch (type) {
    case "pose":
      return isNum(p.x) && isNum(p.y) && isNum(p.heading) && isNum(p.v) && isNum(p.w);
    case "joints":
      return (
        Array.isArray(p.q) &&
        p.q.length === 7 &&
        p.q.every(isNum) &&
        (p.at_pose === null || isStr(p.at_pose)) &&
        typeof p.busy === "boolean" &&
        (p.segment === null || isStr(p.segment))
      );
    case "caps":
      return isNum(p.v_max) && isNum(p.w_max);
    case "gesture":
      return (
        isStr(p.label) &&
        isNum(p.confidence) &&
        typeof p.dispatched === "boolean" &&
        isStr(p.reason) &&
        Array.isArray(p.plan) &&
        p.plan.every(isStr)
      );
    case "latency":
      return isNum(p.classify_ms) && isNum(p.dispatch_ms) && isNum(p.total_ms);
    default:
      return false;
  }
}

/** Parse one websocket frame; null means "not a displayable bus message". */
export function parseBusMessage(text: string): BusMessage | null {
  let obj: unknown;
  try {
    obj = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof obj !== "object" || obj === null) return null;
  const rec = obj as Record<string, unknown>;
  if (!isStr(rec.type) || !isNum(rec.t) || rec.t < 0) return null;
  if (typeof rec.payload !== "object" || rec.payload === null) return null;
  if (!validPayload(rec.type, rec.payload as Record<string, unknown>)) return null;
  return rec as unknown as BusMessage;
}

export function encodeCtlTilt(theta: number, phi: number): string {
  return JSON.stringify({ type: "ctl_tilt", payload: { theta, phi } });
}

export function encodeCtlFlex(finger: "index" | "middle"): string {
  return JSON.stringify({ type: "ctl_flex", payload: { finger } });
}

export function encodeCtlGesture(label: GestureLabel): string {
  return JSON.stringify({ type: "ctl_gesture", payload: { label } });
}
