import { describe, expect, it } from "vitest";

import type { BusMessage } from "../src/protocol.js";
import {
  LATENCY_MAX,
  TRAIL_MAX,
  applyMessage,
  clearToast,
  initialState,
  isStale,
  latencySummary,
  setConnected,
} from "../src/state.js";

const pose = (x: number, y: number, t = 0): BusMessage => ({
  type: "pose",
  t,
  payload: { x, y, heading: 0, v: 0.5, w: 0 },
});

const caps = (v: number): BusMessage => ({
  type: "caps",
  t: 0,
  payload: { v_max: v, w_max: v },
});

const gesture = (over: Partial<BusMessage & { payload: object }>["payload"] = {}): BusMessage => ({
  type: "gesture",
  t: 0,
  payload: {
    label: "to-fro",
    confidence: 0.9,
    dispatched: true,
    reason: "",
    plan: ["home", "pickup"],
    ...over,
  },
});

describe("reducer", () => {
  it("pose updates come only from messages and feed the trail", () => {
    let s = initialState();
    s = applyMessage(s, pose(0.1, 0), 100);
    s = applyMessage(s, pose(0.2, 0.05), 200);
    expect(s.pose?.x).toBeCloseTo(0.2);
    expect(s.trail).toEqual([
      { x: 0.1, y: 0 },
      { x: 0.2, y: 0.05 },
    ]);
  });

  it("trail is capped", () => {
    let s = initialState();
    for (let i = 0; i < TRAIL_MAX + 50; i++) s = applyMessage(s, pose(i, 0), i);
    expect(s.trail).toHaveLength(TRAIL_MAX);
    expect(s.trail[s.trail.length - 1].x).toBe(TRAIL_MAX + 49);
  });

  it("caps change only on caps echo, never on input", () => {
    let s = initialState();
    s = applyMessage(s, pose(0, 0), 0);
    expect(s.caps).toBeNull(); // nothing displayed until the service echoes
    s = applyMessage(s, caps(0.55), 1);
    expect(s.caps?.v_max).toBeCloseTo(0.55);
  });

  it("eight echoed index bends saturate the caps display at 1.00", () => {
    let s = initialState();
    let v = 0.5;
    for (let i = 0; i < 8; i++) {
      v = Math.min(v * 1.1, 1.0);
      s = applyMessage(s, caps(v), i);
    }
    expect(s.caps?.v_max).toBe(1.0);
  });

  it("dispatched gesture installs the homing-then-target timeline", () => {
    let s = initialState();
    s = applyMessage(s, gesture(), 0);
    expect(s.timeline).toEqual(["home", "pickup"]);
    expect(s.toast).toBeNull();
  });

  it("busy rejection raises a toast and keeps the old timeline", () => {
    let s = initialState();
    s = applyMessage(s, gesture(), 0);
    s = applyMessage(s, gesture({ label: "circle", dispatched: false, reason: "busy", plan: [] }), 1);
    expect(s.toast).toContain("circle");
    expect(s.timeline).toEqual(["home", "pickup"]);
    expect(clearToast(s).toast).toBeNull();
  });

  it("latency buffer is rolling and capped", () => {
    let s = initialState();
    for (let i = 0; i < LATENCY_MAX + 10; i++) {
      s = applyMessage(s, { type: "latency", t: i, payload: { classify_ms: 0, dispatch_ms: 0, total_ms: i } }, i);
    }
    expect(s.latencies).toHaveLength(LATENCY_MAX);
    const stats = latencySummary(s)!;
    expect(stats.last).toBe(LATENCY_MAX + 9);
    expect(stats.p95).toBeGreaterThanOrEqual(stats.mean);
  });
});

describe("staleness", () => {
  it("disconnected or silent sessions are stale", () => {
    let s = initialState();
    expect(isStale(s, 0)).toBe(true);
    s = setConnected(s, true);
    expect(isStale(s, 0)).toBe(true); // connected but nothing received yet
    s = applyMessage(s, pose(0, 0), 1000);
    expect(isStale(s, 1500)).toBe(false);
    expect(isStale(s, 2100)).toBe(true); // > 1 s without messages
  });

  it("disconnect flags stale regardless of recency", () => {
    let s = setConnected(initialState(), true);
    s = applyMessage(s, pose(0, 0), 100);
    s = setConnected(s, false);
    expect(isStale(s, 150)).toBe(true);
  });
});
