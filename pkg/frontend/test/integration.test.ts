/**
 * Live integration against the real service: spawns `teleglove sim --serve`
 * and drives it through the websocket channel using the cockpit's own
 * protocol and state modules. Skipped when the Python stack is missing.
 */

import { spawn, spawnSync } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import WebSocket from "ws";

import { encodeCtlFlex, encodeCtlGesture, encodeCtlTilt, parseBusMessage } from "../src/protocol.js";
import { applyMessage, initialState, setConnected, type CockpitState } from "../src/state.js";

const PYTHON = process.env.TELEGLOVE_PYTHON ?? "python3";

const havePython =
  spawnSync(PYTHON, ["-c", "import teleglove"], { timeout: 20_000 }).status === 0;

// short pose durations keep arm moves fast; home keeps the 130-degree joint
const FAST_POSES = [
  "home 2.268928 0.2618 0 1.0472 0 0.5236 0 0.3",
  "pickup 0.7854 0.9599 0.1745 1.7453 0.0873 0.6981 0.3491 0.4",
  "place -0.5236 0.6981 -0.2618 1.3963 0.1745 0.8727 -0.1745 0.4",
  "place2 -1.0472 0.5236 -0.3491 1.2217 0.2618 1.0472 -0.3491 0.4",
  "place3 -1.3963 1.0472 -0.1745 1.9199 0.0873 0.3491 -0.5236 0.4",
  "top 0.1745 -0.5236 0.0873 0.6981 -0.1745 1.2217 0.1745 0.4",
].join("\n");

describe.skipIf(!havePython)("cockpit against a live service", () => {
  let proc: ReturnType<typeof spawn>;
  let ws: WebSocket;
  let state: CockpitState = initialState();
  const poseTimestamps: number[] = [];

  const send = (text: string) => ws.send(text);
  const waitFor = async (pred: (s: CockpitState) => boolean, ms: number, what: string) => {
    const deadline = Date.now() + ms;
    while (Date.now() < deadline) {
      if (pred(state)) return;
      await new Promise((r) => setTimeout(r, 25));
    }
    throw new Error(`timed out waiting for ${what}`);
  };

  beforeAll(async () => {
    const dir = mkdtempSync(join(tmpdir(), "cockpit-it-"));
    const posesPath = join(dir, "poses.txt");
    writeFileSync(posesPath, FAST_POSES + "\n");
    proc = spawn(
      PYTHON,
      ["-m", "teleglove.cli", "sim", "--serve", "--port", "0",
       "--poses", posesPath, "--duration", "60s", "--out", join(dir, "logs")],
      { stdio: ["ignore", "pipe", "pipe"] },
    );
    const port = await new Promise<number>((resolve, reject) => {
      const timer = setTimeout(() => reject(new Error("service did not announce a port")), 20_000);
      proc.stdout!.on("data", (chunk: Buffer) => {
        const m = /ws:\/\/[\d.]+:(\d+)/.exec(chunk.toString());
        if (m) {
          clearTimeout(timer);
          resolve(Number(m[1]));
        }
      });
      proc.on("exit", (code) => reject(new Error(`service exited early (${code})`)));
    });

    ws = new WebSocket(`ws://127.0.0.1:${port}`);
    ws.on("message", (data) => {
      const msg = parseBusMessage(data.toString());
      if (msg) {
        state = applyMessage(state, msg, performance.now());
        if (msg.type === "pose") poseTimestamps.push(performance.now());
      }
    });
    await new Promise<void>((resolve, reject) => {
      ws.once("open", () => resolve());
      ws.once("error", reject);
    });
    state = setConnected(state, true);
  }, 40_000);

  afterAll(() => {
    ws?.close();
    proc?.kill("SIGINT");
  });

  it("renders pose, joints, and caps from live broadcasts at >= 10 Hz", async () => {
    await waitFor((s) => !!(s.pose && s.joints && s.caps), 5000, "first broadcast triple");
    const before = poseTimestamps.length;
    await new Promise((r) => setTimeout(r, 2000));
    const received = poseTimestamps.length - before;
    expect(received).toBeGreaterThanOrEqual(15); // 10 Hz nominal, with margin
  }, 15_000);

  it("tilt-pad input produces visible base motion", async () => {
    await waitFor((s) => !!s.pose, 5000, "pose");
    const x0 = state.pose!.x;
    const drive = setInterval(() => send(encodeCtlTilt(25, 0)), 80);
    await new Promise((r) => setTimeout(r, 1500));
    clearInterval(drive);
    send(encodeCtlTilt(0, 0));
    await waitFor((s) => s.pose!.x - x0 > 0.3, 3000, "base displacement");
  }, 15_000);

  it("eight index presses saturate the caps display at 1.00 via echo", async () => {
    for (let i = 0; i < 8; i++) send(encodeCtlFlex("index"));
    await waitFor((s) => s.caps?.v_max === 1.0, 4000, "caps echo at 1.00");
    expect(state.caps!.w_max).toBe(1.0);
  }, 10_000);

  it("a non-home gesture shows the homing-then-target timeline", async () => {
    send(encodeCtlGesture("to-fro")); // from home: direct pickup
    await waitFor((s) => s.timeline.join(">") === "pickup", 5000, "pickup plan");
    await waitFor((s) => s.joints?.at_pose === "pickup", 8000, "arrival at pickup");
    send(encodeCtlGesture("rectangle")); // away from home now
    await waitFor(
      (s) => s.timeline.join(">") === "home>place2",
      5000,
      "homing-then-target timeline",
    );
    await waitFor((s) => s.joints?.at_pose === "place2", 8000, "arrival at place2");
  }, 30_000);
});
