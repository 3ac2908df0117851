/**
 * Tilt pad geometry: pointer position to tilt degrees, send-rate limiting.
 *
 * The pad center maps to (0, 0) and the edges to +/-30 degrees: screen up
 * is pitch forward (+theta), screen right is a clockwise turn (-phi). The
 * 5-degree dead-zone ring and 15-degree threshold ring are drawn at the
 * matching fractions of the pad radius.
 */

export const PAD_MAX_DEG = 30;
export const DEAD_ZONE_DEG = 5;
export const THRESHOLD_DEG = 15;
export const MAX_SEND_HZ = 20;

export interface Tilt {
  theta: number;
  phi: number;
}

export interface PadRect {
  left: number;
  top: number;
  width: number;
  height: number;
}

const clamp = (v: number, lo: number, hi: number) => Math.min(Math.max(v, lo), hi);

export function pointerToTilt(px: number, py: number, rect: PadRect): Tilt {
  const nx = clamp(((px - rect.left) / rect.width) * 2 - 1, -1, 1);
  const ny = clamp(((py - rect.top) / rect.height) * 2 - 1, -1, 1);
  return { theta: -ny * PAD_MAX_DEG, phi: -nx * PAD_MAX_DEG };
}

/** Ring radius (as a fraction of the pad half-size) for a tilt magnitude. */
export function ringFraction(deg: number): number {
  return clamp(deg / PAD_MAX_DEG, 0, 1);
}

/** Allows at most one send per interval; the pad samples pointer moves. */
export class RateLimiter {
  private lastAt = -Infinity;

  constructor(readonly minIntervalMs: number = 1000 / MAX_SEND_HZ) {}

  allow(nowMs: number): boolean {
    if (nowMs - this.lastAt >= this.minIntervalMs) {
      this.lastAt = nowMs;
      return true;
    }
    return false;
  }

  reset(): void {
    this.lastAt = -Infinity;
  }
}
