/**
 * Pose sources: anything that emits frames in the server's 9-keypoint schema.
 *
 * The landmark tracker is pluggable behind this boundary — a webcam-backed
 * tracker adapter lives in tracker.ts, and SimulatedPoseSource drives tests
 * and camera-less demos. Emission is throttled to the server tick rate.
 */

import type { Keypoint, PoseKeypoints, PosePayload } from "./protocol.js";

export const EMIT_INTERVAL_MS = 50; // 20 Hz, the server's fixed tick

export type PoseListener = (payload: PosePayload) => void;

export interface PoseSource {
  start(listener: PoseListener): void;
  stop(): void;
}

/** Drops frames so at most one goes out per server tick interval. */
export class PoseThrottle {
  private lastEmit = -Infinity;

  constructor(private readonly intervalMs: number = EMIT_INTERVAL_MS) {}

  admit(nowMs: number): boolean {
    if (nowMs - this.lastEmit < this.intervalMs) {
      return false;
    }
    this.lastEmit = nowMs;
    return true;
  }
}

export interface NeutralPoseOptions {
  dx?: number;
  dy?: number;
  mouthOpen?: boolean;
  spanScale?: number;
}

const clamp01 = (v: number): number => Math.min(1, Math.max(0, v));

const point = (x: number, y: number, c = 1): Keypoint => [clamp01(x), clamp01(y), c];

/**
 * The same seated rig the headless simulator uses: nose at (0.5, 0.4),
 * shoulders 0.30 apart, mouth row at y + 0.05 with width 0.10.
 */
export function neutralPose(options: NeutralPoseOptions = {}): PoseKeypoints {
  const dx = options.dx ?? 0;
  const dy = options.dy ?? 0;
  const nx = 0.5 + dx;
  const ny = 0.4 + dy;
  const halfSpan = 0.15 * (options.spanScale ?? 1);
  const gap = options.mouthOpen ? 0.025 : 0.005;
  return {
    nose: point(nx, ny),
    left_eye: point(nx - 0.04, ny - 0.04),
    right_eye: point(nx + 0.04, ny - 0.04),
    left_shoulder: point(nx - halfSpan, ny + 0.15),
    right_shoulder: point(nx + halfSpan, ny + 0.15),
    mouth_left: point(nx - 0.05, ny + 0.05),
    mouth_right: point(nx + 0.05, ny + 0.05),
    mouth_top: point(nx, ny + 0.05 - gap),
    mouth_bottom: point(nx, ny + 0.05 + gap),
  };
}

export interface SimulatedPoseOptions {
  /** sway amplitude in tile units, 0 disables */
  swayAmplitude?: number;
  swayPeriodMs?: number;
  /** open/closed mouth cycle, 0 disables */
  mouthOpenMs?: number;
  mouthClosedMs?: number;
  intervalMs?: number;
}

/**
 * Camera-less source: a gentle sway plus a mouth open/close cycle, emitted on
 * a timer at the tick rate. Used by the smoke test and spectator demos.
 */
export class SimulatedPoseSource implements PoseSource {
  private timer: ReturnType<typeof setInterval> | null = null;
  private startedAt = 0;
  private readonly options: Required<SimulatedPoseOptions>;

  constructor(options: SimulatedPoseOptions = {}) {
    this.options = {
      swayAmplitude: options.swayAmplitude ?? 0.12,
      swayPeriodMs: options.swayPeriodMs ?? 4000,
      mouthOpenMs: options.mouthOpenMs ?? 600,
      mouthClosedMs: options.mouthClosedMs ?? 900,
      intervalMs: options.intervalMs ?? EMIT_INTERVAL_MS,
    };
  }

  poseAt(tMs: number): PosePayload {
    const { swayAmplitude, swayPeriodMs, mouthOpenMs, mouthClosedMs } = this.options;
    const dx =
      swayAmplitude > 0
        ? swayAmplitude * Math.sin((2 * Math.PI * tMs) / swayPeriodMs)
        : 0;
    const cycle = mouthOpenMs + mouthClosedMs;
    const mouthOpen = cycle > 0 ? tMs % cycle < mouthOpenMs : false;
    return { t_ms: tMs, keypoints: neutralPose({ dx, mouthOpen }) };
  }

  start(listener: PoseListener): void {
    this.stop();
    this.startedAt = Date.now();
    this.timer = setInterval(() => {
      listener(this.poseAt(Date.now() - this.startedAt));
    }, this.options.intervalMs);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }
}
