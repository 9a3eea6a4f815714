import { describe, expect, it } from "vitest";

import { KEYPOINT_NAMES } from "../src/protocol.js";
import { neutralPose, PoseThrottle, SimulatedPoseSource } from "../src/poseSource.js";
import { mapLandmarks } from "../src/tracker.js";

describe("pose throttle", () => {
  it("never exceeds 20 emissions per second over any window", () => {
    const throttle = new PoseThrottle(50);
    const emitted: number[] = [];
    for (let t = 0; t <= 5000; t += 7) {
      if (throttle.admit(t)) {
        emitted.push(t);
      }
    }
    for (const start of [0, 1234, 2500]) {
      const inWindow = emitted.filter((t) => t >= start && t < start + 1000).length;
      expect(inWindow).toBeLessThanOrEqual(20);
    }
    expect(emitted.length).toBeGreaterThan(80); // still streams near the cap
  });
});

describe("simulated pose source", () => {
  it("emits all nine keypoints with confidences", () => {
    const source = new SimulatedPoseSource();
    const payload = source.poseAt(1000);
    for (const name of KEYPOINT_NAMES) {
      const point = payload.keypoints[name];
      expect(point).toHaveLength(3);
      expect(point[0]).toBeGreaterThanOrEqual(0);
      expect(point[0]).toBeLessThanOrEqual(1);
      expect(point[2]).toBeGreaterThan(0.3);
    }
  });

  it("sways and cycles the mouth deterministically", () => {
    const source = new SimulatedPoseSource({
      swayAmplitude: 0.2,
      swayPeriodMs: 2000,
      mouthOpenMs: 500,
      mouthClosedMs: 500,
    });
    const quarter = source.poseAt(500); // sin peak
    expect(quarter.keypoints.nose[0]).toBeCloseTo(0.7, 5);
    const open = source.poseAt(100);
    const closed = source.poseAt(600);
    const mar = (p: typeof open) =>
      Math.abs(p.keypoints.mouth_top[1] - p.keypoints.mouth_bottom[1]) /
      Math.abs(p.keypoints.mouth_right[0] - p.keypoints.mouth_left[0]);
    expect(mar(open)).toBeGreaterThan(0.35);
    expect(mar(closed)).toBeLessThan(0.25);
  });
});

describe("landmark mapping", () => {
  it("fills the full schema from a face mesh result", () => {
    const face = Array.from({ length: 468 }, (_, i) => ({
      x: (i % 100) / 100,
      y: ((i * 7) % 100) / 100,
    }));
    const payload = mapLandmarks({ faceLandmarks: face }, 640);
    expect(payload.t_ms).toBe(640);
    for (const name of ["nose", "mouth_left", "mouth_right", "mouth_top", "mouth_bottom"] as const) {
      expect(payload.keypoints[name][2]).toBe(1);
    }
    // no body model: shoulders are present but marked invisible
    expect(payload.keypoints.left_shoulder[2]).toBe(0);
    expect(payload.keypoints.right_shoulder[2]).toBe(0);
  });

  it("keeps coordinates unmirrored", () => {
    const pose = neutralPose({ dx: 0.2 });
    expect(pose.nose[0]).toBeCloseTo(0.7);
    expect(pose.left_shoulder[0]).toBeLessThan(pose.right_shoulder[0]);
  });
});
