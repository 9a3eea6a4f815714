/**
 * Pluggable landmark tracking behind the 9-keypoint mapping boundary.
 *
 * Any face/pose landmark model can drive the client as long as it yields
 * normalized [0,1] coordinates; the default mapping understands the common
 * 468-point face mesh (nose tip, eye corners, lip landmarks) plus an optional
 * upper-body model for the shoulders. Keypoints are emitted in unmirrored
 * server-frame coordinates even though the self-view renders mirrored.
 */

import type { Keypoint, PoseKeypoints, PosePayload } from "./protocol.js";
import { EMIT_INTERVAL_MS, PoseSource, PoseListener, PoseThrottle } from "./poseSource.js";

export interface NormalizedLandmark {
  x: number;
  y: number;
  visibility?: number;
}

/** Result shape produced by common in-browser landmark trackers. */
export interface LandmarkResult {
  faceLandmarks?: NormalizedLandmark[];
  poseLandmarks?: NormalizedLandmark[];
}

export interface LandmarkDetector {
  detect(video: HTMLVideoElement, timestampMs: number): LandmarkResult | null;
}

// 468-point face mesh indices
const FACE = {
  noseTip: 1,
  leftEyeOuter: 33,
  rightEyeOuter: 263,
  mouthLeft: 61,
  mouthRight: 291,
  upperLip: 13,
  lowerLip: 14,
};

// upper-body model indices (shoulders)
const BODY = { leftShoulder: 11, rightShoulder: 12 };

const missing: Keypoint = [0, 0, 0];

function toKeypoint(landmark: NormalizedLandmark | undefined): Keypoint {
  if (!landmark) {
    return missing;
  }
  const confidence = landmark.visibility ?? 1;
  return [landmark.x, landmark.y, confidence];
}

/** Maps a tracker result to the server schema; absent points carry confidence 0. */
export function mapLandmarks(result: LandmarkResult, tMs: number): PosePayload {
  const face = result.faceLandmarks ?? [];
  const body = result.poseLandmarks ?? [];
  const keypoints: PoseKeypoints = {
    nose: toKeypoint(face[FACE.noseTip]),
    left_eye: toKeypoint(face[FACE.leftEyeOuter]),
    right_eye: toKeypoint(face[FACE.rightEyeOuter]),
    left_shoulder: toKeypoint(body[BODY.leftShoulder]),
    right_shoulder: toKeypoint(body[BODY.rightShoulder]),
    mouth_left: toKeypoint(face[FACE.mouthLeft]),
    mouth_right: toKeypoint(face[FACE.mouthRight]),
    mouth_top: toKeypoint(face[FACE.upperLip]),
    mouth_bottom: toKeypoint(face[FACE.lowerLip]),
  };
  return { t_ms: tMs, keypoints };
}

export type CameraFailure = "no-camera" | "tracker-unavailable";

/**
 * Webcam-backed source: runs the injected detector against the video element
 * on an animation loop and throttles emission to the server tick rate.
 * Failure to acquire the camera or detector degrades to spectator mode
 * (onFailure fires; no frames are ever emitted).
 */
export class CameraPoseSource implements PoseSource {
  private running = false;
  private startedAt = 0;
  private readonly throttle = new PoseThrottle(EMIT_INTERVAL_MS);

  constructor(
    private readonly video: HTMLVideoElement,
    private readonly detector: LandmarkDetector,
    private readonly onFailure: (reason: CameraFailure) => void,
  ) {}

  async open(): Promise<boolean> {
    try {
      const stream = await navigator.mediaDevices.getUserMedia({ video: true });
      this.video.srcObject = stream;
      await this.video.play();
      return true;
    } catch {
      this.onFailure("no-camera");
      return false;
    }
  }

  start(listener: PoseListener): void {
    this.running = true;
    this.startedAt = performance.now();
    const step = () => {
      if (!this.running) {
        return;
      }
      const now = performance.now();
      if (this.throttle.admit(now)) {
        const tMs = Math.round(now - this.startedAt);
        let result: LandmarkResult | null = null;
        try {
          result = this.detector.detect(this.video, tMs);
        } catch {
          this.running = false;
          this.onFailure("tracker-unavailable");
          return;
        }
        if (result) {
          listener(mapLandmarks(result, tMs));
        }
      }
      requestAnimationFrame(step);
    };
    requestAnimationFrame(step);
  }

  stop(): void {
    this.running = false;
    const stream = this.video.srcObject as MediaStream | null;
    stream?.getTracks().forEach((track) => track.stop());
    this.video.srcObject = null;
  }
}
