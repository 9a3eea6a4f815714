/**
 * Wire protocol shared with the session server: one JSON envelope per
 * WebSocket text frame. Unknown payload fields are ignored but preserved.
 */

export const PROTOCOL_VERSION = 1;

export type GameId = "frost" | "food_rain" | "virus_hitter";

export interface WireMessage {
  v: number;
  type: string;
  seq: number;
  ts: number;
  sid: string;
  payload: Record<string, unknown>;
}

export interface RosterEntry {
  pid: string;
  nickname: string;
  join_seq: number;
}

export interface FoodItem {
  id: number;
  type: "fruit" | "dessert";
  x: number;
  y: number;
}

export interface FrostTile {
  cells: number[];
  coverage: number;
  cleared_cells: number;
}

export interface FrostState {
  grid_w: number;
  grid_h: number;
  participants: Record<string, FrostTile>;
}

export interface FoodRainTile {
  score: number;
  items: FoodItem[];
  mouth_open: boolean;
  spawned: number;
  caught: number;
  missed: number;
}

export interface FoodRainState {
  elapsed_ticks: number;
  duration_ticks: number;
  participants: Record<string, FoodRainTile>;
}

export interface Watchtower {
  participant_id: string;
  color: number;
  bombs: number;
  dwell_ms: number;
}

export interface VirusHitterState {
  elapsed_ticks: number;
  duration_ticks: number;
  hitter: string;
  torch_x: number;
  hp: number;
  initial_hp: number;
  outcome: string;
  towers: Watchtower[];
}

export interface Snapshot {
  tick: number;
  game: GameId;
  state: FrostState | FoodRainState | VirusHitterState;
}

/** The nine keypoints the server understands, each as [x, y, confidence]. */
export const KEYPOINT_NAMES = [
  "nose",
  "left_eye",
  "right_eye",
  "left_shoulder",
  "right_shoulder",
  "mouth_left",
  "mouth_right",
  "mouth_top",
  "mouth_bottom",
] as const;

export type KeypointName = (typeof KEYPOINT_NAMES)[number];
export type Keypoint = [number, number, number];
export type PoseKeypoints = Record<KeypointName, Keypoint>;

export interface PosePayload {
  t_ms: number;
  keypoints: PoseKeypoints;
}

export function encode(message: WireMessage): string {
  return JSON.stringify(message);
}

export function decode(raw: string): WireMessage {
  const obj = JSON.parse(raw) as Partial<WireMessage>;
  if (typeof obj !== "object" || obj === null) {
    throw new Error("envelope must be a JSON object");
  }
  if (obj.v !== PROTOCOL_VERSION) {
    throw new Error(`unsupported protocol version ${String(obj.v)}`);
  }
  if (typeof obj.type !== "string" || obj.type.length === 0) {
    throw new Error("missing message type");
  }
  return {
    v: obj.v,
    type: obj.type,
    seq: typeof obj.seq === "number" ? obj.seq : 0,
    ts: typeof obj.ts === "number" ? obj.ts : 0,
    sid: typeof obj.sid === "string" ? obj.sid : "",
    payload: typeof obj.payload === "object" && obj.payload !== null
      ? (obj.payload as Record<string, unknown>)
      : {},
  };
}

/** Stamps outbound envelopes with a per-connection monotone seq. */
export class Envelope {
  private seq = 0;

  constructor(private sid: string = "") {}

  setSession(sid: string): void {
    this.sid = sid;
  }

  wrap(type: string, payload: Record<string, unknown>): string {
    this.seq += 1;
    return encode({
      v: PROTOCOL_VERSION,
      type,
      seq: this.seq,
      ts: Date.now(),
      sid: this.sid,
      payload,
    });
  }
}
