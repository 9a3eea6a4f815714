/**
 * Client-side session state. The server is authoritative: everything here is
 * a projection of received messages, and snapshots older than the last
 * rendered tick are dropped.
 */

import type { RosterEntry, Snapshot, WireMessage } from "./protocol.js";

export type ConnectionStatus =
  | "disconnected"
  | "connecting"
  | "connected"
  | "failed";

export type LayoutPreview = "symmetric" | "asymmetric";

export interface GameStartedInfo {
  game: string;
  seed: number;
  warning: boolean;
}

export interface ClientState {
  status: ConnectionStatus;
  pid: string | null;
  sid: string | null;
  roster: RosterEntry[];
  snapshot: Snapshot | null;
  lastTick: number;
  activeGame: GameStartedInfo | null;
  lastResults: Record<string, unknown> | null;
  suggestions: Array<{ game: string; score: number }>;
  lastError: { code: string; msg: string } | null;
  layoutPreview: LayoutPreview;
  spectator: boolean;
  droppedSnapshots: number;
}

export function initialState(): ClientState {
  return {
    status: "disconnected",
    pid: null,
    sid: null,
    roster: [],
    snapshot: null,
    lastTick: -1,
    activeGame: null,
    lastResults: null,
    suggestions: [],
    lastError: null,
    layoutPreview: "symmetric",
    spectator: false,
    droppedSnapshots: 0,
  };
}

/** Applies one server message; mutates and returns the state. */
export function applyMessage(state: ClientState, message: WireMessage): ClientState {
  switch (message.type) {
    case "welcome": {
      state.pid = String(message.payload.pid ?? "");
      state.sid = String(message.payload.sid ?? "");
      break;
    }
    case "roster": {
      const entries = message.payload.participants;
      if (Array.isArray(entries)) {
        state.roster = entries as RosterEntry[];
      }
      break;
    }
    case "game_started": {
      state.activeGame = {
        game: String(message.payload.game ?? ""),
        seed: Number(message.payload.seed ?? 0),
        warning: Boolean(message.payload.warning),
      };
      state.snapshot = null;
      state.lastTick = -1;
      break;
    }
    case "snapshot": {
      const tick = Number(message.payload.tick ?? -1);
      if (tick < state.lastTick) {
        state.droppedSnapshots += 1; // late arrival: never render backwards
        break;
      }
      state.lastTick = tick;
      state.snapshot = message.payload as unknown as Snapshot;
      break;
    }
    case "game_over": {
      state.activeGame = null;
      state.lastResults = (message.payload.results ?? null) as Record<
        string,
        unknown
      > | null;
      break;
    }
    case "break_prompt": {
      const suggestions = message.payload.suggestions;
      if (Array.isArray(suggestions)) {
        state.suggestions = suggestions as Array<{ game: string; score: number }>;
      }
      break;
    }
    case "error": {
      state.lastError = {
        code: String(message.payload.code ?? "unknown"),
        msg: String(message.payload.msg ?? ""),
      };
      break;
    }
    default:
      break; // forward compatibility: unknown types are ignored
  }
  return state;
}
