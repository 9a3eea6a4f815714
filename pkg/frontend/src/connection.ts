/**
 * WebSocket client for the session server. The socket constructor is
 * injectable so tests (and Node smoke runs) can supply their own
 * implementation; browsers use the global WebSocket.
 */

import { decode, Envelope, type PosePayload, type WireMessage } from "./protocol.js";
import { applyMessage, initialState, type ClientState } from "./state.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: ((event?: unknown) => void) | null;
  onmessage: ((event: { data: unknown }) => void) | null;
  onclose: ((event?: unknown) => void) | null;
  onerror: ((event?: unknown) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export interface GameClientOptions {
  url: string;
  nickname: string;
  sid?: string;
  socketFactory?: SocketFactory;
  onUpdate?: (state: ClientState) => void;
  onMessage?: (message: WireMessage) => void;
}

export class GameClient {
  readonly state: ClientState = initialState();
  private socket: SocketLike | null = null;
  private readonly envelope = new Envelope();
  private readonly options: GameClientOptions;

  constructor(options: GameClientOptions) {
    this.options = options;
  }

  /** Opens the socket and performs the hello + join handshake. */
  connect(): Promise<ClientState> {
    const factory =
      this.options.socketFactory ??
      ((url: string) => new WebSocket(url) as unknown as SocketLike);
    this.state.status = "connecting";
    this.notify();
    return new Promise((resolve, reject) => {
      let settled = false;
      let socket: SocketLike;
      try {
        socket = factory(this.options.url);
      } catch (error) {
        this.state.status = "failed";
        this.notify();
        reject(error instanceof Error ? error : new Error(String(error)));
        return;
      }
      this.socket = socket;
      socket.onopen = () => {
        this.state.status = "connected";
        this.send("hello", { nickname: this.options.nickname });
        this.send("join", { sid: this.options.sid ?? "" });
        this.notify();
      };
      socket.onmessage = (event) => {
        let message: WireMessage;
        try {
          message = decode(String(event.data));
        } catch {
          return; // a malformed server frame is dropped, not fatal
        }
        applyMessage(this.state, message);
        if (message.type === "welcome" && this.state.sid) {
          this.envelope.setSession(this.state.sid);
          if (!settled) {
            settled = true;
            resolve(this.state);
          }
        }
        if (message.type === "error" && !settled) {
          settled = true;
          reject(new Error(`${this.state.lastError?.code}: ${this.state.lastError?.msg}`));
        }
        this.options.onMessage?.(message);
        this.notify();
      };
      socket.onclose = () => {
        const failedEarly = !settled;
        if (this.state.status !== "failed") {
          this.state.status = failedEarly ? "failed" : "disconnected";
        }
        this.notify();
        if (failedEarly) {
          settled = true;
          reject(new Error("connection-failed"));
        }
      };
      socket.onerror = () => {
        this.state.status = "failed";
        this.notify();
      };
    });
  }

  sendPose(pose: PosePayload): void {
    this.send("pose", pose as unknown as Record<string, unknown>);
  }

  startGame(game: string, trigger: "break" | "mid_meeting"): void {
    this.send("start_game", { game, trigger });
  }

  leave(): void {
    this.send("leave", {});
  }

  close(): void {
    this.socket?.close();
    this.socket = null;
  }

  private send(type: string, payload: Record<string, unknown>): void {
    if (!this.socket || this.state.status === "failed") {
      return;
    }
    this.socket.send(this.envelope.wrap(type, payload));
  }

  private notify(): void {
    this.options.onUpdate?.(this.state);
  }
}
