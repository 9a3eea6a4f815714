"""Authoritative session service: lobby and roster, break scheduling, the
20 Hz fixed-timestep loop, game lifecycle, and results persistence.

Transport-free by design: callers push decoded wire messages in and drive
time explicitly through ``advance(now_ms)``, and every method returns the
outbound messages to deliver. Replaying the same inbound log with the same
timestamps reproduces the same outbound payloads byte for byte.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from meetmotion.catalog import MeetingContext, default_catalog, recommend
from meetmotion.games import (
    GameConfig,
    GameError,
    GameKind,
    Participant,
    TickInputs,
    game_init,
)
from meetmotion.gestures import (
    GestureEvent,
    GestureTracker,
    PoseFrame,
    StaleFrameError,
    UnknownParticipantError,
)
from meetmotion.persistence import ResultsStore, results_record
from meetmotion.prng import mix_seed
from meetmotion.protocol import (
    ProtocolError,
    WireMessage,
    decode,
    parse_pose_payload,
)

TICK_MS = 50
CATCHUP_CAP = 10

PHASES = ("lobby", "meeting", "break", "in_game", "ended")


class SessionError(ValueError):
    def __init__(self, code: str, message: str) -> None:
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class SessionConfig:
    break_interval_s: float = 1200.0
    break_length_s: float = 300.0
    tick_ms: int = TICK_MS
    layout: str = "symmetric"        # break-prompt recommendation context
    privacy: float = 0.5
    attention_budget: float = 0.5
    game_config: GameConfig = field(default_factory=GameConfig)

    def validate(self) -> None:
        if self.tick_ms != TICK_MS:
            raise SessionError("invalid-config", f"tick rate is fixed at {1000 // TICK_MS} Hz")
        if not self.break_length_s > 0:
            raise SessionError("invalid-config", "break_length_s must be positive")
        if not self.break_interval_s > self.break_length_s:
            raise SessionError("invalid-config", "break_interval_s must exceed break_length_s")
        if self.layout not in ("symmetric", "asymmetric"):
            raise SessionError("invalid-config", f"bad layout {self.layout!r}")
        self.game_config.validate()


@dataclass(frozen=True)
class Outbound:
    """A message to deliver: ``target`` is a connection id or ``session:<sid>``
    (broadcast to every connection joined to that session)."""

    target: str
    type: str
    payload: dict


@dataclass
class _Connection:
    conn_id: str
    nickname: Optional[str] = None
    sid: Optional[str] = None
    pid: Optional[str] = None


class Session:
    def __init__(self, sid: str, config: SessionConfig, seed: int) -> None:
        config.validate()
        self.sid = sid
        self.config = config
        self.seed = seed
        self.phase = "lobby"
        self.prior_phase = "meeting"
        self.tick = 0
        self.roster: List[Participant] = []
        self._join_counter = itertools.count()
        self.trackers: Dict[str, GestureTracker] = {}
        self.pending_frames: Dict[str, List[PoseFrame]] = {}
        self.game = None
        self.episode_index = 0
        self.rep_counts: Dict[str, Dict[str, int]] = {}
        interval_ticks = round(config.break_interval_s * 1000 / TICK_MS)
        self._interval_ticks = interval_ticks
        self._break_ticks = round(config.break_length_s * 1000 / TICK_MS)
        self.next_break_tick: Optional[int] = None
        self.break_end_tick: Optional[int] = None
        self.next_tick_at_ms: Optional[int] = None

    @property
    def join_order(self) -> Dict[str, int]:
        return {p.participant_id: p.join_seq for p in self.roster}

    def nickname_for(self, base: str) -> str:
        taken = {p.nickname for p in self.roster}
        if base not in taken:
            return base
        k = 2
        while f"{base}#{k}" in taken:
            k += 1
        return f"{base}#{k}"


class SessionService:
    """All sessions plus their connections; one logical executor per process.

    Methods are synchronous and must be called from a single task/thread per
    service instance (the network layer serializes through an asyncio lock).
    """

    def __init__(self, data_dir: Path | str | None = None) -> None:
        self.sessions: Dict[str, Session] = {}
        self.connections: Dict[str, _Connection] = {}
        self.store = ResultsStore(data_dir) if data_dir is not None else None
        self.default_sid: Optional[str] = None
        self._sid_counter = itertools.count(1)

    # -- lifecycle -----------------------------------------------------------

    def create_session(
        self,
        config: SessionConfig | None = None,
        seed: int = 0,
        sid: str | None = None,
    ) -> str:
        config = config if config is not None else SessionConfig()
        config.validate()
        if sid is None:
            sid = f"s{next(self._sid_counter)}"
        if sid in self.sessions:
            raise SessionError("invalid-config", f"session id {sid!r} already exists")
        self.sessions[sid] = Session(sid, config, seed)
        if self.default_sid is None:
            self.default_sid = sid
        return sid

    def end_session(self, sid: str) -> None:
        session = self._session(sid)
        session.phase = "ended"

    def register_connection(self, conn_id: str) -> None:
        self.connections[conn_id] = _Connection(conn_id)

    def drop_connection(self, conn_id: str) -> List[Outbound]:
        conn = self.connections.pop(conn_id, None)
        if conn is None or conn.sid is None or conn.pid is None:
            return []
        return self._leave(conn)

    # -- inbound -------------------------------------------------------------

    def handle_message(self, conn_id: str, raw: str | bytes, now_ms: int) -> List[Outbound]:
        """Decode and dispatch one client frame; never raises on bad input."""
        conn = self.connections.get(conn_id)
        if conn is None:
            self.register_connection(conn_id)
            conn = self.connections[conn_id]
        try:
            message = decode(raw)
        except ProtocolError as exc:
            return [_error(conn_id, exc.code, str(exc))]
        try:
            return self._dispatch(conn, message, now_ms)
        except ProtocolError as exc:
            return [_error(conn_id, exc.code, str(exc))]
        except SessionError as exc:
            return [_error(conn_id, exc.code, str(exc))]
        except GameError as exc:
            code = "too-few-participants" if "participants" in str(exc) else "game-error"
            return [_error(conn_id, code, str(exc))]
        except Exception as exc:  # hostile payloads must never kill the loop
            return [_error(conn_id, "bad-payload", f"unprocessable message: {exc}")]

    def _dispatch(self, conn: _Connection, message: WireMessage, now_ms: int) -> List[Outbound]:
        handler = {
            "hello": self._on_hello,
            "join": self._on_join,
            "pose": self._on_pose,
            "start_game": self._on_start_game,
            "leave": self._on_leave,
        }.get(message.type)
        if handler is None:
            raise ProtocolError("unknown-type", f"unknown message type {message.type!r}")
        return handler(conn, message, now_ms)

    def _on_hello(self, conn: _Connection, message: WireMessage, now_ms: int) -> List[Outbound]:
        nickname = message.payload.get("nickname", "")
        conn.nickname = _validate_nickname(nickname)
        return []

    def _on_join(self, conn: _Connection, message: WireMessage, now_ms: int) -> List[Outbound]:
        if conn.nickname is None:
            raise SessionError("invalid-nickname", "send hello with a nickname before join")
        sid = message.payload.get("sid") or message.sid or self.default_sid
        if not sid:
            raise SessionError("no-such-session", "no session id given and no default session")
        session = self._session(sid)
        if session.phase == "ended":
            raise SessionError("session-ended", f"session {sid} has ended")
        pid, roster_msg = self._join(session, conn.nickname)
        conn.sid = sid
        conn.pid = pid
        return [Outbound(conn.conn_id, "welcome", {"pid": pid, "sid": sid}), roster_msg]

    def _on_pose(self, conn: _Connection, message: WireMessage, now_ms: int) -> List[Outbound]:
        if conn.sid is None or conn.pid is None:
            raise SessionError("not-joined", "join a session before sending pose frames")
        session = self._session(conn.sid)
        frame = parse_pose_payload(conn.pid, message.payload)
        session.pending_frames.setdefault(conn.pid, []).append(frame)
        return []

    def _on_start_game(self, conn: _Connection, message: WireMessage, now_ms: int) -> List[Outbound]:
        if conn.sid is None or conn.pid is None:
            raise SessionError("not-joined", "join a session before starting a game")
        kind_raw = message.payload.get("game", "")
        trigger = message.payload.get("trigger", "break")
        try:
            kind = GameKind(kind_raw)
        except ValueError:
            raise ProtocolError("bad-payload", f"unknown game {kind_raw!r}")
        if trigger not in ("break", "mid_meeting"):
            raise ProtocolError("bad-payload", f"bad trigger {trigger!r}")
        return self.start_game(conn.sid, kind, trigger)

    def _on_leave(self, conn: _Connection, message: WireMessage, now_ms: int) -> List[Outbound]:
        if conn.sid is None or conn.pid is None:
            return []
        out = self._leave(conn)
        conn.sid = None
        conn.pid = None
        return out

    # -- session operations ----------------------------------------------------

    def join(self, sid: str, nickname: str) -> Tuple[str, List[Outbound]]:
        """Headless join (no connection); returns (pid, broadcasts)."""
        session = self._session(sid)
        if session.phase == "ended":
            raise SessionError("session-ended", f"session {sid} has ended")
        pid, roster_msg = self._join(session, _validate_nickname(nickname))
        return pid, [roster_msg]

    def _join(self, session: Session, nickname: str) -> Tuple[str, Outbound]:
        join_seq = next(session._join_counter)
        pid = f"p{join_seq}"
        participant = Participant(pid, session.nickname_for(nickname), join_seq)
        session.roster.append(participant)
        session.trackers[pid] = GestureTracker()
        session.pending_frames[pid] = []
        if session.phase == "lobby":
            session.phase = "meeting"  # the meeting is on once anyone is present
            session.next_break_tick = session.tick + session._interval_ticks
        return pid, self._roster_broadcast(session)

    def _leave(self, conn: _Connection) -> List[Outbound]:
        session = self.sessions.get(conn.sid or "")
        if session is None:
            return []
        session.roster = [p for p in session.roster if p.participant_id != conn.pid]
        return [self._roster_broadcast(session)]

    def start_game(self, sid: str, kind: GameKind, trigger: str) -> List[Outbound]:
        session = self._session(sid)
        if session.phase == "ended":
            raise SessionError("session-ended", f"session {sid} has ended")
        if session.game is not None:
            raise SessionError("game-active", "a game is already running")
        if not session.roster:
            raise SessionError("too-few-participants", "nobody has joined this session")
        seed = mix_seed(session.seed, session.episode_index)
        try:
            game = game_init(kind, list(session.roster), session.config.game_config, seed)
        except GameError as exc:
            code = "too-many-participants" if "at most" in str(exc) else "too-few-participants"
            raise SessionError(code, str(exc))
        session.game = game
        session.episode_index += 1
        session.rep_counts = {
            p.participant_id: {} for p in session.roster
        }
        if session.phase in ("meeting", "break"):
            session.prior_phase = session.phase
        session.phase = "in_game"
        profile = next((p for p in default_catalog() if p.game == kind.value), None)
        warning = bool(
            profile is not None
            and profile.start_time != "either"
            and profile.start_time != trigger
        )
        payload = {
            "game": kind.value,
            "seed": seed,
            "config": session.config.game_config.to_dict(),
            "warning": warning,
        }
        return [Outbound(f"session:{sid}", "game_started", payload)]

    def end_game(self, sid: str, now_ms: int) -> List[Outbound]:
        session = self._session(sid)
        if session.game is None:
            raise SessionError("no-active-game", "no game is running")
        return self._finish_game(session, now_ms)

    def _finish_game(self, session: Session, now_ms: int) -> List[Outbound]:
        game = session.game
        if not game.terminal:
            game.end()
        results = game.results(session.rep_counts)
        if self.store is not None:
            self.store.append(results_record(now_ms, session.sid, results))
        session.game = None
        session.phase = session.prior_phase
        return [Outbound(f"session:{session.sid}", "game_over", {"results": results.to_dict()})]

    # -- time ------------------------------------------------------------------

    def advance(self, now_ms: int) -> List[Outbound]:
        """Catch each session up to ``now_ms`` in fixed 50 ms ticks (capped at
        10 per call; anything older is dropped so stalls stay bounded)."""
        out: List[Outbound] = []
        for session in list(self.sessions.values()):
            if session.phase == "ended":
                continue
            if session.next_tick_at_ms is None:
                session.next_tick_at_ms = now_ms + TICK_MS
                continue
            ran = 0
            while session.next_tick_at_ms <= now_ms and ran < CATCHUP_CAP:
                out.extend(self._tick(session, session.next_tick_at_ms))
                session.next_tick_at_ms += TICK_MS
                ran += 1
            if session.next_tick_at_ms <= now_ms:
                session.next_tick_at_ms = now_ms + TICK_MS  # drop the backlog
        return out

    def _tick(self, session: Session, now_ms: int) -> List[Outbound]:
        session.tick += 1
        out: List[Outbound] = []
        events, frames = self._drain_inputs(session)
        if session.phase == "meeting":
            if session.next_break_tick is not None and session.tick >= session.next_break_tick:
                session.phase = "break"
                session.break_end_tick = session.tick + session._break_ticks
                out.append(self._break_prompt(session))
        elif session.phase == "break":
            if session.break_end_tick is not None and session.tick >= session.break_end_tick:
                session.phase = "meeting"
                session.next_break_tick = session.tick + session._interval_ticks
        elif session.phase == "in_game" and session.game is not None:
            for event in events:
                counts = session.rep_counts.setdefault(event.participant_id, {})
                counts[event.kind.value] = counts.get(event.kind.value, 0) + 1
            inputs = TickInputs.sorted_inputs(events, frames, session.join_order)
            session.game.tick(inputs)
            snapshot = {
                "tick": session.tick,
                "game": session.game.kind.value,
                "state": session.game.state_dict(),
            }
            out.append(Outbound(f"session:{session.sid}", "snapshot", snapshot))
            if session.game.terminal:
                out.extend(self._finish_game(session, now_ms))
        return out

    def _drain_inputs(self, session: Session) -> Tuple[List[GestureEvent], List[PoseFrame]]:
        """Feed queued pose frames through the gesture trackers every tick so
        baselines stay warm between games."""
        join_order = session.join_order
        frames: List[PoseFrame] = []
        for pid in [p.participant_id for p in session.roster]:
            frames.extend(session.pending_frames.get(pid, ()))
            session.pending_frames[pid] = []
        frames.sort(key=lambda f: (f.t_ms, join_order.get(f.participant_id, 1 << 30)))
        events: List[GestureEvent] = []
        for frame in frames:
            tracker = session.trackers.get(frame.participant_id)
            if tracker is None:
                continue
            try:
                events.extend(tracker.ingest(frame))
            except (StaleFrameError, UnknownParticipantError):
                continue  # late or misaddressed frames are dropped, not fatal
        return events, frames

    def _break_prompt(self, session: Session) -> Outbound:
        context = MeetingContext(
            phase="break",
            layout=session.config.layout,
            privacy=session.config.privacy,
            attention_budget=session.config.attention_budget,
        )
        suggestions = recommend(context, default_catalog())
        return Outbound(f"session:{session.sid}", "break_prompt", {"suggestions": suggestions})

    # -- helpers -----------------------------------------------------------------

    def _session(self, sid: str) -> Session:
        session = self.sessions.get(sid)
        if session is None:
            raise SessionError("no-such-session", f"no session {sid!r}")
        return session

    def _roster_broadcast(self, session: Session) -> Outbound:
        return Outbound(
            f"session:{session.sid}",
            "roster",
            {
                "participants": [
                    {"pid": p.participant_id, "nickname": p.nickname, "join_seq": p.join_seq}
                    for p in session.roster
                ]
            },
        )

    def connections_in(self, sid: str) -> List[str]:
        return [c.conn_id for c in self.connections.values() if c.sid == sid]


def _validate_nickname(raw: object) -> str:
    if not isinstance(raw, str):
        raise SessionError("invalid-nickname", "nickname must be a string")
    nickname = raw.strip()
    if not 1 <= len(nickname) <= 24 or not nickname.isprintable():
        raise SessionError(
            "invalid-nickname", "nickname must be 1-24 printable characters"
        )
    return nickname


def _error(conn_id: str, code: str, msg: str) -> Outbound:
    return Outbound(conn_id, "error", {"code": code, "msg": msg})
