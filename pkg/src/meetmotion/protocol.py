"""Versioned JSON wire protocol shared by the session server and clients.

One UTF-8 JSON object per WebSocket text frame:

    {"v": 1, "type": "...", "seq": N, "ts": MS, "sid": "...", "payload": {...}}

Unknown payload fields are ignored by handlers but survive encode/decode, so
round-trips are lossless and old servers tolerate newer clients.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict

from meetmotion.gestures import Keypoint, KeypointSet, PoseFrame, KEYPOINT_NAMES

PROTOCOL_VERSION = 1

CLIENT_TYPES = ("hello", "join", "pose", "start_game", "leave")
SERVER_TYPES = (
    "welcome",
    "roster",
    "break_prompt",
    "game_started",
    "snapshot",
    "game_over",
    "error",
)


class ProtocolError(ValueError):
    """Decode/validation failure; ``code`` is the wire error code to reply with."""

    def __init__(self, code: str, message: str) -> None:
        super().__init__(message)
        self.code = code


@dataclass
class WireMessage:
    type: str
    payload: Dict[str, Any] = field(default_factory=dict)
    seq: int = 0
    ts: int = 0
    sid: str = ""
    v: int = PROTOCOL_VERSION


def encode(message: WireMessage) -> str:
    return json.dumps(
        {
            "v": message.v,
            "type": message.type,
            "seq": message.seq,
            "ts": message.ts,
            "sid": message.sid,
            "payload": message.payload,
        },
        sort_keys=True,
        separators=(",", ":"),
    )


def decode(raw: str | bytes) -> WireMessage:
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ProtocolError("malformed-json", f"not utf-8: {exc}") from exc
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ProtocolError("malformed-json", f"bad json: {exc}") from exc
    if not isinstance(obj, dict):
        raise ProtocolError("malformed-json", "envelope must be a JSON object")
    version = obj.get("v")
    if version != PROTOCOL_VERSION:
        raise ProtocolError("bad-version", f"unsupported protocol version {version!r}")
    msg_type = obj.get("type")
    if not isinstance(msg_type, str) or not msg_type:
        raise ProtocolError("malformed-json", "type must be a non-empty string")
    seq = obj.get("seq", 0)
    ts = obj.get("ts", 0)
    if not isinstance(seq, int) or isinstance(seq, bool) or seq < 0:
        raise ProtocolError("malformed-json", "seq must be a nonnegative integer")
    if not isinstance(ts, int) or isinstance(ts, bool) or ts < 0:
        raise ProtocolError("malformed-json", "ts must be a nonnegative integer")
    sid = obj.get("sid", "")
    if not isinstance(sid, str):
        raise ProtocolError("malformed-json", "sid must be a string")
    payload = obj.get("payload", {})
    if not isinstance(payload, dict):
        raise ProtocolError("malformed-json", "payload must be an object")
    return WireMessage(type=msg_type, payload=payload, seq=seq, ts=ts, sid=sid, v=version)


def parse_pose_payload(participant_id: str, payload: Dict[str, Any]) -> PoseFrame:
    """Validate a ``pose`` payload into a PoseFrame (coordinates clamp on build)."""
    t_ms = payload.get("t_ms")
    if not isinstance(t_ms, int) or isinstance(t_ms, bool) or t_ms < 0:
        raise ProtocolError("bad-payload", "pose.t_ms must be a nonnegative integer")
    raw_points = payload.get("keypoints")
    if not isinstance(raw_points, dict):
        raise ProtocolError("bad-payload", "pose.keypoints must be an object")
    points: Dict[str, Keypoint] = {}
    for name in KEYPOINT_NAMES:
        entry = raw_points.get(name)
        if entry is None:
            points[name] = Keypoint(0.0, 0.0, 0.0)  # absent landmark: zero confidence
            continue
        if (
            not isinstance(entry, (list, tuple))
            or len(entry) != 3
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)
        ):
            raise ProtocolError("bad-payload", f"pose.keypoints.{name} must be [x, y, confidence]")
        points[name] = Keypoint(float(entry[0]), float(entry[1]), float(entry[2]))
    return PoseFrame(participant_id=participant_id, t_ms=t_ms, keypoints=KeypointSet(**points))


def pose_payload(frame: PoseFrame) -> Dict[str, Any]:
    """Inverse of parse_pose_payload, used by the simulator and tests."""
    kp = frame.keypoints
    return {
        "t_ms": frame.t_ms,
        "keypoints": {
            name: [kp.point(name).x, kp.point(name).y, kp.point(name).confidence]
            for name in KEYPOINT_NAMES
        },
    }
