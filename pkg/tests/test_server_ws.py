"""WebSocket gateway: join flow, broadcasts, live snapshots, bad version."""

import json
import time

from starlette.testclient import TestClient

from meetmotion.protocol import WireMessage, decode, encode, pose_payload
from meetmotion.server import build_server
from meetmotion.session import SessionConfig
from meetmotion.gestures import PoseFrame, neutral_keypoints


def wire(msg_type, payload, sid=""):
    return encode(WireMessage(type=msg_type, payload=payload, sid=sid))


def recv_until(ws, msg_type, limit=50):
    for _ in range(limit):
        message = decode(ws.receive_text())
        if message.type == msg_type:
            return message
    raise AssertionError(f"no {msg_type} message within {limit} frames")


def test_http_info_and_catalog(tmp_path):
    app = build_server(str(tmp_path), tick_driver=False)
    with TestClient(app) as client:
        info = client.get("/").json()
        assert info["default_session"]
        catalog = client.get("/catalog").json()
        assert {p["game"] for p in catalog} == {"frost", "food_rain", "virus_hitter"}


def test_join_and_roster_broadcast(tmp_path):
    app = build_server(str(tmp_path), tick_driver=False)
    with TestClient(app) as client:
        with client.websocket_connect("/ws") as ws1:
            ws1.send_text(wire("hello", {"nickname": "Ana"}))
            ws1.send_text(wire("join", {}))
            welcome = recv_until(ws1, "welcome")
            assert welcome.payload["pid"] == "p0"
            roster = recv_until(ws1, "roster")
            assert [p["nickname"] for p in roster.payload["participants"]] == ["Ana"]
            with client.websocket_connect("/ws") as ws2:
                ws2.send_text(wire("hello", {"nickname": "Ana"}))
                ws2.send_text(wire("join", {}))
                recv_until(ws2, "welcome")
                # both ends see the updated roster with the suffixed duplicate
                update = recv_until(ws1, "roster")
                names = [p["nickname"] for p in update.payload["participants"]]
                assert names == ["Ana", "Ana#2"]


def test_bad_version_answered_and_closed(tmp_path):
    import anyio
    import pytest
    from starlette.websockets import WebSocketDisconnect

    app = build_server(str(tmp_path), tick_driver=False)
    with TestClient(app) as client:
        try:
            with client.websocket_connect("/ws") as ws:
                raw = json.dumps(
                    {"v": 2, "type": "hello", "seq": 0, "ts": 0, "sid": "", "payload": {}}
                )
                ws.send_text(raw)
                reply = decode(ws.receive_text())
                assert reply.type == "error"
                assert reply.payload["code"] == "bad-version"
                with pytest.raises(WebSocketDisconnect):
                    ws.receive_text()
        except anyio.ClosedResourceError:
            pass  # the test session tears down a socket the server already closed


def test_live_game_snapshots_flow(tmp_path):
    config = SessionConfig()
    app = build_server(str(tmp_path), session_config=config, seed=9)
    with TestClient(app) as client:
        with client.websocket_connect("/ws") as ws:
            ws.send_text(wire("hello", {"nickname": "Ana"}))
            ws.send_text(wire("join", {}))
            recv_until(ws, "welcome")
            ws.send_text(wire("start_game", {"game": "food_rain", "trigger": "break"}))
            started = recv_until(ws, "game_started")
            assert started.payload["game"] == "food_rain"
            assert started.payload["warning"] is False
            t0 = time.monotonic()
            frame_t = 0
            snapshots = []
            while len(snapshots) < 12 and time.monotonic() - t0 < 5:
                frame_t += 50
                frame = PoseFrame("p0", frame_t, neutral_keypoints())
                ws.send_text(wire("pose", pose_payload(frame)))
                message = decode(ws.receive_text())
                if message.type == "snapshot":
                    snapshots.append(message)
            assert len(snapshots) >= 12
            ticks = [s.payload["tick"] for s in snapshots]
            assert ticks == sorted(ticks)
            assert all(s.payload["game"] == "food_rain" for s in snapshots)
            seqs = [s.seq for s in snapshots]
            assert seqs == sorted(seqs)  # per-connection monotone seq
