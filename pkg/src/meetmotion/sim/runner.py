"""Deterministic headless scenario runner.

Builds one gesture tracker per participant plus the chosen game engine, then
ticks at the fixed 50 ms step: synthesize frames, ingest them, hand events and
frames to the engine, and record snapshots and metrics. Identical scenarios
(and seeds) produce byte-identical reports and snapshot logs on every run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional

from meetmotion.games import (
    GameConfig,
    GameKind,
    Participant,
    TickInputs,
    game_init,
)
from meetmotion.games.food_rain import FoodRainGame, leaderboard
from meetmotion.gestures import GestureKind, GestureTracker, PoseFrame
from meetmotion.sim.traces import (
    ChaseContext,
    Scenario,
    ScenarioError,
    active_segment,
    synth_keypoints,
)

TICK_MS = 50
MOVEMENT_ENERGY_FLOOR = 0.1   # a tick "moves" when motion energy exceeds this


@dataclass
class RunResult:
    report: dict
    snapshot_lines: List[str]
    tick_inputs: List[dict]   # per tick: pid -> {"mouth_open", "mouth_center"}
    game: object


def run_scenario(
    scenario: Scenario,
    config: GameConfig | None = None,
    record_snapshots: bool = True,
) -> RunResult:
    scenario.validate()
    config = config if config is not None else GameConfig()
    try:
        kind = GameKind(scenario.game)
    except ValueError:
        raise ScenarioError(f"unknown game {scenario.game!r}")

    roster = [
        Participant(f"p{i}", p.name, i) for i, p in enumerate(scenario.participants)
    ]
    join_order = {p.participant_id: p.join_seq for p in roster}
    traces = {f"p{i}": p.trace for i, p in enumerate(scenario.participants)}
    trackers = {p.participant_id: GestureTracker() for p in roster}
    game = game_init(kind, roster, config, scenario.seed)

    total_ticks = round(scenario.duration_s * 1000 / TICK_MS)
    rep_counts: Dict[str, Dict[str, int]] = {p.participant_id: {} for p in roster}
    movement_ticks: Dict[str, int] = {p.participant_id: 0 for p in roster}
    coverage_series: Dict[str, List[float]] = (
        {p.participant_id: [] for p in roster} if kind == GameKind.FROST else {}
    )
    mouth_open: Dict[str, bool] = {p.participant_id: False for p in roster}
    snapshot_lines: List[str] = []
    tick_inputs: List[dict] = []

    executed = 0
    for tick in range(1, total_ticks + 1):
        t_ms = tick * TICK_MS
        frames: List[PoseFrame] = []
        for p in roster:
            chase = _chase_context(game, p.participant_id, config, kind)
            segment = active_segment(traces[p.participant_id], t_ms / 1000.0)
            frames.append(
                PoseFrame(
                    participant_id=p.participant_id,
                    t_ms=t_ms,
                    keypoints=synth_keypoints(segment, t_ms / 1000.0, chase),
                )
            )
        events = []
        for frame in frames:
            events.extend(trackers[frame.participant_id].ingest(frame))
        for event in events:
            counts = rep_counts[event.participant_id]
            counts[event.kind.value] = counts.get(event.kind.value, 0) + 1
        for pid, tracker in trackers.items():
            if tracker.motion_energy() > MOVEMENT_ENERGY_FLOOR:
                movement_ticks[pid] += 1

        inputs = TickInputs.sorted_inputs(events, frames, join_order)
        game.tick(inputs)
        executed = tick

        tick_inputs.append(_record_inputs(mouth_open, events, frames))
        if kind == GameKind.FROST:
            for pid in coverage_series:
                coverage_series[pid].append(game.coverage(pid))
        if record_snapshots:
            snapshot = {"tick": tick, "game": kind.value, "state": game.state_dict()}
            snapshot_lines.append(json.dumps(snapshot, sort_keys=True, separators=(",", ":")))
        if game.terminal:
            break

    if not game.terminal:
        game.end()
    results = game.results(rep_counts)

    by_name = {}
    for p in roster:
        by_name[p.nickname] = {
            "pid": p.participant_id,
            "rep_counts": dict(sorted(rep_counts[p.participant_id].items())),
            "movement_seconds": movement_ticks[p.participant_id] * TICK_MS / 1000.0,
        }
    report = {
        "game": kind.value,
        "seed": scenario.seed,
        "duration_ticks": executed,
        "participants": by_name,
        "results": results.to_dict(),
        "frost_coverage": {
            roster[i].nickname: coverage_series[roster[i].participant_id]
            for i in range(len(roster))
        }
        if coverage_series
        else {},
        "leaderboard": leaderboard(game.scores, roster) if isinstance(game, FoodRainGame) else [],
    }
    return RunResult(report=report, snapshot_lines=snapshot_lines, tick_inputs=tick_inputs, game=game)


def _chase_context(
    game, pid: str, config: GameConfig, kind: GameKind
) -> Optional[ChaseContext]:
    if kind != GameKind.FOOD_RAIN:
        return None
    cfg = config.food_rain
    fruits = [
        (item.x, item.y)
        for item in game.items.get(pid, ())
        if item.type == "fruit"
    ]
    return ChaseContext(
        fruits=fruits,
        half_width=cfg.catch_half_width,
        half_height=cfg.catch_half_height,
    )


def _record_inputs(
    mouth_open: Dict[str, bool], events, frames
) -> dict:
    """Per-tick engine inputs (mouth state and center), kept for oracle replays."""
    for event in events:
        if event.kind == GestureKind.MOUTH_OPEN:
            mouth_open[event.participant_id] = True
        elif event.kind == GestureKind.MOUTH_CLOSE:
            mouth_open[event.participant_id] = False
    record: dict = {}
    for frame in frames:
        left = frame.keypoints.mouth_left
        right = frame.keypoints.mouth_right
        center = (
            [(left.x + right.x) / 2.0, (left.y + right.y) / 2.0]
            if left.visible and right.visible
            else None
        )
        record[frame.participant_id] = {
            "mouth_open": mouth_open.get(frame.participant_id, False),
            "mouth_center": center,
        }
    return record


def write_report(report: dict, path: Path | str) -> None:
    """Pretty-printed with sorted keys so identical reports are byte-identical."""
    Path(path).write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def write_snapshots(lines: List[str], path: Path | str) -> None:
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
