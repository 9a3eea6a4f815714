"""Synthetic pose traces: closed-form stand-ins for live players.

A participant's trace is an ordered, non-overlapping list of segments, each
synthesizing frames at 20 Hz from simple kinematics (sine sways and nods,
cosine shoulder compression for twists, square-wave mouth cycles, a raster
"sweep" that drags the whole rig across the tile, and a closed-loop
chase_items policy that follows the nearest falling fruit).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from meetmotion.gestures import KeypointSet, PoseFrame, neutral_keypoints

SEGMENT_KINDS = ("still", "sway", "twist", "nod", "mouth", "chase_items", "sweep")

NEUTRAL_NOSE = (0.5, 0.4)
MOUTH_ROW_Y = 0.45            # mouth center of the neutral rig
SWEEP_ROWS = 6                # raster rows of the sweep pattern


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class TraceSegment:
    kind: str
    start_s: float
    len_s: float
    amplitude: float = 0.1    # sway/nod
    period_s: float = 2.0     # sway/twist/nod/sweep
    open_s: float = 0.5       # mouth
    closed_s: float = 0.5     # mouth

    def validate(self) -> None:
        if self.kind not in SEGMENT_KINDS:
            raise ScenarioError(f"unknown segment kind {self.kind!r}")
        if self.start_s < 0 or self.len_s <= 0:
            raise ScenarioError("segments need start_s >= 0 and len_s > 0")
        if self.kind in ("sway", "nod") and not 0.0 < self.amplitude <= 0.5:
            raise ScenarioError("amplitude must be in (0, 0.5]")
        if self.kind in ("sway", "twist", "nod", "sweep") and self.period_s <= 0:
            raise ScenarioError("period_s must be positive")
        if self.kind == "mouth" and (self.open_s <= 0 or self.closed_s <= 0):
            raise ScenarioError("mouth open_s and closed_s must be positive")

    @property
    def end_s(self) -> float:
        return self.start_s + self.len_s


@dataclass(frozen=True)
class TraceParticipant:
    name: str
    trace: Tuple[TraceSegment, ...]


@dataclass(frozen=True)
class Scenario:
    seed: int
    game: str
    duration_s: float
    participants: Tuple[TraceParticipant, ...]

    def validate(self) -> None:
        if self.duration_s <= 0:
            raise ScenarioError("duration_s must be positive")
        if not self.participants:
            raise ScenarioError("at least one participant required")
        names = [p.name for p in self.participants]
        if len(set(names)) != len(names) or any(not n for n in names):
            raise ScenarioError("participant names must be unique and non-empty")
        for p in self.participants:
            previous_end = 0.0
            for i, segment in enumerate(p.trace):
                segment.validate()
                if i > 0 and segment.start_s < previous_end:
                    raise ScenarioError(
                        f"{p.name}: segments overlap or are out of order at {segment.start_s}s"
                    )
                previous_end = segment.end_s

    @staticmethod
    def from_dict(obj: dict) -> "Scenario":
        try:
            participants = tuple(
                TraceParticipant(
                    name=str(p["name"]),
                    trace=tuple(
                        TraceSegment(
                            kind=str(seg["kind"]),
                            start_s=float(seg["start_s"]),
                            len_s=float(seg["len_s"]),
                            amplitude=float(seg.get("amplitude", 0.1)),
                            period_s=float(seg.get("period_s", 2.0)),
                            open_s=float(seg.get("open_s", 0.5)),
                            closed_s=float(seg.get("closed_s", 0.5)),
                        )
                        for seg in p.get("trace", ())
                    ),
                )
                for p in obj["participants"]
            )
            scenario = Scenario(
                seed=int(obj.get("seed", 0)),
                game=str(obj["game"]),
                duration_s=float(obj["duration_s"]),
                participants=participants,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"bad scenario document: {exc}") from exc
        scenario.validate()
        return scenario


@dataclass
class ChaseContext:
    """Closed-loop state for chase_items: the participant's active fruits."""

    fruits: Sequence[Tuple[float, float]] = ()      # (x, y) of active fruits
    half_width: float = 0.08
    half_height: float = 0.06


def active_segment(trace: Sequence[TraceSegment], t_s: float) -> Optional[TraceSegment]:
    for segment in trace:
        if segment.start_s <= t_s < segment.end_s:
            return segment
    return None


def synth_keypoints(
    segment: Optional[TraceSegment],
    t_s: float,
    chase: Optional[ChaseContext] = None,
) -> KeypointSet:
    """Keypoints for one participant at one instant; gaps render as still."""
    if segment is None:
        return neutral_keypoints()
    tau = t_s - segment.start_s
    kind = segment.kind
    if kind == "still":
        return neutral_keypoints()
    if kind == "sway":
        dx = segment.amplitude * math.sin(2.0 * math.pi * tau / segment.period_s)
        return neutral_keypoints(dx=dx)
    if kind == "nod":
        dy = segment.amplitude * math.sin(2.0 * math.pi * tau / segment.period_s)
        return neutral_keypoints(dy=dy)
    if kind == "twist":
        scale = 0.7 + 0.3 * math.cos(2.0 * math.pi * tau / segment.period_s)
        return neutral_keypoints(span_scale=scale)
    if kind == "mouth":
        cycle = segment.open_s + segment.closed_s
        is_open = (tau % cycle) < segment.open_s
        return neutral_keypoints(mouth_open=is_open)
    if kind == "sweep":
        dx, dy = _sweep_offsets(tau, segment.period_s)
        return neutral_keypoints(dx=dx, dy=dy)
    if kind == "chase_items":
        return _chase_keypoints(chase)
    raise ScenarioError(f"unknown segment kind {kind!r}")


def _sweep_offsets(tau: float, period_s: float) -> Tuple[float, float]:
    """Serpentine raster over the whole tile: SWEEP_ROWS horizontal passes per
    period, rows spaced so the clear radius overlaps between passes."""
    pass_len = period_s / SWEEP_ROWS
    k = int(tau / pass_len) % SWEEP_ROWS
    frac = (tau % pass_len) / pass_len
    x = frac if k % 2 == 0 else 1.0 - frac
    y = 0.05 + 0.18 * k
    return x - NEUTRAL_NOSE[0], y - NEUTRAL_NOSE[1]


def _chase_keypoints(chase: Optional[ChaseContext]) -> KeypointSet:
    if chase is None:
        return neutral_keypoints()
    # chase the fruit that will reach the mouth row soonest and is not yet past it
    catchable = [f for f in chase.fruits if f[1] <= MOUTH_ROW_Y + chase.half_height]
    if not catchable:
        return neutral_keypoints()
    target = max(catchable, key=lambda f: f[1])
    dx = target[0] - 0.5
    in_box = abs(target[1] - MOUTH_ROW_Y) <= chase.half_height
    return neutral_keypoints(dx=dx, mouth_open=in_box)


def frame_at(
    participant_id: str,
    trace: Sequence[TraceSegment],
    tick: int,
    tick_ms: int = 50,
    chase: Optional[ChaseContext] = None,
) -> PoseFrame:
    t_ms = tick * tick_ms
    segment = active_segment(trace, t_ms / 1000.0)
    return PoseFrame(
        participant_id=participant_id,
        t_ms=t_ms,
        keypoints=synth_keypoints(segment, t_ms / 1000.0, chase),
    )


def synth_frames(
    segment: TraceSegment,
    participant_id: str,
    rate_hz: int = 20,
) -> List[PoseFrame]:
    """All frames of one open-loop segment (chase_items needs the runner)."""
    segment.validate()
    if segment.kind == "chase_items":
        raise ScenarioError("chase_items is closed-loop; synthesize it via run_scenario")
    step_ms = round(1000 / rate_hz)
    frames: List[PoseFrame] = []
    first_tick = math.ceil(segment.start_s * 1000 / step_ms)
    last_tick = math.ceil(segment.end_s * 1000 / step_ms)
    for tick in range(first_tick, last_tick):
        t_ms = tick * step_ms
        t_s = t_ms / 1000.0
        if not segment.start_s <= t_s < segment.end_s:
            continue
        frames.append(
            PoseFrame(
                participant_id=participant_id,
                t_ms=t_ms,
                keypoints=synth_keypoints(segment, t_s),
            )
        )
    return frames
