"""Pose-keypoint gesture tracking.

Turns a per-participant stream of timestamped keypoint frames into discrete,
debounced gesture events (sways, twist reps, nod reps, mouth open/close) plus
a rolling motion-energy signal. Detection is baseline-relative with hysteresis
and per-kind refractory periods, so it is deterministic and camera-placement
tolerant.
"""

from __future__ import annotations

import math
import statistics
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Deque, Dict, List, Optional, Tuple

KEYPOINT_NAMES = (
    "nose",
    "left_eye",
    "right_eye",
    "left_shoulder",
    "right_shoulder",
    "mouth_left",
    "mouth_right",
    "mouth_top",
    "mouth_bottom",
)

MOUTH_POINTS = ("mouth_left", "mouth_right", "mouth_top", "mouth_bottom")

CONFIDENCE_MIN = 0.3


class GestureKind(str, Enum):
    SWAY_LEFT = "sway_left"
    SWAY_RIGHT = "sway_right"
    TWIST_REP = "twist_rep"
    NOD_REP = "nod_rep"
    MOUTH_OPEN = "mouth_open"
    MOUTH_CLOSE = "mouth_close"


class GestureParamsError(ValueError):
    """Raised for threshold sets that cannot form a valid hysteresis band."""


class StaleFrameError(ValueError):
    """Raised when a frame's t_ms does not advance past the last ingested frame."""


class UnknownParticipantError(ValueError):
    """Raised when a frame arrives for a participant this tracker is not bound to."""


class MissingLandmarksError(ValueError):
    """Raised when a required landmark is absent (confidence below the gate)."""


def _clamp(v: float, lo: float, hi: float) -> float:
    return lo if v < lo else hi if v > hi else v


@dataclass(frozen=True)
class Keypoint:
    """One landmark in normalized tile coordinates; clamped into [0, 1]."""

    x: float
    y: float
    confidence: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", _clamp(self.x, 0.0, 1.0))
        object.__setattr__(self, "y", _clamp(self.y, 0.0, 1.0))
        object.__setattr__(self, "confidence", _clamp(self.confidence, 0.0, 1.0))

    @property
    def visible(self) -> bool:
        return self.confidence >= CONFIDENCE_MIN


@dataclass(frozen=True)
class KeypointSet:
    nose: Keypoint
    left_eye: Keypoint
    right_eye: Keypoint
    left_shoulder: Keypoint
    right_shoulder: Keypoint
    mouth_left: Keypoint
    mouth_right: Keypoint
    mouth_top: Keypoint
    mouth_bottom: Keypoint

    def point(self, name: str) -> Keypoint:
        return getattr(self, name)


@dataclass(frozen=True)
class PoseFrame:
    participant_id: str
    t_ms: int
    keypoints: KeypointSet


@dataclass(frozen=True)
class GestureEvent:
    kind: GestureKind
    participant_id: str
    t_ms: int
    magnitude: float  # excursion relative to the trigger threshold, clamped to [0, 1]


@dataclass(frozen=True)
class GestureParams:
    """Detection thresholds. Trigger/release pairs must leave a hysteresis gap."""

    sway_trigger: float = 0.08
    sway_release: float = 0.04
    sway_refractory_ms: int = 300
    nod_trigger: float = 0.05
    nod_release: float = 0.025
    nod_refractory_ms: int = 400
    twist_enter_ratio: float = 0.6   # span falls below enter*reference -> rep begins
    twist_exit_ratio: float = 0.8    # span recovers above exit*reference -> rep completes
    twist_refractory_ms: int = 500
    mouth_open_mar: float = 0.35
    mouth_close_mar: float = 0.25
    warmup_ms: int = 2000
    baseline_window_ms: int = 2000
    span_window_ms: int = 5000
    displacement_window_ms: int = 500
    energy_saturation: float = 0.05

    def validate(self) -> None:
        positive = {
            "sway_trigger": self.sway_trigger,
            "sway_release": self.sway_release,
            "nod_trigger": self.nod_trigger,
            "nod_release": self.nod_release,
            "twist_enter_ratio": self.twist_enter_ratio,
            "twist_exit_ratio": self.twist_exit_ratio,
            "mouth_open_mar": self.mouth_open_mar,
            "mouth_close_mar": self.mouth_close_mar,
            "warmup_ms": self.warmup_ms,
            "baseline_window_ms": self.baseline_window_ms,
            "span_window_ms": self.span_window_ms,
            "displacement_window_ms": self.displacement_window_ms,
            "energy_saturation": self.energy_saturation,
        }
        for name, value in positive.items():
            if value <= 0:
                raise GestureParamsError(f"{name} must be positive, got {value}")
        if self.sway_release >= self.sway_trigger:
            raise GestureParamsError("sway release must be below trigger")
        if self.nod_release >= self.nod_trigger:
            raise GestureParamsError("nod release must be below trigger")
        if self.mouth_close_mar >= self.mouth_open_mar:
            raise GestureParamsError("mouth close MAR must be below open MAR")
        if self.twist_enter_ratio >= self.twist_exit_ratio:
            raise GestureParamsError("twist enter ratio must be below exit ratio")
        for name in ("sway_refractory_ms", "nod_refractory_ms", "twist_refractory_ms"):
            if getattr(self, name) < 0:
                raise GestureParamsError(f"{name} must be nonnegative")


def mouth_aperture(frame: PoseFrame) -> float:
    """Mouth aspect ratio: vertical opening over width.

    Raises MissingLandmarksError when any of the four mouth points is below
    the confidence gate; callers should then leave the mouth state unchanged.
    """
    kp = frame.keypoints
    for name in MOUTH_POINTS:
        if not kp.point(name).visible:
            raise MissingLandmarksError(f"{name} missing in frame at t={frame.t_ms}")
    width = abs(kp.mouth_right.x - kp.mouth_left.x)
    opening = abs(kp.mouth_top.y - kp.mouth_bottom.y)
    return opening / max(width, 1e-6)


@dataclass
class _SwayState:
    latched: Optional[GestureKind] = None  # None = armed


@dataclass
class _ExcursionState:
    latched: bool = False
    peak: float = 0.0


class GestureTracker:
    """Per-participant detector; bound to the first frame's participant id.

    Single-threaded by design: ingest frames in timestamp order, read events
    from the return value. Emits nothing during the first ``warmup_ms`` of a
    stream while rolling baselines settle.
    """

    def __init__(self, params: GestureParams | None = None) -> None:
        self.params = params if params is not None else GestureParams()
        self.params.validate()
        self.participant_id: Optional[str] = None
        self._first_t: Optional[int] = None
        self._last_t: Optional[int] = None
        self._nose_x: Deque[Tuple[int, float]] = deque()
        self._nose_y: Deque[Tuple[int, float]] = deque()
        self._span: Deque[Tuple[int, float]] = deque()
        self._disp: Deque[Tuple[int, Dict[str, float]]] = deque()
        self._last_points: Dict[str, Tuple[float, float]] = {}
        self._last_visible: Tuple[str, ...] = ()
        self._sway = _SwayState()
        self._nod = _ExcursionState()
        self._twist = _ExcursionState()
        self._twist_min_ratio = 1.0
        self._mouth_open = False
        self._refractory_until: Dict[GestureKind, int] = {}

    # -- ingestion ---------------------------------------------------------

    def ingest(self, frame: PoseFrame) -> List[GestureEvent]:
        """Process one frame; returns the gesture events it triggered."""
        if self.participant_id is None:
            self.participant_id = frame.participant_id
        elif frame.participant_id != self.participant_id:
            raise UnknownParticipantError(
                f"tracker bound to {self.participant_id!r}, got {frame.participant_id!r}"
            )
        if self._last_t is not None and frame.t_ms <= self._last_t:
            raise StaleFrameError(
                f"frame t={frame.t_ms} not after last t={self._last_t}"
            )
        if self._first_t is None:
            self._first_t = frame.t_ms
        t = frame.t_ms
        self._last_t = t

        self._record_displacements(t, frame.keypoints)
        self._prune(t)

        in_warmup = (t - self._first_t) < self.params.warmup_ms
        events: List[GestureEvent] = []
        kp = frame.keypoints

        if kp.nose.visible:
            self._nose_x.append((t, kp.nose.x))
            self._nose_y.append((t, kp.nose.y))
            baseline_x = statistics.median(v for _, v in self._nose_x)
            baseline_y = statistics.median(v for _, v in self._nose_y)
            self._step_sway(t, kp.nose.x - baseline_x, events)
            self._step_nod(t, kp.nose.y - baseline_y, events)

        if kp.left_shoulder.visible and kp.right_shoulder.visible:
            span = math.dist(
                (kp.left_shoulder.x, kp.left_shoulder.y),
                (kp.right_shoulder.x, kp.right_shoulder.y),
            )
            self._span.append((t, span))
            reference = _percentile_95(sorted(v for _, v in self._span))
            if reference > 1e-9:
                self._step_twist(t, span / reference, events)

        try:
            mar = mouth_aperture(frame)
        except MissingLandmarksError:
            mar = None
        if mar is not None:
            self._step_mouth(t, mar, events)

        if in_warmup:
            return []
        return events

    def ingest_many(self, frames: List[PoseFrame]) -> List[GestureEvent]:
        """Batch convenience; identical output to frame-by-frame ingestion."""
        events: List[GestureEvent] = []
        for frame in frames:
            events.extend(self.ingest(frame))
        return events

    # -- readouts ----------------------------------------------------------

    def motion_energy(self) -> float:
        """Mean recent movement over visible keypoints, saturated into [0, 1].

        Sums each visible keypoint's frame-to-frame displacement across the
        trailing displacement window, averages over the visible keypoints,
        and divides by the saturation constant. Zero during warmup.
        """
        if self._first_t is None or self._last_t is None:
            return 0.0
        if (self._last_t - self._first_t) < self.params.warmup_ms:
            return 0.0
        visible = self._last_visible
        if not visible:
            return 0.0
        totals = {name: 0.0 for name in visible}
        for _, moved in self._disp:
            for name in visible:
                totals[name] += moved.get(name, 0.0)
        mean = sum(totals.values()) / len(visible)
        return _clamp(mean / self.params.energy_saturation, 0.0, 1.0)

    @property
    def warmed_up(self) -> bool:
        return (
            self._first_t is not None
            and self._last_t is not None
            and (self._last_t - self._first_t) >= self.params.warmup_ms
        )

    # -- internals ---------------------------------------------------------

    def _record_displacements(self, t: int, kp: KeypointSet) -> None:
        moved: Dict[str, float] = {}
        seen: List[str] = []
        for name in KEYPOINT_NAMES:
            point = kp.point(name)
            if not point.visible:
                continue
            seen.append(name)
            prev = self._last_points.get(name)
            if prev is not None:
                moved[name] = math.dist(prev, (point.x, point.y))
            self._last_points[name] = (point.x, point.y)
        self._last_visible = tuple(seen)
        self._disp.append((t, moved))

    def _prune(self, t: int) -> None:
        for window, cutoff in (
            (self._nose_x, self.params.baseline_window_ms),
            (self._nose_y, self.params.baseline_window_ms),
            (self._span, self.params.span_window_ms),
            (self._disp, self.params.displacement_window_ms),
        ):
            while window and window[0][0] <= t - cutoff:
                window.popleft()

    def _emit(
        self,
        t: int,
        kind: GestureKind,
        magnitude: float,
        refractory_ms: int,
        events: List[GestureEvent],
    ) -> None:
        deadline = self._refractory_until.get(kind)
        if deadline is not None and t < deadline:
            return  # crossed during refractory: the rep is swallowed, state still resets
        self._refractory_until[kind] = t + refractory_ms
        events.append(
            GestureEvent(kind, self.participant_id or "", t, _clamp(magnitude, 0.0, 1.0))
        )

    def _step_sway(self, t: int, dev: float, events: List[GestureEvent]) -> None:
        p = self.params
        if self._sway.latched is None:
            if dev > p.sway_trigger:
                self._emit(
                    t,
                    GestureKind.SWAY_RIGHT,
                    (dev - p.sway_trigger) / p.sway_trigger,
                    p.sway_refractory_ms,
                    events,
                )
                self._sway.latched = GestureKind.SWAY_RIGHT
            elif dev < -p.sway_trigger:
                self._emit(
                    t,
                    GestureKind.SWAY_LEFT,
                    (-dev - p.sway_trigger) / p.sway_trigger,
                    p.sway_refractory_ms,
                    events,
                )
                self._sway.latched = GestureKind.SWAY_LEFT
        elif abs(dev) < p.sway_release:
            self._sway.latched = None

    def _step_nod(self, t: int, dev: float, events: List[GestureEvent]) -> None:
        p = self.params
        if not self._nod.latched:
            if abs(dev) > p.nod_trigger:
                self._nod.latched = True
                self._nod.peak = abs(dev)
        else:
            self._nod.peak = max(self._nod.peak, abs(dev))
            if abs(dev) < p.nod_release:
                self._emit(
                    t,
                    GestureKind.NOD_REP,
                    (self._nod.peak - p.nod_trigger) / p.nod_trigger,
                    p.nod_refractory_ms,
                    events,
                )
                self._nod.latched = False
                self._nod.peak = 0.0

    def _step_twist(self, t: int, ratio: float, events: List[GestureEvent]) -> None:
        p = self.params
        if not self._twist.latched:
            if ratio < p.twist_enter_ratio:
                self._twist.latched = True
                self._twist_min_ratio = ratio
        else:
            self._twist_min_ratio = min(self._twist_min_ratio, ratio)
            if ratio > p.twist_exit_ratio:
                compression = 1.0 - self._twist_min_ratio
                threshold = 1.0 - p.twist_enter_ratio
                self._emit(
                    t,
                    GestureKind.TWIST_REP,
                    (compression - threshold) / threshold,
                    p.twist_refractory_ms,
                    events,
                )
                self._twist.latched = False
                self._twist_min_ratio = 1.0

    def _step_mouth(self, t: int, mar: float, events: List[GestureEvent]) -> None:
        p = self.params
        if not self._mouth_open and mar > p.mouth_open_mar:
            self._mouth_open = True
            self._emit(t, GestureKind.MOUTH_OPEN, (mar - p.mouth_open_mar) / p.mouth_open_mar, 0, events)
        elif self._mouth_open and mar < p.mouth_close_mar:
            self._mouth_open = False
            self._emit(t, GestureKind.MOUTH_CLOSE, (p.mouth_close_mar - mar) / p.mouth_close_mar, 0, events)


def _percentile_95(sorted_values: List[float]) -> float:
    """Linear interpolation at h = 0.95 * (n - 1) over a pre-sorted sample."""
    n = len(sorted_values)
    if n == 1:
        return sorted_values[0]
    h = 0.95 * (n - 1)
    lo = int(h)
    frac = h - lo
    if lo + 1 >= n:
        return sorted_values[-1]
    return sorted_values[lo] * (1.0 - frac) + sorted_values[lo + 1] * frac


def neutral_keypoints(
    nose: Tuple[float, float] = (0.5, 0.4),
    mouth_open: bool = False,
    dx: float = 0.0,
    dy: float = 0.0,
    span_scale: float = 1.0,
) -> KeypointSet:
    """A seated neutral pose rig, optionally translated, mouth-toggled, or
    shoulder-compressed (span_scale < 1 mimics an upper-body twist)."""
    nx, ny = nose[0] + dx, nose[1] + dy
    half_span = 0.15 * span_scale
    gap = 0.025 if mouth_open else 0.005
    return KeypointSet(
        nose=Keypoint(nx, ny),
        left_eye=Keypoint(nx - 0.04, ny - 0.04),
        right_eye=Keypoint(nx + 0.04, ny - 0.04),
        left_shoulder=Keypoint(nx - half_span, ny + 0.15),
        right_shoulder=Keypoint(nx + half_span, ny + 0.15),
        mouth_left=Keypoint(nx - 0.05, ny + 0.05),
        mouth_right=Keypoint(nx + 0.05, ny + 0.05),
        mouth_top=Keypoint(nx, ny + 0.05 - gap),
        mouth_bottom=Keypoint(nx, ny + 0.05 + gap),
    )
