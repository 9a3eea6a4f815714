"""Gesture tracker behavior: thresholds, hysteresis, refractory, energy."""

import math

import pytest

from meetmotion.gestures import (
    GestureKind,
    GestureParams,
    GestureParamsError,
    GestureTracker,
    Keypoint,
    KeypointSet,
    MissingLandmarksError,
    PoseFrame,
    StaleFrameError,
    UnknownParticipantError,
    mouth_aperture,
    neutral_keypoints,
)

PID = "p0"


def frame(t_ms, keypoints=None, pid=PID):
    return PoseFrame(pid, t_ms, keypoints if keypoints is not None else neutral_keypoints())


def warmed_tracker(params=None, frames=41, pid=PID):
    """Tracker fed 2 s of neutral frames at 20 Hz (t = 0..2000)."""
    tracker = GestureTracker(params)
    for k in range(frames):
        tracker.ingest(frame(k * 50, pid=pid))
    return tracker


def sway_frames(t0, xs):
    return [frame(t0 + k * 50, neutral_keypoints(dx=x - 0.5)) for k, x in enumerate(xs)]


class TestParams:
    def test_defaults(self):
        params = GestureTracker().params
        assert params.sway_trigger == 0.08
        assert params.sway_release == 0.04

    def test_overrides(self):
        params = GestureParams(sway_trigger=0.10, sway_release=0.05)
        assert GestureTracker(params).params.sway_trigger == 0.10

    def test_release_must_be_below_trigger(self):
        with pytest.raises(GestureParamsError):
            GestureTracker(GestureParams(sway_trigger=0.04, sway_release=0.08))

    def test_thresholds_must_be_positive(self):
        with pytest.raises(GestureParamsError):
            GestureTracker(GestureParams(nod_trigger=-0.1))


class TestSway:
    def test_constant_stream_is_silent(self):
        tracker = GestureTracker()
        events = []
        for k in range(101):  # 5 s of identical frames: warmup plus 3 s quiet
            events.extend(tracker.ingest(frame(k * 50)))
        assert events == []

    def test_single_sway_left_magnitude(self):
        # nose.x runs 0.50 -> 0.38 over 200 ms, crossing the trigger on the last frame
        tracker = warmed_tracker(frames=40)
        events = []
        for f in sway_frames(2000, [0.50, 0.48, 0.46, 0.43, 0.38]):
            events.extend(tracker.ingest(f))
        assert [e.kind for e in events] == [GestureKind.SWAY_LEFT]
        assert events[0].t_ms == 2200
        assert events[0].magnitude == pytest.approx((0.12 - 0.08) / 0.08, abs=1e-9)

    def test_holding_past_trigger_emits_nothing_more(self):
        tracker = warmed_tracker(frames=40)
        events = []
        for f in sway_frames(2000, [0.50, 0.48, 0.46, 0.43, 0.38] + [0.38] * 20):
            events.extend(tracker.ingest(f))
        assert len(events) == 1

    def test_sinusoid_counts_five_each_way(self):
        # 2 s warmup then a 10 s sinusoid, A=0.1, P=2 s, sampled at 20 Hz
        tracker = warmed_tracker(frames=40)
        events = []
        for k in range(201):
            t = 2000 + k * 50
            tau = (t - 2000) / 1000.0
            dx = 0.1 * math.sin(2 * math.pi * tau / 2.0)
            events.extend(tracker.ingest(frame(t, neutral_keypoints(dx=dx))))
        lefts = [e for e in events if e.kind == GestureKind.SWAY_LEFT]
        rights = [e for e in events if e.kind == GestureKind.SWAY_RIGHT]
        assert (len(lefts), len(rights)) == (5, 5)

    def test_warmup_swallows_early_events(self):
        tracker = GestureTracker()
        events = []
        for f in sway_frames(0, [0.50, 0.48, 0.46, 0.43, 0.38]):
            events.extend(tracker.ingest(f))
        assert events == []


class TestTwist:
    def test_span_dip_and_recovery_is_one_rep(self):
        tracker = warmed_tracker(frames=40)
        events = []
        # scale 1.0 -> 0.5 -> 1.0 over 1 s: span 0.30 -> 0.15 -> 0.30
        scales = [1.0 - k * 0.05 for k in range(10)] + [0.5 + k * 0.05 for k in range(11)]
        for k, scale in enumerate(scales):
            kp = neutral_keypoints(span_scale=scale)
            events.extend(tracker.ingest(frame(2000 + k * 50, kp)))
        assert [e.kind for e in events] == [GestureKind.TWIST_REP]

    def test_shallow_dip_no_rep(self):
        tracker = warmed_tracker(frames=40)
        events = []
        scales = [1.0, 0.9, 0.8, 0.7, 0.8, 0.9, 1.0]  # never below 0.6x reference
        for k, scale in enumerate(scales):
            kp = neutral_keypoints(span_scale=scale)
            events.extend(tracker.ingest(frame(2000 + k * 50, kp)))
        assert events == []


class TestNod:
    def test_nod_rep_on_return(self):
        tracker = warmed_tracker(frames=40)
        events = []
        dys = [0.0, 0.03, 0.06, 0.08, 0.06, 0.03, 0.0]
        for k, dy in enumerate(dys):
            events.extend(tracker.ingest(frame(2000 + k * 50, neutral_keypoints(dy=dy))))
        assert [e.kind for e in events] == [GestureKind.NOD_REP]
        # magnitude reflects the peak excursion (0.08 against the 0.05 trigger)
        assert events[0].magnitude == pytest.approx((0.08 - 0.05) / 0.05, abs=1e-6)

    def test_sub_threshold_nod_is_silent(self):
        tracker = warmed_tracker(frames=40)
        events = []
        for k in range(80):
            dy = 0.02 * math.sin(2 * math.pi * k / 40)
            events.extend(tracker.ingest(frame(2050 + k * 50, neutral_keypoints(dy=dy))))
        assert events == []


class TestMouth:
    def test_open_close_cycle(self):
        tracker = warmed_tracker(frames=40)
        events = []
        for k, is_open in enumerate([False, True, True, False]):
            kp = neutral_keypoints(mouth_open=is_open)
            events.extend(tracker.ingest(frame(2000 + k * 50, kp)))
        assert [e.kind for e in events] == [GestureKind.MOUTH_OPEN, GestureKind.MOUTH_CLOSE]

    def test_aperture_zero_when_lips_meet(self):
        kp = neutral_keypoints()
        flat = KeypointSet(
            **{
                name: kp.point(name)
                for name in ("nose", "left_eye", "right_eye", "left_shoulder", "right_shoulder", "mouth_left", "mouth_right")
            },
            mouth_top=Keypoint(0.5, 0.45),
            mouth_bottom=Keypoint(0.5, 0.45),
        )
        assert mouth_aperture(frame(0, flat)) == 0.0

    def test_aperture_ratio(self):
        kp = neutral_keypoints()
        shaped = KeypointSet(
            nose=kp.nose,
            left_eye=kp.left_eye,
            right_eye=kp.right_eye,
            left_shoulder=kp.left_shoulder,
            right_shoulder=kp.right_shoulder,
            mouth_left=Keypoint(0.45, 0.56),
            mouth_right=Keypoint(0.55, 0.56),
            mouth_top=Keypoint(0.50, 0.52),
            mouth_bottom=Keypoint(0.50, 0.60),
        )
        assert mouth_aperture(frame(0, shaped)) == pytest.approx(0.8)

    def test_missing_mouth_point_raises(self):
        kp = neutral_keypoints()
        broken = KeypointSet(
            nose=kp.nose,
            left_eye=kp.left_eye,
            right_eye=kp.right_eye,
            left_shoulder=kp.left_shoulder,
            right_shoulder=kp.right_shoulder,
            mouth_left=Keypoint(0.45, 0.56, confidence=0.1),
            mouth_right=kp.mouth_right,
            mouth_top=kp.mouth_top,
            mouth_bottom=kp.mouth_bottom,
        )
        with pytest.raises(MissingLandmarksError):
            mouth_aperture(frame(0, broken))


class TestMotionEnergy:
    def test_zero_when_still(self):
        tracker = warmed_tracker()
        assert tracker.motion_energy() == 0.0

    def test_saturates_at_window_displacement(self):
        tracker = GestureTracker()
        for k in range(60):
            tracker.ingest(frame(k * 50, neutral_keypoints(dx=0.005 * k - 0.1)))
        assert tracker.motion_energy() == pytest.approx(1.0, abs=1e-9)

    def test_single_moving_keypoint_is_one_ninth(self):
        tracker = GestureTracker()
        base = neutral_keypoints()
        for k in range(60):
            x = 0.3 + 0.005 * k
            kp = KeypointSet(
                nose=Keypoint(x, 0.4),
                left_eye=base.left_eye,
                right_eye=base.right_eye,
                left_shoulder=base.left_shoulder,
                right_shoulder=base.right_shoulder,
                mouth_left=base.mouth_left,
                mouth_right=base.mouth_right,
                mouth_top=base.mouth_top,
                mouth_bottom=base.mouth_bottom,
            )
            tracker.ingest(frame(k * 50, kp))
        assert tracker.motion_energy() == pytest.approx(1.0 / 9.0, abs=1e-6)

    def test_zero_during_warmup(self):
        tracker = GestureTracker()
        for k in range(10):
            tracker.ingest(frame(k * 50, neutral_keypoints(dx=0.01 * k)))
        assert tracker.motion_energy() == 0.0


class TestStreamContracts:
    def test_stale_frame_rejected(self):
        tracker = GestureTracker()
        tracker.ingest(frame(100))
        with pytest.raises(StaleFrameError):
            tracker.ingest(frame(100))
        with pytest.raises(StaleFrameError):
            tracker.ingest(frame(50))

    def test_bound_to_first_participant(self):
        tracker = GestureTracker()
        tracker.ingest(frame(0, pid="alice"))
        with pytest.raises(UnknownParticipantError):
            tracker.ingest(frame(50, pid="bob"))

    def test_coordinates_clamp(self):
        point = Keypoint(-0.5, 1.5, 2.0)
        assert (point.x, point.y, point.confidence) == (0.0, 1.0, 1.0)

    def test_batching_equivalence(self):
        import random

        rng = random.Random(5)
        frames = []
        x = 0.5
        for k in range(200):
            x = min(0.9, max(0.1, x + rng.uniform(-0.04, 0.04)))
            frames.append(frame(k * 50, neutral_keypoints(dx=x - 0.5)))
        one = GestureTracker()
        seq_events = [e for f in frames for e in one.ingest(f)]
        batched = GestureTracker()
        batch_events = []
        i = 0
        while i < len(frames):
            size = rng.randint(1, 7)
            batch_events.extend(batched.ingest_many(frames[i : i + size]))
            i += size
        assert seq_events == batch_events
