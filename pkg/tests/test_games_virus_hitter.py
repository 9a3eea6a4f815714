"""Virus Hitter: roles, bomb loading, dwell aiming, win/lose."""

import pytest

from meetmotion.games import (
    GameConfig,
    GameError,
    GameKind,
    Participant,
    TerminalStateError,
    TickInputs,
    assign_roles,
    game_init,
)
from meetmotion.gestures import GestureEvent, GestureKind, PoseFrame, neutral_keypoints
from meetmotion.prng import SplitMix64

M64 = (1 << 64) - 1


def reference_first_below(seed, n):
    state = (seed + 0x9E3779B97F4A7C15) & M64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M64
    return ((z ^ (z >> 31)) & M64) % n


def roster(n):
    return [Participant(f"p{i}", f"N{i}", i) for i in range(n)]


def twist(pid, t_ms):
    return GestureEvent(GestureKind.TWIST_REP, pid, t_ms, 0.5)


def nose_frame(pid, t_ms, x):
    return PoseFrame(pid, t_ms, neutral_keypoints(dx=x - 0.5))


class TestRoles:
    def test_two_participants_forced_shape(self):
        hitter, assistants = assign_roles(roster(2), SplitMix64(0))
        assert len(assistants) == 1
        assert assistants[0][1] == 0
        assert assistants[0][0] != hitter

    def test_single_participant_rejected(self):
        with pytest.raises(GameError):
            assign_roles(roster(1), SplitMix64(0))
        with pytest.raises(GameError):
            game_init(GameKind.VIRUS_HITTER, roster(1), GameConfig(), seed=0)

    def test_ten_participants_exceed_palette(self):
        with pytest.raises(GameError):
            assign_roles(roster(10), SplitMix64(0))

    def test_hitter_choice_matches_reference(self):
        game = game_init(GameKind.VIRUS_HITTER, roster(5), GameConfig(), seed=42)
        assert game.hitter_id == f"p{reference_first_below(42, 5)}"
        again = game_init(GameKind.VIRUS_HITTER, roster(5), GameConfig(), seed=42)
        assert again.hitter_id == game.hitter_id

    def test_colors_unique_and_roster_ordered(self):
        _, assistants = assign_roles(roster(6), SplitMix64(9))
        colors = [c for _, c in assistants]
        assert colors == list(range(5))


class TestGameplay:
    def make(self, n=3, seed=0):
        game = game_init(GameKind.VIRUS_HITTER, roster(n), GameConfig(), seed=seed)
        return game

    def test_initial_hp_is_two_per_assistant(self):
        game = self.make(n=4)
        assert game.hp == 2 * 3
        assert game.torch_x == 0.5

    def test_bomb_cap(self):
        game = self.make()
        assistant = game.towers[0].participant_id
        events = [twist(assistant, 50)] * 4
        game.tick(TickInputs(events=events))
        assert game.towers[0].bombs == 3

    def test_twists_from_hitter_do_not_load(self):
        game = self.make()
        game.tick(TickInputs(events=[twist(game.hitter_id, 50)]))
        assert all(t.bombs == 0 for t in game.towers)

    def test_torch_tracks_hitter_nose(self):
        game = self.make()
        game.tick(TickInputs(frames=[nose_frame(game.hitter_id, 50, 0.9)]))
        assert game.torch_x == pytest.approx(0.5 + 0.3 * 0.4)

    def test_dwell_launch_after_600ms(self):
        game = self.make(n=3)  # two towers: slots [0, 0.5) and [0.5, 1]
        tower = game.towers[0]
        game.tick(TickInputs(events=[twist(tower.participant_id, 50)]))
        assert tower.bombs == 1
        hp_before = game.hp
        # park the torch well inside slot 0
        launched_at = None
        for tick in range(2, 40):
            outs = game.tick(
                TickInputs(frames=[nose_frame(game.hitter_id, tick * 50, 0.05)])
            )
            if any(o.kind == "bomb_launched" for o in outs):
                launched_at = tick
                break
        assert launched_at is not None
        assert game.hp == hp_before - 1
        assert tower.bombs == 0
        assert tower.dwell_ticks == 0

    def test_no_dwell_without_bombs(self):
        game = self.make(n=3)
        for tick in range(1, 60):
            game.tick(TickInputs(frames=[nose_frame(game.hitter_id, tick * 50, 0.05)]))
        assert game.hp == game.initial_hp

    def test_win_when_hp_reaches_zero(self):
        game = self.make(n=2)  # one tower, HP 2
        tower = game.towers[0]
        finished = []
        for tick in range(1, 200):
            events = [twist(tower.participant_id, tick * 50)] if tick in (1, 2) else []
            outs = game.tick(
                TickInputs(
                    events=events,
                    frames=[nose_frame(game.hitter_id, tick * 50, 0.3)],
                )
            )
            finished.extend(o for o in outs if o.kind == "game_finished")
            if game.terminal:
                break
        assert game.outcome == "won"
        assert finished and finished[-1].data["outcome"] == "won"
        assert game.hp == 0
        with pytest.raises(TerminalStateError):
            game.tick(TickInputs())

    def test_lost_when_clock_runs_out(self):
        game = self.make(n=2)
        for _ in range(2400):
            game.tick(TickInputs())
        assert game.outcome == "lost"
        assert game.hp == game.initial_hp

    def test_hp_decrements_equal_launches(self):
        game = self.make(n=3)
        for tick in range(1, 2401):
            events = (
                [twist(t.participant_id, tick * 50) for t in game.towers]
                if tick % 30 == 0
                else []
            )
            x = 0.25 if (tick // 40) % 2 == 0 else 0.75
            game.tick(
                TickInputs(events=events, frames=[nose_frame(game.hitter_id, tick * 50, x)])
            )
            if game.terminal:
                break
        launches = sum(t.launched for t in game.towers)
        assert game.initial_hp - game.hp == launches


def test_results_outcome_projection():
    game = game_init(GameKind.VIRUS_HITTER, roster(2), GameConfig(), seed=3)
    tower = game.towers[0]
    for tick in range(1, 400):
        events = [twist(tower.participant_id, tick * 50)] if tick < 3 else []
        game.tick(
            TickInputs(events=events, frames=[nose_frame(game.hitter_id, tick * 50, 0.2)])
        )
        if game.terminal:
            break
    results = game.results()
    assert results.outcome == "won"
    assert results.per_participant[game.hitter_id]["role"] == "hitter"
    assert results.per_participant[tower.participant_id]["bombs_loaded"] == 2
