"""Virus Hitter: cooperative. One randomly chosen hitter aims a nose-driven
torch; the other players load bombs onto their color-matched watchtowers by
completing chair-twist reps. Holding the torch over an armed tower for the
dwell time launches a bomb and chips the virus. Win when its HP hits zero,
lose when time runs out.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence

from meetmotion.games.common import (
    GameKind,
    GameOutput,
    GameResults,
    Participant,
    TerminalStateError,
    TickInputs,
    assign_roles,
)
from meetmotion.games.config import GameConfig
from meetmotion.gestures import GestureKind
from meetmotion.prng import SplitMix64


@dataclass
class Watchtower:
    participant_id: str
    color: int          # index into the client-side palette
    bombs: int = 0
    loaded_total: int = 0
    launched: int = 0
    dwell_ticks: int = 0


class VirusHitterGame:
    kind = GameKind.VIRUS_HITTER

    def __init__(self, participants: Sequence[Participant], config: GameConfig, seed: int) -> None:
        config.validate()
        self.config = config
        self.participants = list(participants)
        self.seed = seed
        prng = SplitMix64(seed)
        self.hitter_id, assistants = assign_roles(self.participants, prng)
        self.towers: List[Watchtower] = [Watchtower(pid, color) for pid, color in assistants]
        cfg = config.virus_hitter
        self.duration_ticks = round(cfg.duration_s * 1000 / config.tick_ms)
        self.dwell_ticks_needed = max(1, round(cfg.aim_dwell_ms / config.tick_ms))
        self.hp = cfg.hp_per_assistant * len(self.towers)
        self.initial_hp = self.hp
        self.torch_x = 0.5
        self.tick_count = 0
        self.outcome = "ongoing"

    @property
    def terminal(self) -> bool:
        return self.outcome != "ongoing"

    def tick(self, inputs: TickInputs) -> List[GameOutput]:
        if self.terminal:
            raise TerminalStateError("virus hitter episode already finished")
        self.tick_count += 1
        outputs: List[GameOutput] = []
        self._load_bombs(inputs, outputs)
        self._track_torch(inputs)
        self._aim_and_launch(outputs)
        if self.hp == 0:
            self.outcome = "won"
            outputs.append(GameOutput("game_finished", self.tick_count, {"outcome": "won"}))
        elif self.tick_count >= self.duration_ticks:
            self.outcome = "lost"
            outputs.append(GameOutput("game_finished", self.tick_count, {"outcome": "lost"}))
        return outputs

    def _load_bombs(self, inputs: TickInputs, outputs: List[GameOutput]) -> None:
        cap = self.config.virus_hitter.bomb_cap
        by_pid = {tower.participant_id: tower for tower in self.towers}
        for event in inputs.events:
            if event.kind != GestureKind.TWIST_REP:
                continue
            tower = by_pid.get(event.participant_id)
            if tower is None or tower.bombs >= cap:
                continue
            tower.bombs += 1
            tower.loaded_total += 1
            outputs.append(
                GameOutput(
                    "bomb_loaded",
                    self.tick_count,
                    {"participant_id": tower.participant_id, "bombs": tower.bombs},
                )
            )

    def _track_torch(self, inputs: TickInputs) -> None:
        nose_x = None
        for frame in inputs.frames:
            if frame.participant_id == self.hitter_id and frame.keypoints.nose.visible:
                nose_x = frame.keypoints.nose.x
        if nose_x is not None:
            alpha = self.config.virus_hitter.torch_smoothing
            self.torch_x += alpha * (nose_x - self.torch_x)

    def _aim_and_launch(self, outputs: List[GameOutput]) -> None:
        k = len(self.towers)
        slot = min(int(self.torch_x * k), k - 1)
        for index, tower in enumerate(self.towers):
            if index == slot and tower.bombs >= 1:
                tower.dwell_ticks += 1
                if tower.dwell_ticks >= self.dwell_ticks_needed:
                    tower.bombs -= 1
                    tower.launched += 1
                    tower.dwell_ticks = 0
                    self.hp -= 1
                    outputs.append(
                        GameOutput(
                            "bomb_launched",
                            self.tick_count,
                            {
                                "participant_id": tower.participant_id,
                                "color": tower.color,
                                "hp": self.hp,
                            },
                        )
                    )
            else:
                tower.dwell_ticks = 0

    def end(self) -> None:
        if self.outcome == "ongoing":
            self.outcome = "aborted"

    def results(self, rep_counts: Dict[str, Dict[str, int]] | None = None) -> GameResults:
        per: Dict[str, dict] = {}
        nicknames = {p.participant_id: p.nickname for p in self.participants}
        launches_total = sum(t.launched for t in self.towers)
        per[self.hitter_id] = {
            "nickname": nicknames[self.hitter_id],
            "role": "hitter",
            "launches": launches_total,
        }
        for tower in self.towers:
            per[tower.participant_id] = {
                "nickname": nicknames[tower.participant_id],
                "role": "assistant",
                "color": tower.color,
                "bombs_loaded": tower.loaded_total,
                "launches": tower.launched,
            }
        return GameResults(
            game=self.kind,
            outcome=self.outcome,
            duration_ticks=self.tick_count,
            per_participant=per,
            rep_counts=rep_counts or {},
        )

    def state_dict(self) -> dict:
        return {
            "elapsed_ticks": self.tick_count,
            "duration_ticks": self.duration_ticks,
            "hitter": self.hitter_id,
            "torch_x": self.torch_x,
            "hp": self.hp,
            "initial_hp": self.initial_hp,
            "outcome": self.outcome,
            "towers": [
                {
                    "participant_id": t.participant_id,
                    "color": t.color,
                    "bombs": t.bombs,
                    "dwell_ms": t.dwell_ticks * self.config.tick_ms,
                }
                for t in self.towers
            ],
        }
