"""Food Rain: fruits and desserts fall down each player's tile; catch with an
open mouth. Fruit scores +1, dessert -1, so score = fruits - desserts always.

Per tick: items fall, the spawn schedule fires (one item per participant every
interval, x and type drawn from the shared PRNG in roster order), open mouths
within the catch box grab items, and items past the bottom edge are missed.
Terminal once the configured duration has elapsed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from meetmotion.games.common import (
    GameKind,
    GameOutput,
    GameResults,
    Participant,
    TerminalStateError,
    TickInputs,
)
from meetmotion.games.config import GameConfig
from meetmotion.gestures import GestureKind
from meetmotion.prng import SplitMix64


@dataclass
class Item:
    item_id: int
    type: str  # "fruit" | "dessert"
    x: float
    y: float

    def to_dict(self) -> dict:
        return {"id": self.item_id, "type": self.type, "x": self.x, "y": self.y}


class FoodRainGame:
    kind = GameKind.FOOD_RAIN

    def __init__(self, participants: Sequence[Participant], config: GameConfig, seed: int) -> None:
        config.validate()
        self.config = config
        self.participants = list(participants)
        self.seed = seed
        self.prng = SplitMix64(seed)
        self.tick_count = 0
        self.terminal = False
        cfg = config.food_rain
        self.duration_ticks = round(cfg.duration_s * 1000 / config.tick_ms)
        self.spawn_interval_ticks = max(1, round(cfg.spawn_interval_s * 1000 / config.tick_ms))
        self._next_item_id = 0
        pids = [p.participant_id for p in participants]
        self.items: Dict[str, List[Item]] = {pid: [] for pid in pids}
        self.scores: Dict[str, int] = {pid: 0 for pid in pids}
        self.fruits_caught: Dict[str, int] = {pid: 0 for pid in pids}
        self.desserts_caught: Dict[str, int] = {pid: 0 for pid in pids}
        self.spawned: Dict[str, int] = {pid: 0 for pid in pids}
        self.missed: Dict[str, int] = {pid: 0 for pid in pids}
        self.mouth_open: Dict[str, bool] = {pid: False for pid in pids}
        self.mouth_center: Dict[str, Optional[Tuple[float, float]]] = {pid: None for pid in pids}

    def tick(self, inputs: TickInputs) -> List[GameOutput]:
        if self.terminal:
            raise TerminalStateError("food rain episode already finished")
        self.tick_count += 1
        outputs: List[GameOutput] = []
        self._apply_inputs(inputs)
        self._fall()
        if self.tick_count % self.spawn_interval_ticks == 0:
            self._spawn(outputs)
        self._catch(outputs)
        self._drop_missed(outputs)
        if self.tick_count >= self.duration_ticks:
            self.terminal = True
            outputs.append(GameOutput("game_finished", self.tick_count, {"outcome": "ended"}))
        return outputs

    def _apply_inputs(self, inputs: TickInputs) -> None:
        for event in inputs.events:
            if event.participant_id not in self.mouth_open:
                continue
            if event.kind == GestureKind.MOUTH_OPEN:
                self.mouth_open[event.participant_id] = True
            elif event.kind == GestureKind.MOUTH_CLOSE:
                self.mouth_open[event.participant_id] = False
        for frame in inputs.frames:
            pid = frame.participant_id
            if pid not in self.mouth_center:
                continue
            left, right = frame.keypoints.mouth_left, frame.keypoints.mouth_right
            if left.visible and right.visible:
                self.mouth_center[pid] = ((left.x + right.x) / 2.0, (left.y + right.y) / 2.0)

    def _fall(self) -> None:
        step = self.config.food_rain.fall_speed_per_s * self.config.dt
        for items in self.items.values():
            for item in items:
                item.y += step

    def _spawn(self, outputs: List[GameOutput]) -> None:
        cfg = self.config.food_rain
        for p in self.participants:
            x = 0.1 + 0.8 * self.prng.unit()
            item_type = "fruit" if self.prng.unit() < cfg.fruit_probability else "dessert"
            item = Item(self._next_item_id, item_type, x, 0.0)
            self._next_item_id += 1
            self.items[p.participant_id].append(item)
            self.spawned[p.participant_id] += 1
            outputs.append(
                GameOutput(
                    "item_spawned",
                    self.tick_count,
                    {"participant_id": p.participant_id, **item.to_dict()},
                )
            )

    def _catch(self, outputs: List[GameOutput]) -> None:
        cfg = self.config.food_rain
        for p in self.participants:
            pid = p.participant_id
            if not self.mouth_open[pid]:
                continue
            center = self.mouth_center[pid]
            if center is None:
                continue
            mx, my = center
            remaining: List[Item] = []
            for item in self.items[pid]:
                if abs(item.x - mx) <= cfg.catch_half_width and abs(item.y - my) <= cfg.catch_half_height:
                    if item.type == "fruit":
                        self.fruits_caught[pid] += 1
                        self.scores[pid] += 1
                    else:
                        self.desserts_caught[pid] += 1
                        self.scores[pid] -= 1
                    outputs.append(
                        GameOutput(
                            "item_caught",
                            self.tick_count,
                            {
                                "participant_id": pid,
                                "item_id": item.item_id,
                                "type": item.type,
                                "score": self.scores[pid],
                            },
                        )
                    )
                else:
                    remaining.append(item)
            self.items[pid] = remaining

    def _drop_missed(self, outputs: List[GameOutput]) -> None:
        for pid, items in self.items.items():
            remaining = []
            for item in items:
                if item.y > 1.0:
                    self.missed[pid] += 1
                    outputs.append(
                        GameOutput(
                            "item_missed",
                            self.tick_count,
                            {"participant_id": pid, "item_id": item.item_id, "type": item.type},
                        )
                    )
                else:
                    remaining.append(item)
            self.items[pid] = remaining

    def end(self) -> None:
        self.terminal = True

    def results(self, rep_counts: Dict[str, Dict[str, int]] | None = None) -> GameResults:
        per = {
            p.participant_id: {
                "nickname": p.nickname,
                "score": self.scores[p.participant_id],
                "fruits_caught": self.fruits_caught[p.participant_id],
                "desserts_caught": self.desserts_caught[p.participant_id],
                "missed": self.missed[p.participant_id],
            }
            for p in self.participants
        }
        return GameResults(
            game=self.kind,
            outcome="ended",
            duration_ticks=self.tick_count,
            per_participant=per,
            rep_counts=rep_counts or {},
        )

    def state_dict(self) -> dict:
        return {
            "elapsed_ticks": self.tick_count,
            "duration_ticks": self.duration_ticks,
            "participants": {
                pid: {
                    "score": self.scores[pid],
                    "items": [item.to_dict() for item in self.items[pid]],
                    "mouth_open": self.mouth_open[pid],
                    "spawned": self.spawned[pid],
                    "caught": self.fruits_caught[pid] + self.desserts_caught[pid],
                    "missed": self.missed[pid],
                }
                for pid in self.scores
            },
        }


def leaderboard(scores: Dict[str, int], roster: Sequence[Participant]) -> List[dict]:
    """Standard competition ranking (ties share a rank, next rank skips);
    equal scores keep roster join order."""
    entries = [(p, scores.get(p.participant_id, 0)) for p in roster]
    entries.sort(key=lambda e: (-e[1], e[0].join_seq))
    ranked: List[dict] = []
    for pos, (p, score) in enumerate(entries):
        if pos > 0 and score == entries[pos - 1][1]:
            rank = ranked[-1]["rank"]
        else:
            rank = pos + 1
        ranked.append({"rank": rank, "nickname": p.nickname, "score": score})
    return ranked
