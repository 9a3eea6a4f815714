"""Shared game-engine machinery: kinds, tick inputs, role assignment, results."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Dict, List, Sequence

from meetmotion.gestures import GestureEvent, PoseFrame
from meetmotion.prng import SplitMix64

if TYPE_CHECKING:
    from meetmotion.games.config import GameConfig

PALETTE_SIZE = 8  # distinct watchtower colors; caps a roster at 8 assistants + hitter


class GameKind(str, Enum):
    FROST = "frost"
    FOOD_RAIN = "food_rain"
    VIRUS_HITTER = "virus_hitter"


class GameError(ValueError):
    pass


class TerminalStateError(GameError):
    """Ticking a finished game."""


class UnknownParticipantGameError(GameError):
    pass


@dataclass(frozen=True)
class Participant:
    participant_id: str
    nickname: str
    join_seq: int


@dataclass(frozen=True)
class TickInputs:
    """Everything one 50 ms tick may consume, pre-sorted by (t_ms, join order)."""

    events: Sequence[GestureEvent] = ()
    frames: Sequence[PoseFrame] = ()

    @staticmethod
    def sorted_inputs(
        events: Sequence[GestureEvent],
        frames: Sequence[PoseFrame],
        join_order: Dict[str, int],
    ) -> "TickInputs":
        key = lambda item: (item.t_ms, join_order.get(item.participant_id, 1 << 30))
        return TickInputs(
            events=tuple(sorted(events, key=key)),
            frames=tuple(sorted(frames, key=key)),
        )


@dataclass(frozen=True)
class GameOutput:
    """A discrete in-game happening surfaced alongside each tick's snapshot."""

    kind: str
    tick: int
    data: dict


@dataclass(frozen=True)
class GameResults:
    game: GameKind
    outcome: str
    duration_ticks: int
    per_participant: Dict[str, dict]
    rep_counts: Dict[str, Dict[str, int]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "game": self.game.value,
            "outcome": self.outcome,
            "duration_ticks": self.duration_ticks,
            "duration_s": self.duration_ticks * 0.05,
            "per_participant": self.per_participant,
            "rep_counts": self.rep_counts,
        }


def assign_roles(
    participants: Sequence[Participant], prng: SplitMix64
) -> tuple[str, List[tuple[str, int]]]:
    """Pick one hitter uniformly; everyone else keeps roster order and gets a
    distinct color index from the fixed palette."""
    n = len(participants)
    if n < 2:
        raise GameError("virus hitter needs at least 2 participants")
    if n > PALETTE_SIZE + 1:
        raise GameError(f"at most {PALETTE_SIZE + 1} participants (color palette limit)")
    hitter = participants[prng.below(n)].participant_id
    assistants = [
        (p.participant_id, color)
        for color, p in enumerate(p for p in participants if p.participant_id != hitter)
    ]
    return hitter, assistants


def game_init(
    kind: GameKind,
    participants: Sequence[Participant],
    config: "GameConfig",
    seed: int,
):
    """Construct the engine for ``kind`` with deterministic seed-driven setup."""
    from meetmotion.games.config import GameConfig
    from meetmotion.games.food_rain import FoodRainGame
    from meetmotion.games.frost import FrostGame
    from meetmotion.games.virus_hitter import VirusHitterGame

    if not participants:
        raise GameError("empty roster")
    config = config or GameConfig()
    config.validate()
    if kind == GameKind.FROST:
        return FrostGame(participants, config, seed)
    if kind == GameKind.FOOD_RAIN:
        return FoodRainGame(participants, config, seed)
    if kind == GameKind.VIRUS_HITTER:
        return VirusHitterGame(participants, config, seed)
    raise GameError(f"unknown game kind {kind!r}")
