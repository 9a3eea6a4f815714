"""Deterministic fixed-timestep engines for the three meeting games."""

from meetmotion.games.common import (
    GameError,
    GameKind,
    GameOutput,
    GameResults,
    Participant,
    TerminalStateError,
    TickInputs,
    assign_roles,
    game_init,
)
from meetmotion.games.config import (
    FoodRainConfig,
    FrostConfig,
    GameConfig,
    VirusHitterConfig,
)
from meetmotion.games.food_rain import FoodRainGame, leaderboard
from meetmotion.games.frost import FrostGame
from meetmotion.games.virus_hitter import VirusHitterGame

__all__ = [
    "GameError",
    "GameKind",
    "GameOutput",
    "GameResults",
    "Participant",
    "TerminalStateError",
    "TickInputs",
    "assign_roles",
    "game_init",
    "GameConfig",
    "FrostConfig",
    "FoodRainConfig",
    "VirusHitterConfig",
    "FrostGame",
    "FoodRainGame",
    "VirusHitterGame",
    "leaderboard",
]
