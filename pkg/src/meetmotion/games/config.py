"""Gameplay parameter sets. Defaults are tuned for desk-scale play at 20 Hz
and pinned by tests; engines refuse any tick size other than 50 ms."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

TICK_MS = 50


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class FrostConfig:
    grid_w: int = 32
    grid_h: int = 18
    edge_growth_per_s: float = 0.15
    interior_growth_per_s: float = 0.25
    interior_gate: float = 0.5          # min of max-4-neighbor intensity to spread inward
    clear_radius: float = 0.12
    clear_displacement: float = 0.01    # per-frame keypoint movement that counts as a swipe

    def validate(self) -> None:
        if self.grid_w < 2 or self.grid_h < 2:
            raise ConfigError("frost grid must be at least 2x2")
        for name in ("edge_growth_per_s", "interior_growth_per_s", "clear_radius", "clear_displacement"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if not 0.0 <= self.interior_gate <= 1.0:
            raise ConfigError("interior_gate must be in [0,1]")


@dataclass(frozen=True)
class FoodRainConfig:
    duration_s: float = 90.0
    spawn_interval_s: float = 1.2
    fruit_probability: float = 0.7
    fall_speed_per_s: float = 0.25      # tile heights per second
    catch_half_width: float = 0.08
    catch_half_height: float = 0.06

    def validate(self) -> None:
        for name in ("duration_s", "spawn_interval_s", "fall_speed_per_s", "catch_half_width", "catch_half_height"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if not 0.0 <= self.fruit_probability <= 1.0:
            raise ConfigError("fruit_probability must be in [0,1]")


@dataclass(frozen=True)
class VirusHitterConfig:
    duration_s: float = 120.0
    bomb_cap: int = 3
    aim_dwell_ms: int = 600
    hp_per_assistant: int = 2
    torch_smoothing: float = 0.3        # per-tick exponential step toward the hitter's nose.x

    def validate(self) -> None:
        if self.duration_s <= 0:
            raise ConfigError("duration_s must be positive")
        if self.bomb_cap < 1:
            raise ConfigError("bomb_cap must be at least 1")
        if self.aim_dwell_ms <= 0:
            raise ConfigError("aim_dwell_ms must be positive")
        if self.hp_per_assistant < 1:
            raise ConfigError("hp_per_assistant must be at least 1")
        if not 0.0 < self.torch_smoothing <= 1.0:
            raise ConfigError("torch_smoothing must be in (0,1]")


@dataclass(frozen=True)
class GameConfig:
    tick_ms: int = TICK_MS
    frost: FrostConfig = field(default_factory=FrostConfig)
    food_rain: FoodRainConfig = field(default_factory=FoodRainConfig)
    virus_hitter: VirusHitterConfig = field(default_factory=VirusHitterConfig)

    def validate(self) -> None:
        if self.tick_ms != TICK_MS:
            raise ConfigError(f"engine runs at a fixed {TICK_MS} ms tick, got {self.tick_ms}")
        self.frost.validate()
        self.food_rain.validate()
        self.virus_hitter.validate()

    @property
    def dt(self) -> float:
        return self.tick_ms / 1000.0

    def to_dict(self) -> dict:
        return asdict(self)
