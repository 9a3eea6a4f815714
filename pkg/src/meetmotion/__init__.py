"""Anti-sedentary meeting games: gesture tracking, deterministic game engines,
an authoritative session server, a design-space catalog, and a simulation CLI."""

__version__ = "0.1.0"

TICK_MS = 50
TICK_RATE_HZ = 20
TICK_DT = TICK_MS / 1000.0
