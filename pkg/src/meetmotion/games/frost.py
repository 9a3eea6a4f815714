"""Frost: ice creeps in from the tile edges; body movement swipes it away.

Each participant owns a grid of cell intensities in [0, 1]. Border cells grow
unconditionally, interior cells grow once a 4-neighbor is frosted past the
gate, and any keypoint moving at least the clear displacement in one frame
zeroes every cell within the clear radius. Continuous game: no terminal state.
"""

from __future__ import annotations

from typing import Dict, List, Sequence, Tuple

from meetmotion.games.common import (
    GameKind,
    GameOutput,
    GameResults,
    Participant,
    TerminalStateError,
    TickInputs,
    UnknownParticipantGameError,
)
from meetmotion.games.config import GameConfig
from meetmotion.gestures import KEYPOINT_NAMES


class FrostGame:
    kind = GameKind.FROST

    def __init__(self, participants: Sequence[Participant], config: GameConfig, seed: int) -> None:
        config.validate()
        self.config = config
        self.participants = list(participants)
        self.seed = seed
        self.tick_count = 0
        self.terminal = False  # only flips when the episode is ended explicitly
        cfg = config.frost
        self._w, self._h = cfg.grid_w, cfg.grid_h
        self.grids: Dict[str, List[float]] = {
            p.participant_id: [0.0] * (self._w * self._h) for p in participants
        }
        self.cleared: Dict[str, int] = {p.participant_id: 0 for p in participants}
        self._last_points: Dict[str, Dict[str, Tuple[float, float]]] = {
            p.participant_id: {} for p in participants
        }
        # cell centers, row-major
        self._cx = [(i + 0.5) / self._w for i in range(self._w)]
        self._cy = [(j + 0.5) / self._h for j in range(self._h)]

    def tick(self, inputs: TickInputs) -> List[GameOutput]:
        if self.terminal:
            raise TerminalStateError("frost episode already ended")
        self.tick_count += 1
        self._grow()
        for frame in inputs.frames:
            if frame.participant_id in self.grids:
                self._sweep(frame)
        return []

    def _grow(self) -> None:
        cfg = self.config.frost
        dt = self.config.dt
        w, h = self._w, self._h
        edge_gain = cfg.edge_growth_per_s * dt
        interior_rate = cfg.interior_growth_per_s * dt
        for grid in self.grids.values():
            old = grid[:]
            for j in range(h):
                row = j * w
                for i in range(w):
                    idx = row + i
                    if i == 0 or j == 0 or i == w - 1 or j == h - 1:
                        gain = edge_gain
                    else:
                        neighbor = max(old[idx - 1], old[idx + 1], old[idx - w], old[idx + w])
                        if neighbor < cfg.interior_gate:
                            continue
                        gain = interior_rate * neighbor
                    value = old[idx] + gain
                    grid[idx] = 1.0 if value > 1.0 else value

    def _sweep(self, frame) -> None:
        cfg = self.config.frost
        pid = frame.participant_id
        grid = self.grids[pid]
        prev_points = self._last_points[pid]
        radius_sq = cfg.clear_radius * cfg.clear_radius
        for name in KEYPOINT_NAMES:
            point = frame.keypoints.point(name)
            if not point.visible:
                continue
            prev = prev_points.get(name)
            prev_points[name] = (point.x, point.y)
            if prev is None:
                continue
            dx, dy = point.x - prev[0], point.y - prev[1]
            if (dx * dx + dy * dy) ** 0.5 < cfg.clear_displacement:
                continue
            self._clear_circle(pid, point.x, point.y, radius_sq)

    def _clear_circle(self, pid: str, x: float, y: float, radius_sq: float) -> None:
        cfg = self.config.frost
        grid = self.grids[pid]
        w, h = self._w, self._h
        r = cfg.clear_radius
        i_lo = max(0, int((x - r) * w - 0.5))
        i_hi = min(w - 1, int((x + r) * w + 0.5))
        j_lo = max(0, int((y - r) * h - 0.5))
        j_hi = min(h - 1, int((y + r) * h + 0.5))
        cleared = 0
        for j in range(j_lo, j_hi + 1):
            dy = self._cy[j] - y
            row = j * w
            for i in range(i_lo, i_hi + 1):
                dx = self._cx[i] - x
                if dx * dx + dy * dy <= radius_sq:
                    idx = row + i
                    if grid[idx] >= 0.5:
                        cleared += 1  # tally only visible frost actually swept
                    grid[idx] = 0.0
        self.cleared[pid] += cleared

    def coverage(self, participant_id: str) -> float:
        grid = self.grids.get(participant_id)
        if grid is None:
            raise UnknownParticipantGameError(f"unknown participant {participant_id!r}")
        return sum(1 for v in grid if v >= 0.5) / len(grid)

    def end(self) -> None:
        self.terminal = True

    def results(self, rep_counts: Dict[str, Dict[str, int]] | None = None) -> GameResults:
        per = {
            p.participant_id: {
                "nickname": p.nickname,
                "coverage": self.coverage(p.participant_id),
                "cleared_cells": self.cleared[p.participant_id],
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
            "grid_w": self._w,
            "grid_h": self._h,
            "participants": {
                pid: {
                    "cells": self.grids[pid][:],
                    "coverage": self.coverage(pid),
                    "cleared_cells": self.cleared[pid],
                }
                for pid in self.grids
            },
        }
