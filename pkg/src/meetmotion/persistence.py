"""Flat-file persistence: an append-only results log plus a cumulative
per-nickname leaderboard snapshot that is always reconstructible from the log."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Dict, List

from meetmotion.games.common import GameResults

RESULTS_FILE = "results.jsonl"
LEADERBOARD_FILE = "leaderboard.json"


def episode_points(game: str, entry: dict) -> int:
    """A participant's leaderboard contribution for one episode."""
    if game == "food_rain":
        return int(entry.get("score", 0))
    if game == "frost":
        return int(entry.get("cleared_cells", 0))
    if game == "virus_hitter":
        return int(entry.get("launches", 0))
    return 0


def results_record(timestamp_ms: int, session_id: str, results: GameResults) -> dict:
    record = {"timestamp_ms": timestamp_ms, "session_id": session_id}
    record.update(results.to_dict())
    return record


class ResultsStore:
    """Owns the two files under ``data_dir``; single-writer by construction
    (all session mutation is serialized upstream)."""

    def __init__(self, data_dir: Path | str) -> None:
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.results_path = self.data_dir / RESULTS_FILE
        self.leaderboard_path = self.data_dir / LEADERBOARD_FILE

    def append(self, record: dict) -> None:
        with self.results_path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(record, sort_keys=True) + "\n")
        board = self.read_leaderboard()
        _fold(board, record)
        self._write_leaderboard(board)

    def read_records(self) -> List[dict]:
        if not self.results_path.exists():
            return []
        records = []
        with self.results_path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    records.append(json.loads(line))
        return records

    def read_leaderboard(self) -> Dict[str, dict]:
        if not self.leaderboard_path.exists():
            return {}
        return json.loads(self.leaderboard_path.read_text(encoding="utf-8"))

    def rebuild_leaderboard(self) -> Dict[str, dict]:
        """Fold the full log; equals the incrementally maintained snapshot."""
        board: Dict[str, dict] = {}
        for record in self.read_records():
            _fold(board, record)
        return board

    def _write_leaderboard(self, board: Dict[str, dict]) -> None:
        self.leaderboard_path.write_text(
            json.dumps(board, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )


def _fold(board: Dict[str, dict], record: dict) -> None:
    game = record.get("game", "")
    for entry in record.get("per_participant", {}).values():
        nickname = entry.get("nickname", "?")
        totals = board.setdefault(nickname, {"points": 0, "episodes": 0})
        totals["points"] += episode_points(game, entry)
        totals["episodes"] += 1
