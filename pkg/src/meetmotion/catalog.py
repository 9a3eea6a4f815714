"""Machine-readable design-space catalog for the meeting games.

Each game carries a profile over seven numeric dimensions (0..1) plus a
preferred start time and conferencing layout. The module recommends games for
a meeting context, ingests evaluation-panel ratings, computes descriptive
statistics, and exports interquartile plot segments. The bundled fixture pins
the evaluation statistics the default profiles are built from.
"""

from __future__ import annotations

import csv
import io
import statistics
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

NUMERIC_DIMENSIONS = (
    "exertion",
    "stretch",
    "body_parts",
    "attention",
    "bodily_interplay",
    "duration",
    "space_type",
)

START_TIMES = ("mid_meeting", "break", "either")
LAYOUTS = ("symmetric", "asymmetric", "either")

RATINGS_CSV_HEADER = ("participant_id", "game_id", "dimension", "value")


class CatalogError(ValueError):
    pass


class OutOfRangeValueError(CatalogError):
    pass


class UnknownDimensionError(CatalogError):
    pass


class MissingHeaderError(CatalogError):
    pass


class InvertedIntervalError(CatalogError):
    pass


class EmptyCatalogError(CatalogError):
    pass


@dataclass(frozen=True)
class GameProfile:
    game: str
    exertion: float
    stretch: float
    body_parts: float
    attention: float
    bodily_interplay: float
    duration: float
    space_type: float
    start_time: str
    layout: str

    def __post_init__(self) -> None:
        for dim in NUMERIC_DIMENSIONS:
            value = getattr(self, dim)
            if not 0.0 <= value <= 1.0:
                raise OutOfRangeValueError(f"{self.game}.{dim}={value} outside [0,1]")
        if self.start_time not in START_TIMES:
            raise CatalogError(f"bad start_time {self.start_time!r}")
        if self.layout not in LAYOUTS:
            raise CatalogError(f"bad layout {self.layout!r}")

    def dimension(self, name: str) -> float:
        if name not in NUMERIC_DIMENSIONS:
            raise UnknownDimensionError(f"unknown dimension {name!r}")
        return getattr(self, name)

    def to_dict(self) -> dict:
        out = {dim: getattr(self, dim) for dim in NUMERIC_DIMENSIONS}
        out.update(game=self.game, start_time=self.start_time, layout=self.layout)
        return out


@dataclass(frozen=True)
class MeetingContext:
    phase: str                      # "break" | "mid_meeting"
    layout: str                     # "symmetric" | "asymmetric"
    privacy: float                  # 1 = fully private space
    attention_budget: float
    desired_exertion: Optional[float] = None
    minutes_available: float = 5.0

    def __post_init__(self) -> None:
        if self.phase not in ("break", "mid_meeting"):
            raise CatalogError(f"bad phase {self.phase!r}")
        if self.layout not in ("symmetric", "asymmetric"):
            raise CatalogError(f"bad layout {self.layout!r}")
        for name in ("privacy", "attention_budget"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise OutOfRangeValueError(f"{name}={value} outside [0,1]")
        if self.desired_exertion is not None and not 0.0 <= self.desired_exertion <= 1.0:
            raise OutOfRangeValueError("desired_exertion outside [0,1]")
        if self.minutes_available <= 0:
            raise CatalogError("minutes_available must be positive")


@dataclass(frozen=True)
class RatingRecord:
    participant_id: str
    game_id: str
    dimension: str
    value: float


@dataclass(frozen=True)
class DimensionStats:
    n: int
    mean: float
    sd: Optional[float]  # sample standard deviation; absent for n < 2
    q1: float
    q3: float


@dataclass(frozen=True)
class BadRow:
    line: int
    reason: str


def default_catalog() -> List[GameProfile]:
    """The three built-in games, profiled from the bundled evaluation fixture
    (numeric scores are that fixture's means)."""
    return [
        GameProfile(
            game="frost",
            exertion=0.207, stretch=0.349, body_parts=0.206, attention=0.228,
            bodily_interplay=0.178, duration=0.503, space_type=0.458,
            start_time="mid_meeting", layout="symmetric",
        ),
        GameProfile(
            game="food_rain",
            exertion=0.462, stretch=0.474, body_parts=0.278, attention=0.781,
            bodily_interplay=0.414, duration=0.478, space_type=0.322,
            start_time="break", layout="symmetric",
        ),
        GameProfile(
            game="virus_hitter",
            exertion=0.551, stretch=0.609, body_parts=0.570, attention=0.523,
            bodily_interplay=0.858, duration=0.491, space_type=0.570,
            start_time="break", layout="asymmetric",
        ),
    ]


# Descriptive statistics of the panel ratings behind the default profiles,
# pinned as a fixture: (game, dimension) -> (mean, sd, q1, q3), n = 15 raters.
EVALUATION_FIXTURE: Dict[Tuple[str, str], Tuple[float, float, float, float]] = {
    ("food_rain", "exertion"): (0.462, 0.251, 0.306, 0.528),
    ("virus_hitter", "exertion"): (0.551, 0.156, 0.466, 0.649),
    ("frost", "exertion"): (0.207, 0.109, 0.158, 0.263),
    ("food_rain", "stretch"): (0.474, 0.276, 0.278, 0.636),
    ("virus_hitter", "stretch"): (0.609, 0.210, 0.453, 0.750),
    ("frost", "stretch"): (0.349, 0.144, 0.250, 0.418),
    ("food_rain", "body_parts"): (0.278, 0.172, 0.157, 0.430),
    ("virus_hitter", "body_parts"): (0.570, 0.212, 0.419, 0.750),
    ("frost", "body_parts"): (0.206, 0.220, 0.090, 0.236),
    ("food_rain", "attention"): (0.781, 0.256, 0.703, 0.984),
    ("virus_hitter", "attention"): (0.523, 0.276, 0.422, 0.690),
    ("frost", "attention"): (0.228, 0.160, 0.141, 0.306),
    ("food_rain", "bodily_interplay"): (0.414, 0.270, 0.220, 0.594),
    ("virus_hitter", "bodily_interplay"): (0.858, 0.176, 0.799, 1.000),
    ("frost", "bodily_interplay"): (0.178, 0.273, 0.000, 0.248),
    ("food_rain", "duration"): (0.478, 0.271, 0.337, 0.601),
    ("virus_hitter", "duration"): (0.491, 0.167, 0.390, 0.573),
    ("frost", "duration"): (0.503, 0.270, 0.282, 0.669),
    ("food_rain", "space_type"): (0.322, 0.310, 0.08, 0.395),
    ("virus_hitter", "space_type"): (0.570, 0.311, 0.330, 0.784),
    ("frost", "space_type"): (0.458, 0.340, 0.225, 0.722),
}

EVALUATION_FIXTURE_N = 15


def evaluation_fixture_stats() -> Dict[Tuple[str, str], DimensionStats]:
    return {
        key: DimensionStats(n=EVALUATION_FIXTURE_N, mean=mean, sd=sd, q1=q1, q3=q3)
        for key, (mean, sd, q1, q3) in EVALUATION_FIXTURE.items()
    }


def recommend(
    context: MeetingContext, catalog: Sequence[GameProfile]
) -> List[dict]:
    """Rank games for a meeting context.

    Games whose start time or layout conflicts with the context are dropped
    outright ("either" never conflicts). Survivors score 1 minus the mean
    absolute distance between profile and target on the queried dimensions:
    attention <- attention_budget, exertion <- desired exertion when given,
    space_type <- 1 - privacy. Ties keep catalog order.
    """
    if not catalog:
        raise EmptyCatalogError("catalog is empty")
    targets: List[Tuple[str, float]] = [
        ("attention", context.attention_budget),
        ("space_type", 1.0 - context.privacy),
    ]
    if context.desired_exertion is not None:
        targets.insert(1, ("exertion", context.desired_exertion))
    ranked: List[dict] = []
    for profile in catalog:
        if profile.start_time != "either" and profile.start_time != context.phase:
            continue
        if profile.layout != "either" and profile.layout != context.layout:
            continue
        distance = sum(abs(profile.dimension(d) - t) for d, t in targets) / len(targets)
        ranked.append({"game": profile.game, "score": 1.0 - distance})
    ranked.sort(key=lambda entry: -entry["score"])  # stable: ties keep catalog order
    return ranked


def _quartiles(values: Sequence[float]) -> Tuple[float, float]:
    """Q1/Q3 by linear interpolation at h = (n-1)p over the sorted sample."""
    if len(values) == 1:
        return values[0], values[0]
    q1, _, q3 = statistics.quantiles(values, n=4, method="inclusive")
    return q1, q3


def aggregate_ratings(
    records: Iterable[RatingRecord],
) -> Dict[Tuple[str, str], DimensionStats]:
    """Descriptive statistics per (game, dimension); order-independent."""
    buckets: Dict[Tuple[str, str], List[float]] = {}
    for record in records:
        if record.dimension not in NUMERIC_DIMENSIONS:
            raise UnknownDimensionError(f"unknown dimension {record.dimension!r}")
        if not 0.0 <= record.value <= 1.0:
            raise OutOfRangeValueError(
                f"value {record.value} for {record.game_id}.{record.dimension} outside [0,1]"
            )
        buckets.setdefault((record.game_id, record.dimension), []).append(record.value)
    stats: Dict[Tuple[str, str], DimensionStats] = {}
    for key, values in buckets.items():
        values.sort()
        q1, q3 = _quartiles(values)
        stats[key] = DimensionStats(
            n=len(values),
            mean=statistics.fmean(values),
            sd=statistics.stdev(values) if len(values) >= 2 else None,
            q1=q1,
            q3=q3,
        )
    return stats


def parse_ratings_csv(text: str) -> Tuple[List[RatingRecord], List[BadRow]]:
    """Parse panel ratings; returns valid records plus row-numbered rejects.

    Raises MissingHeaderError when the required header row is absent.
    """
    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    if not rows or tuple(cell.strip() for cell in rows[0]) != RATINGS_CSV_HEADER:
        raise MissingHeaderError(
            f"first row must be {','.join(RATINGS_CSV_HEADER)}"
        )
    records: List[RatingRecord] = []
    bad: List[BadRow] = []
    for line_no, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 4:
            bad.append(BadRow(line_no, f"expected 4 fields, got {len(row)}"))
            continue
        participant, game, dimension, raw_value = (cell.strip() for cell in row)
        if not participant or not game:
            bad.append(BadRow(line_no, "empty participant_id or game_id"))
            continue
        if dimension not in NUMERIC_DIMENSIONS:
            bad.append(BadRow(line_no, f"unknown dimension {dimension!r}"))
            continue
        try:
            value = float(raw_value)
        except ValueError:
            bad.append(BadRow(line_no, f"value {raw_value!r} is not a number"))
            continue
        if not 0.0 <= value <= 1.0:
            bad.append(BadRow(line_no, f"value {value} outside [0,1]"))
            continue
        records.append(RatingRecord(participant, game, dimension, value))
    return records, bad


def iqr_plot_data(
    stats: Mapping[Tuple[str, str], DimensionStats]
) -> List[dict]:
    """One interquartile segment per (game, dimension), ready for plotting."""
    segments: List[dict] = []
    for (game, dimension), entry in sorted(stats.items()):
        if entry.q1 > entry.q3:
            raise InvertedIntervalError(
                f"{game}.{dimension}: q1 {entry.q1} > q3 {entry.q3}"
            )
        segments.append(
            {
                "game": game,
                "dimension": dimension,
                "q1": entry.q1,
                "q3": entry.q3,
                "mean": entry.mean,
            }
        )
    return segments
