"""Catalog profiles, recommendation filtering, and ratings statistics."""

import random

import pytest

from meetmotion.catalog import (
    EVALUATION_FIXTURE,
    BadRow,
    DimensionStats,
    EmptyCatalogError,
    GameProfile,
    InvertedIntervalError,
    MeetingContext,
    MissingHeaderError,
    NUMERIC_DIMENSIONS,
    OutOfRangeValueError,
    RatingRecord,
    UnknownDimensionError,
    aggregate_ratings,
    default_catalog,
    evaluation_fixture_stats,
    iqr_plot_data,
    parse_ratings_csv,
    recommend,
)


def oracle_quartile(values, p):
    """Sort-and-interpolate at h = (n-1)p, written out longhand."""
    data = sorted(values)
    if len(data) == 1:
        return data[0]
    h = (len(data) - 1) * p
    lo = int(h)
    frac = h - lo
    if lo + 1 == len(data):
        return data[-1]
    return data[lo] + frac * (data[lo + 1] - data[lo])


class TestDefaultCatalog:
    def test_pinned_profile_values(self):
        by_game = {p.game: p for p in default_catalog()}
        assert by_game["frost"].exertion == 0.207
        assert by_game["virus_hitter"].bodily_interplay == 0.858
        assert by_game["food_rain"].attention == 0.781
        assert by_game["frost"].start_time == "mid_meeting"
        assert by_game["food_rain"].start_time == "break"
        assert by_game["virus_hitter"].layout == "asymmetric"

    def test_profiles_match_fixture_means(self):
        for profile in default_catalog():
            for dim in NUMERIC_DIMENSIONS:
                assert getattr(profile, dim) == EVALUATION_FIXTURE[(profile.game, dim)][0]

    def test_all_numeric_fields_in_unit_interval(self):
        for profile in default_catalog():
            for dim in NUMERIC_DIMENSIONS:
                assert 0.0 <= getattr(profile, dim) <= 1.0

    def test_out_of_range_profile_rejected(self):
        with pytest.raises(OutOfRangeValueError):
            GameProfile(
                game="bad", exertion=1.2, stretch=0, body_parts=0, attention=0,
                bodily_interplay=0, duration=0, space_type=0,
                start_time="break", layout="symmetric",
            )


class TestRecommend:
    def test_mid_meeting_symmetric_admits_only_frost(self):
        context = MeetingContext(
            phase="mid_meeting", layout="symmetric", privacy=0.2, attention_budget=0.2
        )
        ranked = recommend(context, default_catalog())
        assert [e["game"] for e in ranked] == ["frost"]

    def test_break_asymmetric_admits_only_virus_hitter(self):
        context = MeetingContext(
            phase="break", layout="asymmetric", privacy=0.5, attention_budget=0.5
        )
        ranked = recommend(context, default_catalog())
        assert [e["game"] for e in ranked] == ["virus_hitter"]

    def test_scores_in_unit_interval_and_sorted(self):
        context = MeetingContext(
            phase="break", layout="symmetric", privacy=0.9, attention_budget=0.7,
            desired_exertion=0.4,
        )
        ranked = recommend(context, default_catalog())
        assert ranked
        assert all(0.0 <= e["score"] <= 1.0 for e in ranked)
        assert ranked == sorted(ranked, key=lambda e: -e["score"])

    def test_ranking_invariant_under_distance_scaling(self):
        # score = 1 - mean distance: any positive rescale of distances keeps order
        context = MeetingContext(
            phase="break", layout="symmetric", privacy=0.1, attention_budget=0.9
        )
        catalog = default_catalog()
        ranked = recommend(context, catalog)
        distances = {e["game"]: 1.0 - e["score"] for e in ranked}
        for scale in (0.25, 3.0, 17.0):
            rescored = sorted(ranked, key=lambda e: distances[e["game"]] * scale)
            assert [e["game"] for e in rescored] == [e["game"] for e in ranked]

    def test_empty_catalog_rejected(self):
        context = MeetingContext(
            phase="break", layout="symmetric", privacy=0.5, attention_budget=0.5
        )
        with pytest.raises(EmptyCatalogError):
            recommend(context, [])


class TestAggregate:
    def test_symmetric_sample(self):
        records = [RatingRecord("p1", "frost", "exertion", v) for v in (0.2, 0.4, 0.6, 0.8)]
        stats = aggregate_ratings(records)[("frost", "exertion")]
        assert stats.mean == pytest.approx(0.5)
        assert stats.q1 == pytest.approx(0.35)
        assert stats.q3 == pytest.approx(0.65)

    def test_single_value(self):
        stats = aggregate_ratings([RatingRecord("p1", "frost", "exertion", 0.7)])
        entry = stats[("frost", "exertion")]
        assert entry.mean == pytest.approx(0.7)
        assert entry.sd is None
        assert entry.q1 == entry.q3 == 0.7

    def test_permutation_invariance(self):
        rng = random.Random(3)
        values = [rng.random() for _ in range(17)]
        records = [RatingRecord(f"p{i}", "g", "attention", v) for i, v in enumerate(values)]
        first = aggregate_ratings(records)
        rng.shuffle(records)
        second = aggregate_ratings(records)
        assert first == second

    def test_matches_longhand_oracle(self):
        rng = random.Random(11)
        for trial in range(50):
            n = rng.randint(1, 30)
            values = [rng.random() for _ in range(n)]
            records = [RatingRecord(f"p{i}", "g", "stretch", v) for i, v in enumerate(values)]
            stats = aggregate_ratings(records)[("g", "stretch")]
            assert stats.q1 == pytest.approx(oracle_quartile(values, 0.25), abs=1e-12)
            assert stats.q3 == pytest.approx(oracle_quartile(values, 0.75), abs=1e-12)
            assert stats.mean == pytest.approx(sum(values) / n, abs=1e-12)
            assert min(values) <= stats.q1 <= stats.q3 <= max(values)
            assert min(values) <= stats.mean <= max(values)

    def test_out_of_range_value_rejected(self):
        with pytest.raises(OutOfRangeValueError):
            aggregate_ratings([RatingRecord("p", "g", "exertion", 1.5)])

    def test_unknown_dimension_rejected(self):
        with pytest.raises(UnknownDimensionError):
            aggregate_ratings([RatingRecord("p", "g", "charm", 0.5)])


class TestCsv:
    HEADER = "participant_id,game_id,dimension,value\n"

    def test_single_good_row(self):
        records, bad = parse_ratings_csv(self.HEADER + "p1,frost,exertion,0.25\n")
        assert bad == []
        assert records == [RatingRecord("p1", "frost", "exertion", 0.25)]

    def test_whitespace_trimmed(self):
        records, bad = parse_ratings_csv(self.HEADER + " p1 , frost , exertion , 0.25 \n")
        assert records[0].participant_id == "p1"
        assert bad == []

    def test_out_of_range_is_bad_row(self):
        records, bad = parse_ratings_csv(self.HEADER + "p1,frost,exertion,1.5\n")
        assert records == []
        assert bad == [BadRow(2, "value 1.5 outside [0,1]")]

    def test_unknown_dimension_is_bad_row(self):
        _, bad = parse_ratings_csv(self.HEADER + "p1,frost,sparkle,0.5\n")
        assert bad[0].line == 2

    def test_empty_file_missing_header(self):
        with pytest.raises(MissingHeaderError):
            parse_ratings_csv("")

    def test_wrong_header_rejected(self):
        with pytest.raises(MissingHeaderError):
            parse_ratings_csv("a,b,c,d\np1,frost,exertion,0.5\n")

    def test_blank_lines_skipped(self):
        records, bad = parse_ratings_csv(self.HEADER + "\np1,frost,exertion,0.5\n\n")
        assert len(records) == 1 and not bad


class TestPlotData:
    def test_fixture_exertion_ordering(self):
        segments = iqr_plot_data(evaluation_fixture_stats())
        by_key = {(s["game"], s["dimension"]): s for s in segments}
        frost = by_key[("frost", "exertion")]
        hitter = by_key[("virus_hitter", "exertion")]
        assert frost["q1"] == 0.158 and frost["q3"] == 0.263
        assert hitter["q1"] == 0.466 and hitter["q3"] == 0.649
        assert frost["q3"] < hitter["q1"]  # whole interval below

    def test_fixture_interplay_extremes(self):
        segments = iqr_plot_data(evaluation_fixture_stats())
        by_key = {(s["game"], s["dimension"]): s for s in segments}
        assert by_key[("virus_hitter", "bodily_interplay")]["q3"] == 1.000
        assert by_key[("frost", "bodily_interplay")]["q1"] == 0.000

    def test_inverted_interval_rejected(self):
        broken = {("g", "exertion"): DimensionStats(n=3, mean=0.5, sd=0.1, q1=0.8, q3=0.2)}
        with pytest.raises(InvertedIntervalError):
            iqr_plot_data(broken)
