import datetime as dt
import statistics
from random import Random

import pytest

from deckforge.deck_model import PricePoint, TimeSeries
from deckforge.errors import (
    InsufficientDataError,
    ScoringError,
    UnboundSlotError,
    ValidationError,
    WindowError,
)
from deckforge.insights import (
    DEFAULT_SCORING,
    DEFAULT_TEMPLATES,
    Insight,
    InsightTemplate,
    Primitive,
    ScoringConfig,
    builtin_scorers,
    generate_insights,
    load_templates_file,
    primitive_value,
    rank_and_select,
    render_insight,
)

from .conftest import random_series


def series_from_closes(closes, name="S"):
    points = []
    day = dt.date(2024, 1, 1)
    for c in closes:
        day += dt.timedelta(days=1)
        points.append(PricePoint(day, c, c, c, c, 100))
    return TimeSeries(name, tuple(points))


class TestPrimitives:
    def test_min_max_match_builtins_on_random_series(self):
        rng = Random(11)
        for _ in range(20):
            series = random_series(rng, n=rng.randint(5, 80))
            closes = [p.close for p in series.points]
            assert primitive_value(Primitive("minimum"), series) == min(closes)
            assert primitive_value(Primitive("maximum"), series) == max(closes)

    def test_rolling_average_matches_manual_windows(self):
        series = series_from_closes([1.0, 2.0, 3.0, 4.0, 5.0])
        out = primitive_value(Primitive("rolling_average", {"window": 2}), series)
        assert out == pytest.approx([1.5, 2.5, 3.5, 4.5])

    def test_rolling_average_window_too_large(self):
        series = series_from_closes([1.0, 2.0])
        with pytest.raises(WindowError):
            primitive_value(Primitive("rolling_average", {"window": 3}), series)

    def test_volatility_is_sample_stdev_of_simple_returns(self):
        rng = Random(13)
        series = random_series(rng, n=40)
        closes = [p.close for p in series.points]
        rets = [(closes[i] - closes[i - 1]) / closes[i - 1] for i in range(1, len(closes))]
        expected = statistics.stdev(rets)
        assert primitive_value(Primitive("volatility"), series) == pytest.approx(expected)

    def test_volatility_of_constant_series_is_zero(self):
        series = series_from_closes([10.0] * 6)
        assert primitive_value(Primitive("volatility"), series) == 0.0

    def test_distance_to_mean_in_stdev_units(self):
        closes = [10.0, 12.0, 11.0, 15.0, 13.0]
        series = series_from_closes(closes)
        expected = (closes[-1] - statistics.fmean(closes)) / statistics.stdev(closes)
        assert primitive_value(Primitive("distance_to_mean"), series) == pytest.approx(expected)

    def test_distance_to_mean_undefined_on_constant_series(self):
        with pytest.raises(InsufficientDataError):
            primitive_value(Primitive("distance_to_mean"), series_from_closes([5.0] * 4))

    def test_comparative_factor_is_last_close_over_trailing_mean(self):
        closes = [10.0, 20.0, 30.0, 40.0]
        series = series_from_closes(closes)
        value = primitive_value(Primitive("comparative_factor", {"window": 2}), series)
        assert value == pytest.approx(40.0 / 35.0)

    def test_unknown_primitive_rejected(self):
        with pytest.raises(ValidationError):
            Primitive("kurtosis")


class TestTemplates:
    def test_render_formats_floats_to_two_decimals(self):
        t = InsightTemplate("<subject> closed at <value>", "minimum")
        assert render_insight(t, {"subject": "TSLA", "value": 123.456}) == "TSLA closed at 123.46"

    def test_render_keeps_strings_verbatim(self):
        t = InsightTemplate("window of <window> days", "rolling_average")
        assert render_insight(t, {"window": "5"}) == "window of 5 days"

    def test_unbound_slot_raises(self):
        t = InsightTemplate("<subject> at <value>", "minimum")
        with pytest.raises(UnboundSlotError):
            render_insight(t, {"subject": "TSLA"})

    def test_default_templates_cover_all_primitives(self):
        assert set(DEFAULT_TEMPLATES) == {
            "minimum", "maximum", "rolling_average",
            "volatility", "distance_to_mean", "comparative_factor",
        }

    def test_templates_file_roundtrip(self, tmp_path):
        path = tmp_path / "templates.txt"
        path.write_text("minimum: low of <value> for <subject>\n", encoding="utf-8")
        loaded = load_templates_file(str(path))
        assert loaded["minimum"].text == "low of <value> for <subject>"


def make_insight(rng, i):
    prim = Primitive(rng.choice(["minimum", "maximum", "volatility"]))
    return Insight(
        primitive=prim,
        subject=f"S{rng.randrange(4)}",
        value=rng.random(),
        period=(dt.date(2024, 1, 1), dt.date(2024, 2, 1)),
        utility_scores={
            "prev_period_anomaly": rng.random() * 3,
            "peer_anomaly": rng.random() * 3,
            "magnitude": rng.random() * 3,
        },
        aggregate=0.0,
        text=f"insight {i}",
    )


class TestRanking:
    def test_matches_sort_truncate_oracle_on_random_inputs(self):
        rng = Random(17)
        config = ScoringConfig({"prev_period_anomaly": 2.0, "peer_anomaly": 0.5, "magnitude": 1.0}, k=3)
        for _ in range(200):
            pool = [make_insight(rng, i) for i in range(rng.randint(0, 12))]

            def agg(ins):
                return sum(w * ins.utility_scores[s] for s, w in config.weights.items() if w > 0)

            expected = sorted(pool, key=lambda i: (-agg(i), i.subject, i.primitive.name))[: config.k]
            got = rank_and_select(pool, config)
            assert [(g.subject, g.text) for g in got] == [(e.subject, e.text) for e in expected]
            for g in got:
                assert g.aggregate == pytest.approx(agg(g))

    def test_never_returns_more_than_k(self):
        rng = Random(19)
        pool = [make_insight(rng, i) for i in range(30)]
        assert len(rank_and_select(pool, ScoringConfig({"magnitude": 1.0}, k=3))) == 3

    def test_zero_weight_scorer_may_be_absent(self):
        rng = Random(23)
        ins = make_insight(rng, 0)
        scores = dict(ins.utility_scores)
        del scores["peer_anomaly"]
        ins = Insight(ins.primitive, ins.subject, ins.value, ins.period, scores, 0.0, ins.text)
        out = rank_and_select([ins], ScoringConfig({"magnitude": 1.0, "peer_anomaly": 0.0}, k=1))
        assert len(out) == 1

    def test_missing_positive_weight_scorer_raises(self):
        rng = Random(29)
        ins = make_insight(rng, 0)
        scores = {"magnitude": 1.0}
        ins = Insight(ins.primitive, ins.subject, ins.value, ins.period, scores, 0.0, ins.text)
        with pytest.raises(ScoringError):
            rank_and_select([ins], ScoringConfig({"peer_anomaly": 1.0}, k=1))

    def test_invalid_configs_rejected(self):
        with pytest.raises(ValidationError):
            ScoringConfig({"magnitude": 1.0}, k=0)
        with pytest.raises(ValidationError):
            ScoringConfig({"magnitude": 0.0})
        with pytest.raises(ValidationError):
            ScoringConfig({"magnitude": -1.0, "peer_anomaly": 1.0})


class TestScorers:
    def test_all_scores_present_and_nonnegative(self):
        rng = Random(31)
        series = random_series(rng, n=60)
        peers = [random_series(rng, name=f"P{i}", n=60) for i in range(3)]
        scores = builtin_scorers(Primitive("volatility"), 0.02, series, peers)
        assert set(scores) == {"prev_period_anomaly", "peer_anomaly", "magnitude"}
        assert all(v >= 0 for v in scores.values())

    def test_peer_anomaly_needs_two_peers(self):
        rng = Random(37)
        series = random_series(rng, n=60)
        one_peer = [random_series(rng, name="P", n=60)]
        scores = builtin_scorers(Primitive("maximum"), 1.0, series, one_peer)
        assert scores["peer_anomaly"] == 0.0

    def test_degenerate_history_scores_zero(self):
        series = series_from_closes([10.0] * 40)
        scores = builtin_scorers(Primitive("maximum"), 10.0, series, [])
        assert scores["prev_period_anomaly"] == 0.0


class TestGeneration:
    def test_top_k_insights_per_slide(self):
        rng = Random(41)
        series = random_series(rng, n=60)
        peers = [random_series(rng, name=f"P{i}", n=60) for i in range(3)]
        out = generate_insights(series, peers)
        assert 1 <= len(out) <= DEFAULT_SCORING.k
        assert all(isinstance(i.text, str) and i.text for i in out)

    def test_short_series_still_yields_insights(self):
        out = generate_insights(series_from_closes([10.0, 11.0, 12.5]))
        assert out
