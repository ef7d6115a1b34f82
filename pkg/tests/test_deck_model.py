import datetime as dt
from random import Random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deckforge.deck_model import (
    ChartSpec,
    Deck,
    DeckParameters,
    InsightBlock,
    PricePoint,
    Slide,
    TableBlock,
    TimeSeries,
    load_timeseries_csv,
    parse_deck,
    serialize_deck,
)
from deckforge.errors import FormatError, ParseError, ValidationError

from .conftest import random_series


def sample_deck() -> Deck:
    chart = ChartSpec("barchart", "Volume", (("shares", (10.0, 12.5)),), ("w1", "w2"))
    slide = Slide(
        "Volume Analysis - TSLA",
        dt.date(2025, 1, 15),
        (chart, InsightBlock(("volume rose",)), TableBlock(("k", "v"), (("min", "10"),))),
    )
    return Deck("report", (slide,), DeckParameters(("F", "GM"), 6, "median"))


def test_roundtrip_preserves_everything():
    deck = sample_deck()
    assert parse_deck(serialize_deck(deck)) == deck


def test_serialization_is_deterministic():
    deck = sample_deck()
    assert serialize_deck(deck) == serialize_deck(parse_deck(serialize_deck(deck)))


names = st.text(st.characters(min_codepoint=32, max_codepoint=126), min_size=1, max_size=20)
floats = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


@st.composite
def charts(draw):
    n = draw(st.integers(min_value=1, max_value=5))
    kind = draw(st.sampled_from(["piechart", "barchart", "linechart"]))
    value_st = st.floats(min_value=0, max_value=1e6, allow_nan=False) if kind == "piechart" else floats
    values = tuple(draw(st.lists(value_st, min_size=n, max_size=n)))
    return ChartSpec(
        kind,
        draw(names),
        ((draw(names), values),),
        tuple(draw(st.lists(names, min_size=n, max_size=n))),
    )


@settings(max_examples=50, deadline=None)
@given(
    name=names,
    title=names,
    chart=charts(),
    lines=st.lists(names, max_size=3).map(tuple),
    horizon=st.integers(min_value=1, max_value=36),
    metric=st.sampled_from(["mean", "median"]),
)
def test_roundtrip_property(name, title, chart, lines, horizon, metric):
    deck = Deck(
        name,
        (Slide(title, dt.date(2025, 1, 2), (chart, InsightBlock(lines))),),
        DeckParameters((), horizon, metric),
    )
    assert parse_deck(serialize_deck(deck)) == deck


def test_chart_label_value_length_mismatch_rejected():
    with pytest.raises(ValidationError):
        ChartSpec("barchart", "t", (("l", (1.0,)),), ("a", "b"))


def test_invalid_metric_rejected():
    with pytest.raises(ValidationError):
        DeckParameters((), 3, "mode")


def test_nonpositive_horizon_rejected():
    with pytest.raises(ValidationError):
        DeckParameters((), 0, "mean")


def test_parse_deck_rejects_malformed_json():
    with pytest.raises(ParseError):
        parse_deck("{not json")


def test_parse_deck_rejects_missing_fields():
    with pytest.raises((FormatError, ValidationError)):
        parse_deck('{"name": "x"}')


def write_csv(path, rows, header="date,open,high,low,close,volume"):
    path.write_text("\n".join([header, *rows]) + "\n", encoding="utf-8")


def test_csv_loader_reads_valid_file(tmp_path):
    p = tmp_path / "t.csv"
    write_csv(p, ["2024-01-02,10,11,9,10.5,100", "2024-01-03,10.5,12,10,11,200"])
    series = load_timeseries_csv(str(p), name="T")
    assert series.name == "T"
    assert [pt.close for pt in series.points] == [10.5, 11.0]


def test_csv_loader_cites_failing_row_number(tmp_path):
    p = tmp_path / "t.csv"
    write_csv(p, ["2024-01-02,10,8,9,10.5,100"])  # high below open
    with pytest.raises(ValidationError, match="row 2"):
        load_timeseries_csv(str(p))


def test_csv_loader_rejects_unsorted_dates(tmp_path):
    p = tmp_path / "t.csv"
    write_csv(p, ["2024-01-03,10,11,9,10.5,100", "2024-01-02,10,11,9,10.5,100"])
    with pytest.raises(ValidationError, match="row 3"):
        load_timeseries_csv(str(p))


def test_csv_loader_rejects_bad_header(tmp_path):
    p = tmp_path / "t.csv"
    write_csv(p, [], header="date,open,close")
    with pytest.raises(FormatError):
        load_timeseries_csv(str(p))


def test_csv_loader_rejects_unparseable_number(tmp_path):
    p = tmp_path / "t.csv"
    write_csv(p, ["2024-01-02,ten,11,9,10.5,100"])
    with pytest.raises(ParseError, match="row 2"):
        load_timeseries_csv(str(p))


def test_random_series_fixture_is_valid():
    series = random_series(Random(7), n=30)
    assert len(series.points) == 30
    for pt in series.points:
        assert pt.low <= min(pt.open, pt.close) <= max(pt.open, pt.close) <= pt.high


def test_timeseries_validates_ohlc_bounds():
    with pytest.raises(ValidationError):
        TimeSeries("X", (PricePoint(dt.date(2024, 1, 2), 10.0, 9.0, 9.0, 10.0, 1),))
