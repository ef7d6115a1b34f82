"""Canonical deck, slide, chart and time-series types plus their JSON/CSV codecs.

All types are immutable values: mutation means building a new value. The
deck-JSON layout is the normative serialized form; see docs/deck-json.md.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
from dataclasses import dataclass, field

from .errors import FormatError, ParseError, ValidationError

CHART_KINDS = ("piechart", "barchart", "linechart", "table")
AGGREGATION_METRICS = ("mean", "median")


@dataclass(frozen=True)
class PricePoint:
    date: dt.date
    open: float
    high: float
    low: float
    close: float
    volume: int


@dataclass(frozen=True)
class TimeSeries:
    """Daily OHLCV series with strictly increasing dates."""

    name: str
    points: tuple[PricePoint, ...]

    def __post_init__(self) -> None:
        for i, p in enumerate(self.points):
            row = i + 1
            if p.high < max(p.open, p.close):
                raise ValidationError(f"row {row}: high < max(open, close)")
            if p.low > min(p.open, p.close):
                raise ValidationError(f"row {row}: low > min(open, close)")
            if p.volume < 0:
                raise ValidationError(f"row {row}: volume negative")
            if i > 0 and p.date <= self.points[i - 1].date:
                raise ValidationError(f"row {row}: dates not strictly increasing")

    @property
    def closes(self) -> list[float]:
        return [p.close for p in self.points]

    @property
    def dates(self) -> list[dt.date]:
        return [p.date for p in self.points]

    def slice_from(self, start: dt.date) -> "TimeSeries":
        """Points on or after start, same name."""
        return TimeSeries(self.name, tuple(p for p in self.points if p.date >= start))


@dataclass(frozen=True)
class ChartSpec:
    chart_kind: str
    title: str
    series: tuple[tuple[str, tuple[float, ...]], ...]  # (label, values)
    x_labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.chart_kind not in CHART_KINDS:
            raise ValidationError(f"unknown chart kind {self.chart_kind!r}")
        for label, values in self.series:
            if len(values) != len(self.x_labels):
                raise ValidationError("series length must equal x_labels length")
        if self.chart_kind == "piechart":
            if len(self.series) != 1:
                raise ValidationError("piechart requires exactly one series")
            if any(v < 0 for v in self.series[0][1]):
                raise ValidationError("piechart values non-negative")


@dataclass(frozen=True)
class InsightBlock:
    lines: tuple[str, ...]


@dataclass(frozen=True)
class TableBlock:
    headers: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]

    def __post_init__(self) -> None:
        for r in self.rows:
            if len(r) != len(self.headers):
                raise ValidationError("table row width must equal header width")


SlideObject = ChartSpec | InsightBlock | TableBlock


@dataclass(frozen=True)
class Slide:
    title: str
    date: dt.date
    objects: tuple[SlideObject, ...]

    def __post_init__(self) -> None:
        if not self.title:
            raise ValidationError("slide title non-empty")
        if not self.objects:
            raise ValidationError("slide needs at least one object")


@dataclass(frozen=True)
class DeckParameters:
    comparable_firms: tuple[str, ...] = ()
    horizon_months: int = 3
    aggregation_metric: str = "mean"

    def __post_init__(self) -> None:
        if self.horizon_months < 1:
            raise ValidationError("horizon_months >= 1")
        if self.aggregation_metric not in AGGREGATION_METRICS:
            raise ValidationError(f"unknown aggregation metric {self.aggregation_metric!r}")


@dataclass(frozen=True)
class Deck:
    name: str
    slides: tuple[Slide, ...] = ()
    parameters: DeckParameters = field(default_factory=DeckParameters)


# --- deck-JSON codec ---------------------------------------------------------


def _object_to_dict(obj: SlideObject) -> dict:
    if isinstance(obj, ChartSpec):
        return {
            "kind": "chart",
            "chart_kind": obj.chart_kind,
            "title": obj.title,
            "series": [{"label": l, "values": list(v)} for l, v in obj.series],
            "x_labels": list(obj.x_labels),
        }
    if isinstance(obj, InsightBlock):
        return {"kind": "insight", "lines": list(obj.lines)}
    return {"kind": "table", "headers": list(obj.headers), "rows": [list(r) for r in obj.rows]}


def _object_from_dict(d: dict) -> SlideObject:
    kind = d.get("kind")
    if kind == "chart":
        return ChartSpec(
            chart_kind=d["chart_kind"],
            title=d["title"],
            series=tuple((s["label"], tuple(float(v) for v in s["values"])) for s in d["series"]),
            x_labels=tuple(d["x_labels"]),
        )
    if kind == "insight":
        return InsightBlock(lines=tuple(d["lines"]))
    if kind == "table":
        return TableBlock(headers=tuple(d["headers"]), rows=tuple(tuple(r) for r in d["rows"]))
    raise ValidationError(f"unknown slide object kind {kind!r}")


def deck_to_dict(deck: Deck) -> dict:
    return {
        "name": deck.name,
        "parameters": {
            "comparable_firms": list(deck.parameters.comparable_firms),
            "horizon_months": deck.parameters.horizon_months,
            "aggregation_metric": deck.parameters.aggregation_metric,
        },
        "slides": [
            {
                "title": s.title,
                "date": s.date.isoformat(),
                "objects": [_object_to_dict(o) for o in s.objects],
            }
            for s in deck.slides
        ],
    }


def serialize_deck(deck: Deck) -> str:
    """Deterministic deck-JSON text; field order is fixed by construction."""
    return json.dumps(deck_to_dict(deck), indent=2)


def deck_from_dict(d: dict) -> Deck:
    try:
        params = d["parameters"]
        deck = Deck(
            name=d["name"],
            parameters=DeckParameters(
                comparable_firms=tuple(params["comparable_firms"]),
                horizon_months=int(params["horizon_months"]),
                aggregation_metric=params["aggregation_metric"],
            ),
            slides=tuple(
                Slide(
                    title=s["title"],
                    date=dt.date.fromisoformat(s["date"]),
                    objects=tuple(_object_from_dict(o) for o in s["objects"]),
                )
                for s in d["slides"]
            ),
        )
    except (KeyError, TypeError) as exc:
        raise FormatError(f"deck-JSON missing or malformed field: {exc}") from exc
    return deck


def parse_deck(text: str) -> Deck:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed deck-JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise FormatError("deck-JSON root must be an object")
    return deck_from_dict(raw)


# --- OHLCV CSV ingestion -----------------------------------------------------

_CSV_HEADER = ["date", "open", "high", "low", "close", "volume"]


def load_timeseries_csv(path: str, name: str | None = None) -> TimeSeries:
    """Load an OHLCV CSV (header date,open,high,low,close,volume) into a TimeSeries."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError("empty CSV file") from None
        if [h.strip().lower() for h in header] != _CSV_HEADER:
            raise FormatError(f"expected header {','.join(_CSV_HEADER)}, got {','.join(header)}")
        points = []
        for rownum, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 6:
                raise FormatError(f"row {rownum}: expected 6 columns, got {len(row)}")
            try:
                date = dt.date.fromisoformat(row[0].strip())
                o, h, l, c = (float(row[i]) for i in range(1, 5))
                v = int(float(row[5]))
            except ValueError as exc:
                raise ParseError(f"row {rownum}: {exc}") from exc
            if h < max(o, c):
                raise ValidationError(f"row {rownum}: high < max(open, close)")
            if l > min(o, c):
                raise ValidationError(f"row {rownum}: low > min(open, close)")
            if v < 0:
                raise ValidationError(f"row {rownum}: volume negative")
            if points and date <= points[-1].date:
                raise ValidationError(f"row {rownum}: dates not strictly increasing")
            points.append(PricePoint(date, o, h, l, c, v))
    series_name = name if name is not None else _stem(path)
    try:
        return TimeSeries(series_name, tuple(points))
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def _stem(path: str) -> str:
    base = path.replace("\\", "/").rsplit("/", 1)[-1]
    return base.rsplit(".", 1)[0]
