"""Numerical insight primitives, slot-template rendering, and top-K selection.

Primitives run over close prices of a TimeSeries; each insight carries
utility scores whose weighted interpolation decides the ranking.
"""

from __future__ import annotations

import re
import statistics
from dataclasses import dataclass, field

from .deck_model import TimeSeries
from .errors import (
    InsufficientDataError,
    ScoringError,
    UnboundSlotError,
    ValidationError,
    WindowError,
)

PRIMITIVE_NAMES = (
    "minimum",
    "maximum",
    "rolling_average",
    "volatility",
    "distance_to_mean",
    "comparative_factor",
)

_ROLLING = {"rolling_average", "comparative_factor"}


@dataclass(frozen=True)
class Primitive:
    name: str
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.name not in PRIMITIVE_NAMES:
            raise ValidationError(f"unknown primitive {self.name!r}")
        if self.name in _ROLLING:
            window = self.params.get("window", 5)
            if not isinstance(window, int) or window < 1:
                raise ValidationError("window must be a positive integer")

    @property
    def window(self) -> int:
        return self.params.get("window", 5)


@dataclass(frozen=True)
class InsightTemplate:
    """Literal text with <slot> placeholders, tied to one primitive."""

    text: str
    applicable_primitive: str

    def slots(self) -> list[str]:
        return re.findall(r"<([^<>]+)>", self.text)


@dataclass(frozen=True)
class Insight:
    primitive: Primitive
    subject: str
    value: float
    period: tuple  # (start date, end date)
    utility_scores: dict
    aggregate: float
    text: str


@dataclass(frozen=True)
class ScoringConfig:
    weights: dict
    k: int = 3

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValidationError("k must be positive")
        if not any(w > 0 for w in self.weights.values()):
            raise ValidationError("at least one positive weight required")
        if any(w < 0 for w in self.weights.values()):
            raise ValidationError("weights must be non-negative")


def rolling_average(values: list[float], window: int) -> list[float]:
    """Trailing-window means; one value per complete window."""
    if window > len(values):
        raise WindowError(f"window {window} exceeds series length {len(values)}")
    return [sum(values[i : i + window]) / window for i in range(len(values) - window + 1)]


def simple_returns(closes: list[float]) -> list[float]:
    if len(closes) < 2:
        raise InsufficientDataError("need at least 2 points for returns")
    return [(closes[i] - closes[i - 1]) / closes[i - 1] for i in range(1, len(closes))]


def primitive_value(primitive: Primitive, series: TimeSeries):
    """Value of one primitive over the series closes.

    rolling_average yields the full trailing-mean list; everything else a scalar.
    """
    closes = series.closes
    if not closes:
        raise InsufficientDataError("empty series")
    name = primitive.name
    if name == "minimum":
        return min(closes)
    if name == "maximum":
        return max(closes)
    if name == "rolling_average":
        return rolling_average(closes, primitive.window)
    if name == "volatility":
        rets = simple_returns(closes)
        if len(rets) < 2:
            raise InsufficientDataError("need at least 3 points for volatility")
        return statistics.stdev(rets)
    if name == "distance_to_mean":
        if len(closes) < 2:
            raise InsufficientDataError("need at least 2 points for distance to mean")
        sd = statistics.stdev(closes)
        if sd == 0:
            raise InsufficientDataError("zero close-price dispersion")
        return (closes[-1] - statistics.fmean(closes)) / sd
    if name == "comparative_factor":
        trailing = rolling_average(closes, primitive.window)[-1]
        if trailing == 0:
            raise InsufficientDataError("zero trailing average")
        return closes[-1] / trailing
    raise ValidationError(f"unknown primitive {name!r}")


def compute_primitives(series: TimeSeries, requested: list[Primitive]) -> list[tuple]:
    """(primitive, value, (start, end)) per request; see primitive_value for values."""
    period = (series.points[0].date, series.points[-1].date)
    return [(p, primitive_value(p, series), period) for p in requested]


def render_insight(template: InsightTemplate, bindings: dict) -> str:
    """Fill every <slot>; numeric bindings are formatted to 2 decimals."""

    def fill(match: re.Match) -> str:
        slot = match.group(1)
        if slot not in bindings:
            raise UnboundSlotError(slot)
        value = bindings[slot]
        if isinstance(value, float):
            return f"{value:.2f}"
        return str(value)

    return re.sub(r"<([^<>]+)>", fill, template.text)


def rank_and_select(insights: list[Insight], config: ScoringConfig) -> list[Insight]:
    """Top-k by weighted aggregate, descending; ties by subject then primitive."""
    scored = []
    for ins in insights:
        for scorer, weight in config.weights.items():
            if weight > 0 and scorer not in ins.utility_scores:
                raise ScoringError(f"insight missing utility score {scorer!r}")
        agg = sum(w * ins.utility_scores[s] for s, w in config.weights.items() if w > 0)
        scored.append((agg, ins))
    scored.sort(key=lambda pair: (-pair[0], pair[1].subject, pair[1].primitive.name))
    out = []
    for agg, ins in scored[: config.k]:
        out.append(
            Insight(
                primitive=ins.primitive,
                subject=ins.subject,
                value=ins.value,
                period=ins.period,
                utility_scores=ins.utility_scores,
                aggregate=agg,
                text=ins.text,
            )
        )
    return out


def _scalar_value(primitive: Primitive, series: TimeSeries) -> float:
    value = primitive_value(primitive, series)
    return value[-1] if isinstance(value, list) else value


def _blocked_history(primitive: Primitive, series: TimeSeries) -> list[float]:
    """Primitive evaluated on consecutive equal-size blocks of the series."""
    n = len(series.points)
    block = max(3, n // 4)
    values = []
    for start in range(0, n - block + 1, block):
        chunk = TimeSeries(series.name, series.points[start : start + block])
        try:
            values.append(_scalar_value(primitive, chunk))
        except (InsufficientDataError, WindowError):
            continue
    return values


def builtin_scorers(
    insight_primitive: Primitive,
    value: float,
    series: TimeSeries,
    peer_series: list[TimeSeries],
) -> dict:
    """Utility scores: previous-period anomaly, peer anomaly, magnitude.

    Degenerate dispersion (or too little history) scores 0 by convention.
    """
    scores = {"prev_period_anomaly": 0.0, "peer_anomaly": 0.0, "magnitude": 0.0}

    history = _blocked_history(insight_primitive, series)
    if len(history) >= 3:
        prior, current = history[:-1], history[-1]
        sd = statistics.stdev(prior)
        if sd > 0:
            scores["prev_period_anomaly"] = abs((current - statistics.fmean(prior)) / sd)

    peer_values = []
    for peer in peer_series:
        try:
            peer_values.append(_scalar_value(insight_primitive, peer))
        except (InsufficientDataError, WindowError):
            continue
    if len(peer_values) >= 2:
        sd = statistics.stdev(peer_values)
        if sd > 0:
            scores["peer_anomaly"] = abs((value - statistics.fmean(peer_values)) / sd)

    mean_close = statistics.fmean(series.closes)
    if mean_close != 0:
        scores["magnitude"] = abs(value) / abs(mean_close)
    return scores


DEFAULT_TEMPLATES = {
    "minimum": InsightTemplate("<subject> closed as low as <value> over the period.", "minimum"),
    "maximum": InsightTemplate("<subject> closed as high as <value> over the period.", "maximum"),
    "rolling_average": InsightTemplate(
        "<subject> averaged <value> over the trailing <window>-day window.", "rolling_average"
    ),
    "volatility": InsightTemplate(
        "<subject> daily returns showed a volatility of <value>%.", "volatility"
    ),
    "distance_to_mean": InsightTemplate(
        "<subject> last close sits <value> standard deviations from its mean.",
        "distance_to_mean",
    ),
    "comparative_factor": InsightTemplate(
        "<subject> last close is <value>x its trailing average.", "comparative_factor"
    ),
}

DEFAULT_SCORING = ScoringConfig(
    weights={"prev_period_anomaly": 1.0, "peer_anomaly": 1.0, "magnitude": 1.0}, k=3
)


def generate_insights(
    series: TimeSeries,
    peer_series: list[TimeSeries] | None = None,
    config: ScoringConfig = DEFAULT_SCORING,
    templates: dict[str, InsightTemplate] | None = None,
) -> list[Insight]:
    """Compute, render, score, and select the top-k insights for one series."""
    peer_series = peer_series or []
    templates = templates or DEFAULT_TEMPLATES
    window = min(5, max(1, len(series.points)))
    requested = [
        Primitive("minimum"),
        Primitive("maximum"),
        Primitive("rolling_average", {"window": window}),
        Primitive("volatility"),
        Primitive("distance_to_mean"),
        Primitive("comparative_factor", {"window": window}),
    ]
    candidates = []
    period = (series.points[0].date, series.points[-1].date)
    for prim in requested:
        try:
            value = _scalar_value(prim, series)
        except (InsufficientDataError, WindowError):
            continue
        scores = builtin_scorers(prim, value, series, peer_series)
        bindings = {
            "subject": series.name,
            "value": value * 100 if prim.name == "volatility" else value,
            "window": str(prim.window) if prim.name in _ROLLING else "",
        }
        text = render_insight(templates[prim.name], bindings)
        candidates.append(
            Insight(
                primitive=prim,
                subject=series.name,
                value=value,
                period=period,
                utility_scores=scores,
                aggregate=0.0,
                text=text,
            )
        )
    return rank_and_select(candidates, config)


def load_templates_file(path: str) -> dict[str, InsightTemplate]:
    """One template per line: `primitive: text with <slots>`."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            name, _, text = line.partition(":")
            name = name.strip()
            if name not in PRIMITIVE_NAMES:
                raise ValidationError(f"unknown primitive {name!r} in template file")
            out[name] = InsightTemplate(text.strip(), name)
    return out
