"""Atomic and macro skills: deterministic slide builders plus a replayable library.

Every builder is a pure function of (intent, sliced series, parameters,
clock date), so replaying a macro reproduces byte-identical deck-JSON.
"""

from __future__ import annotations

import calendar
import datetime as dt
import json
import statistics
from dataclasses import dataclass, field, replace
from typing import Callable

from .deck_model import (
    ChartSpec,
    Deck,
    DeckParameters,
    InsightBlock,
    Slide,
    TableBlock,
    TimeSeries,
)
from .errors import (
    DataError,
    NameTakenError,
    NoSuchSkillError,
    NothingToSaveError,
    TargetNotFoundError,
    ValidationError,
)
from .insights import generate_insights
from .mapping import ResolvedIntent

BUILTIN_MACRO = "company_briefing_deck"
_DATA_SLOT = "$data"
_PRESENTATION_SLOT = "$presentation"


def months_back(day: dt.date, months: int) -> dt.date:
    """Calendar-month subtraction with day clamped to the target month length."""
    total = day.year * 12 + (day.month - 1) - months
    year, month = divmod(total, 12)
    month += 1
    return dt.date(year, month, min(day.day, calendar.monthrange(year, month)[1]))


def horizon_slice(series: TimeSeries, horizon_months: int) -> TimeSeries:
    """Trailing horizon_months of data relative to the last point."""
    if not series.points:
        raise DataError(f"dataset {series.name!r} is empty")
    start = months_back(series.points[-1].date, horizon_months)
    return series.slice_from(start)


def _aggregate(values: list[float], metric: str) -> float:
    return statistics.median(values) if metric == "median" else statistics.fmean(values)


def weekly_aggregate(series: TimeSeries, attr: str, metric: str) -> tuple[list[str], list[float]]:
    """Per ISO-week aggregate of one OHLCV field, in chronological order."""
    buckets: dict[tuple[int, int], list[float]] = {}
    order: list[tuple[int, int]] = []
    for p in series.points:
        iso = p.date.isocalendar()
        key = (iso[0], iso[1])
        if key not in buckets:
            buckets[key] = []
            order.append(key)
        buckets[key].append(float(getattr(p, attr)))
    labels = [f"{y}-W{w:02d}" for y, w in order]
    values = [_aggregate(buckets[k], metric) for k in order]
    return labels, values


def monthly_volume(series: TimeSeries) -> tuple[list[str], list[float]]:
    buckets: dict[tuple[int, int], float] = {}
    order: list[tuple[int, int]] = []
    for p in series.points:
        key = (p.date.year, p.date.month)
        if key not in buckets:
            buckets[key] = 0.0
            order.append(key)
        buckets[key] += p.volume
    return [f"{y}-{m:02d}" for y, m in order], [buckets[k] for k in order]


# --- slide builders -----------------------------------------------------------

_DEFAULT_ANALYSIS = {
    "linechart": "share_price",
    "barchart": "volume",
    "piechart": "monthly_volume_share",
    "table": "summary_stats",
}

_ANALYSIS_TITLES = {
    "share_price": "Share Price Performance",
    "volume": "Share Volume Traded Analysis",
    "weekly_close_agg": "Weekly {metric} Close",
    "weekly_volume_agg": "Weekly {metric} Volume",
    "rolling_avg": "Rolling Average Close",
    "trading_range": "Daily Trading Range",
    "monthly_volume_share": "Monthly Volume Share",
    "summary_stats": "Summary Statistics",
    "comparable_firms": "Comparable Firms",
    "indexed_performance": "Indexed Performance",
}


def _analysis_of(intent: ResolvedIntent) -> str:
    return intent.extra_params.get("analysis", _DEFAULT_ANALYSIS.get(intent.object, "share_price"))


def slide_title(intent: ResolvedIntent, series_name: str, params: DeckParameters) -> str:
    analysis = _analysis_of(intent)
    base = _ANALYSIS_TITLES.get(analysis, analysis)
    base = base.format(metric=params.aggregation_metric.title())
    return f"{base} - {series_name}"


def _chart(kind: str, title: str, label: str, labels: list[str], values: list[float]) -> ChartSpec:
    return ChartSpec(
        chart_kind=kind,
        title=title,
        series=((label, tuple(values)),),
        x_labels=tuple(labels),
    )


def build_slide(
    intent: ResolvedIntent,
    sliced: TimeSeries,
    params: DeckParameters,
    date: dt.date,
    peers: list[TimeSeries],
) -> Slide:
    """One deterministic slide for an atomic intent over pre-sliced data."""
    if not sliced.points:
        raise DataError(f"no data for {sliced.name!r} in the requested horizon")
    analysis = _analysis_of(intent)
    title = slide_title(intent, sliced.name, params)
    name = sliced.name
    metric = params.aggregation_metric

    if analysis == "share_price":
        chart = _chart("linechart", title, name, [p.date.isoformat() for p in sliced.points], sliced.closes)
    elif analysis == "volume":
        chart = _chart(
            "barchart", title, name,
            [p.date.isoformat() for p in sliced.points], [float(p.volume) for p in sliced.points],
        )
    elif analysis == "weekly_close_agg":
        labels, values = weekly_aggregate(sliced, "close", metric)
        chart = _chart("linechart", title, name, labels, values)
    elif analysis == "weekly_volume_agg":
        labels, values = weekly_aggregate(sliced, "volume", metric)
        chart = _chart("barchart", title, name, labels, values)
    elif analysis == "rolling_avg":
        window = min(5, len(sliced.points))
        means = [
            statistics.fmean(sliced.closes[i : i + window])
            for i in range(len(sliced.points) - window + 1)
        ]
        labels = [p.date.isoformat() for p in sliced.points[window - 1 :]]
        chart = _chart("linechart", title, name, labels, means)
    elif analysis == "trading_range":
        tail = sliced.points[-10:]
        chart = _chart(
            "barchart", title, name,
            [p.date.isoformat() for p in tail], [p.high - p.low for p in tail],
        )
    elif analysis == "monthly_volume_share":
        labels, values = monthly_volume(sliced)
        chart = _chart("piechart", title, name, labels, values)
    elif analysis == "indexed_performance":
        base = sliced.closes[0]
        if base == 0:
            raise DataError("cannot index a series starting at zero")
        chart = _chart(
            "linechart", title, name,
            [p.date.isoformat() for p in sliced.points], [c / base * 100.0 for c in sliced.closes],
        )
    elif analysis == "summary_stats":
        closes = sliced.closes
        rows = [
            ("points", str(len(closes))),
            ("minimum close", f"{min(closes):.4f}"),
            ("maximum close", f"{max(closes):.4f}"),
            (f"{metric} close", f"{_aggregate(closes, metric):.4f}"),
            ("total volume", str(sum(p.volume for p in sliced.points))),
        ]
        return Slide(title, date, (TableBlock(("statistic", "value"), tuple(rows)),))
    elif analysis == "comparable_firms":
        peer_by_name = {p.name: p for p in peers}
        rows = []
        for firm in params.comparable_firms:
            peer = peer_by_name.get(firm)
            last = f"{peer.closes[-1]:.4f}" if peer and peer.points else "n/a"
            rows.append((firm, last))
        if not rows:
            rows.append(("(none configured)", "n/a"))
        return Slide(title, date, (TableBlock(("firm", "last close"), tuple(rows)),))
    else:
        raise ValidationError(f"unknown analysis {analysis!r}")

    insight_lines = tuple(i.text for i in generate_insights(sliced, peers))
    objects: tuple = (chart,)
    if insight_lines:
        objects = (chart, InsightBlock(insight_lines))
    return Slide(title, date, objects)


# --- skill library ------------------------------------------------------------


@dataclass(frozen=True)
class AtomicSkill:
    object_kind: str
    builder: Callable = build_slide


@dataclass(frozen=True)
class MacroSkill:
    name: str
    steps: tuple[ResolvedIntent, ...]


def _builtin_macro() -> MacroSkill:
    def step(obj: str, analysis: str) -> ResolvedIntent:
        return ResolvedIntent(
            action="create",
            object=obj,
            data_ref=_DATA_SLOT,
            presentation=_PRESENTATION_SLOT,
            extra_params={"analysis": analysis},
        )

    return MacroSkill(
        BUILTIN_MACRO,
        (
            step("linechart", "share_price"),
            step("barchart", "volume"),
            step("linechart", "weekly_close_agg"),
            step("barchart", "weekly_volume_agg"),
            step("linechart", "rolling_avg"),
            step("table", "summary_stats"),
            step("barchart", "trading_range"),
            step("piechart", "monthly_volume_share"),
            step("table", "comparable_firms"),
            step("linechart", "indexed_performance"),
        ),
    )


@dataclass
class SkillLibrary:
    atomic: dict[str, AtomicSkill] = field(
        default_factory=lambda: {
            kind: AtomicSkill(kind) for kind in ("piechart", "barchart", "linechart", "table")
        }
    )
    macros: dict[str, MacroSkill] = field(default_factory=lambda: {BUILTIN_MACRO: _builtin_macro()})


def execute_atomic(
    library: SkillLibrary,
    intent: ResolvedIntent,
    data: TimeSeries,
    workspace,
    params: DeckParameters | None = None,
) -> Deck:
    """Apply one atomic intent to the named deck inside the workspace."""
    skill = library.atomic.get(intent.object)
    if skill is None:
        raise NoSuchSkillError(f"no atomic skill for object {intent.object!r}")
    deck = workspace.decks.get(intent.presentation)
    if params is None:
        params = deck.parameters if deck is not None else DeckParameters()
    if deck is None:
        deck = Deck(intent.presentation, (), params)

    sliced = horizon_slice(data, params.horizon_months)
    peers = workspace.peer_series(params)

    if intent.action == "delete":
        title = slide_title(intent, sliced.name, params)
        kept = tuple(s for s in deck.slides if s.title != title)
        if len(kept) == len(deck.slides):
            raise TargetNotFoundError(f"no slide titled {title!r} in {deck.name!r}")
        deck = replace(deck, slides=kept, parameters=params)
    else:
        slide = skill.builder(intent, sliced, params, workspace.clock(), peers)
        if intent.action == "update":
            idx = next((i for i, s in enumerate(deck.slides) if s.title == slide.title), None)
            if idx is None:
                raise TargetNotFoundError(f"no slide titled {slide.title!r} in {deck.name!r}")
            slides = list(deck.slides)
            slides[idx] = slide
            deck = replace(deck, slides=tuple(slides), parameters=params)
        else:  # create appends
            deck = replace(deck, slides=(*deck.slides, slide), parameters=params)

    workspace.decks[intent.presentation] = deck
    return deck


def instantiate_steps(
    macro: MacroSkill, data_ref: str, presentation: str
) -> tuple[ResolvedIntent, ...]:
    """Fill $data/$presentation placeholders in a macro's recorded steps."""
    out = []
    for s in macro.steps:
        out.append(
            replace(
                s,
                data_ref=data_ref if s.data_ref == _DATA_SLOT else s.data_ref,
                presentation=presentation if s.presentation == _PRESENTATION_SLOT else s.presentation,
            )
        )
    return tuple(out)


def execute_macro(
    library: SkillLibrary,
    name: str,
    data: TimeSeries,
    workspace,
    params: DeckParameters | None = None,
    presentation: str | None = None,
) -> Deck:
    """Run a macro's steps in order, all-or-nothing against the workspace."""
    macro = library.macros.get(name)
    if macro is None:
        raise NoSuchSkillError(f"no macro named {name!r}")
    steps = instantiate_steps(macro, data.name, presentation or "report")
    snapshot = dict(workspace.decks)
    try:
        deck: Deck | None = None
        for i, step in enumerate(steps):
            try:
                step_data = data if step.data_ref == data.name else workspace.dataset(step.data_ref)
                if step_data is None:
                    raise DataError(f"dataset {step.data_ref!r} not found")
                deck = execute_atomic(library, step, step_data, workspace, params)
            except Exception as exc:
                raise type(exc)(f"macro {name!r} step {i}: {exc}") from exc
    except Exception:
        workspace.decks.clear()
        workspace.decks.update(snapshot)
        raise
    if deck is None:  # zero-step macro leaves the workspace untouched
        return workspace.decks.get(presentation or "report", Deck(presentation or "report"))
    return deck


def record_macro(
    library: SkillLibrary,
    history: list[ResolvedIntent],
    name: str,
    kb=None,
) -> MacroSkill:
    """Persist a command history as a named macro, registering it as an object."""
    if not history:
        raise NothingToSaveError("no commands to save")
    if name in library.macros:
        raise NameTakenError(f"macro name {name!r} already taken")
    macro = MacroSkill(name, tuple(history))
    library.macros[name] = macro
    if kb is not None:
        kb.ontology = kb.ontology.with_sub_concept("object", name)
    return macro


def _intent_to_dict(intent: ResolvedIntent) -> dict:
    return {
        "action": intent.action,
        "object": intent.object,
        "data_ref": intent.data_ref,
        "presentation": intent.presentation,
        "extra_params": dict(intent.extra_params),
    }


def _intent_from_dict(d: dict) -> ResolvedIntent:
    return ResolvedIntent(
        action=d["action"],
        object=d["object"],
        data_ref=d["data_ref"],
        presentation=d["presentation"],
        extra_params=dict(d.get("extra_params", {})),
    )


def save_library(library: SkillLibrary) -> str:
    macros = [
        {"name": m.name, "steps": [_intent_to_dict(s) for s in m.steps]}
        for name, m in sorted(library.macros.items())
        if name != BUILTIN_MACRO
    ]
    return json.dumps({"macros": macros}, indent=2)


def load_library(text: str) -> SkillLibrary:
    doc = json.loads(text)
    library = SkillLibrary()
    for m in doc.get("macros", []):
        library.macros[m["name"]] = MacroSkill(
            m["name"], tuple(_intent_from_dict(s) for s in m["steps"])
        )
    return library


@dataclass
class SimpleWorkspace:
    """In-memory deck store used by tests and the simulation harness."""

    decks: dict[str, Deck] = field(default_factory=dict)
    datasets: dict[str, TimeSeries] = field(default_factory=dict)
    clock: Callable[[], dt.date] = dt.date.today

    def dataset(self, name: str) -> TimeSeries | None:
        return self.datasets.get(name)

    def peer_series(self, params: DeckParameters) -> list[TimeSeries]:
        return [self.datasets[f] for f in params.comparable_firms if f in self.datasets]
