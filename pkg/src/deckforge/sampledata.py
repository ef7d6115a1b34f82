"""Deterministic synthetic OHLCV fixtures for demos and tests."""

from __future__ import annotations

import datetime as dt
from pathlib import Path
from random import Random

_DEMO_TICKERS = ("TSLA", "F", "GM", "TM")


def generate_ohlcv_rows(
    seed: int,
    days: int = 280,
    start: dt.date = dt.date(2024, 1, 2),
    base_price: float = 200.0,
    base_volume: int = 1_000_000,
) -> list[tuple[dt.date, float, float, float, float, int]]:
    """Business-day random walk with internally consistent OHLC bounds."""
    rng = Random(seed)
    rows = []
    day = start
    close = base_price
    while len(rows) < days:
        if day.weekday() < 5:
            o = close
            c = max(1.0, o * (1 + rng.gauss(0, 0.02)))
            h = max(o, c) * (1 + abs(rng.gauss(0, 0.005)))
            l = min(o, c) * (1 - abs(rng.gauss(0, 0.005)))
            v = max(0, int(base_volume * (1 + rng.gauss(0, 0.3))))
            rows.append((day, round(o, 2), round(h, 2), round(l, 2), round(c, 2), v))
            close = c
        day += dt.timedelta(days=1)
    return rows


def ohlcv_csv(seed: int, **kwargs) -> str:
    lines = ["date,open,high,low,close,volume"]
    for day, o, h, l, c, v in generate_ohlcv_rows(seed, **kwargs):
        lines.append(f"{day.isoformat()},{o},{h},{l},{c},{v}")
    return "\n".join(lines) + "\n"


def write_demo_datasets(datasets_dir: str | Path, days: int = 280) -> list[str]:
    """Create the demo tickers under a workspace's datasets directory."""
    datasets_dir = Path(datasets_dir)
    datasets_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for i, ticker in enumerate(_DEMO_TICKERS):
        path = datasets_dir / f"{ticker}.csv"
        path.write_text(
            ohlcv_csv(seed=100 + i, days=days, base_price=150.0 + 40.0 * i),
            encoding="utf-8",
        )
        written.append(ticker)
    return written
