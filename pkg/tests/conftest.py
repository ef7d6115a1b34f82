import datetime as dt
from random import Random

import pytest

from deckforge.deck_model import PricePoint, TimeSeries
from deckforge.parser import train_tagger, train_test_corpora
from deckforge.sampledata import write_demo_datasets
from deckforge.workspace import Workspace

FROZEN_DATE = dt.date(2025, 1, 15)


def frozen_clock():
    return FROZEN_DATE


def random_series(rng: Random, name: str = "TEST", n: int = 60, start=dt.date(2024, 1, 2)) -> TimeSeries:
    points = []
    day = start
    close = 50.0 + rng.random() * 200.0
    while len(points) < n:
        if day.weekday() < 5:
            o = close
            c = max(1.0, o * (1 + rng.gauss(0, 0.02)))
            h = max(o, c) * (1 + abs(rng.gauss(0, 0.004)))
            l = min(o, c) * (1 - abs(rng.gauss(0, 0.004)))
            v = max(0, int(1e6 * (1 + rng.gauss(0, 0.3))))
            points.append(PricePoint(day, round(o, 2), round(h, 2), round(l, 2), round(c, 2), v))
            close = c
        day += dt.timedelta(days=1)
    return TimeSeries(name, tuple(points))


@pytest.fixture(scope="session")
def corpora():
    return train_test_corpora(seed=0)


@pytest.fixture(scope="session")
def trained_model(corpora):
    train, _ = corpora
    return train_tagger(train, epochs=50, seed=0)


@pytest.fixture(scope="session")
def shared_model_path(trained_model, tmp_path_factory):
    from deckforge.parser import save_model

    path = tmp_path_factory.mktemp("model") / "parser_model.json"
    save_model(trained_model, str(path))
    return path


@pytest.fixture
def demo_workspace(tmp_path, shared_model_path):
    """Fresh workspace with demo OHLCV datasets and a pre-trained tagger."""
    import shutil

    root = tmp_path / "ws"
    root.mkdir()
    shutil.copy(shared_model_path, root / "parser_model.json")
    write_demo_datasets(root / "datasets")
    return Workspace(root, clock=frozen_clock)
