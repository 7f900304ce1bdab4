import os

import numpy as np
import pytest

from repodist import _backend


@pytest.fixture(params=_backend.available())
def backend(request):
    """Run a test once per available kernel backend."""
    with _backend.using(request.param):
        yield request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def data_path(var):
    """Path from an environment variable, or skip when the dataset is absent."""
    path = os.environ.get(var)
    if not path or not os.path.exists(path):
        pytest.skip(f"set {var} to the dataset path to run this check")
    return path


def make_events(n, seed=0, projects=40, authors=60):
    """Deterministic commit events; a few projects get a single active day."""
    from datetime import datetime, timedelta, timezone

    from repodist.ingest import CommitEvent

    r = np.random.default_rng(seed)
    start = datetime(2011, 1, 1, tzinfo=timezone.utc)
    events = []
    for i in range(n):
        p = int(r.integers(projects))
        # projects 0..4 always commit on their own fixed day
        offset = p * 3 if p < 5 else int(r.integers(0, 2000))
        when = start + timedelta(days=offset, seconds=int(r.integers(0, 86400)))
        a = int(r.integers(authors))
        name = f"Dev {a}" if r.random() < 0.8 else f"  dev   {a} "
        events.append(CommitEvent(f"proj{p}", f"{i:040x}", "msg", when, name, f"DEV{a}@example.org"))
    return events


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
