"""Descriptive analytics over repositories, samples and commit events.

Every operation returns an :class:`~repodist.series.AnalysisSeries` (or
plain records) ready for CSV/JSON export; nothing here draws plots.
"""
import math
from collections import Counter
from dataclasses import dataclass
from datetime import timedelta

import numpy as np

from .errors import EmptySampleError, InsufficientDataError
from .fit import bin_edges
from .series import AnalysisSeries

WEEKDAYS = ("Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun")
GRANULARITIES = ("day", "month", "year")


def _values(s):
    arr = np.asarray(getattr(s, "values", s), dtype=np.float64).reshape(-1)
    return arr


def histogram(s, bins="integer", density=False):
    """Histogram of a sample.

    Parameters
    ----------
    s : Sample or array_like
    bins : int, sequence of edges, or ``"integer"``
        ``"integer"`` uses unit-width bins centred on each integer in the
        sample range.  Bins are half-open except the last, which is closed.
    density : bool
        Report unit-area heights instead of counts.
    """
    x = _values(s)
    if x.size == 0:
        raise EmptySampleError("histogram of an empty sample")
    if isinstance(bins, str):
        if bins != "integer":
            raise ValueError(f"unknown bin spec {bins!r}")
        lo, hi = math.floor(np.min(x)), math.ceil(np.max(x))
        edges = np.arange(lo, hi + 2, dtype=np.float64) - 0.5
    else:
        edges = bin_edges(x, bins)
    counts, _ = np.histogram(x, bins=edges)
    widths = np.diff(edges)
    cols = {"left": edges[:-1], "right": edges[1:], "center": 0.5 * (edges[:-1] + edges[1:])}
    if density:
        cols["density"] = counts / (counts.sum() * widths) if counts.sum() else np.zeros(widths.size)
    else:
        cols["count"] = counts
    return AnalysisSeries("histogram", cols, {"n": int(x.size), "outside": int(x.size - counts.sum())})


@dataclass(frozen=True)
class TrendLine:
    """Least-squares line ``y = intercept + slope * rank``."""

    slope: float
    intercept: float
    n: int

    def predict(self, rank):
        return self.intercept + self.slope * np.asarray(rank, dtype=np.float64)

    def to_dict(self):
        return {"slope": self.slope, "intercept": self.intercept, "n": self.n}


def ols(x, y):
    """Closed-form ordinary least squares on centred data."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    xm, ym = x.mean(), y.mean()
    dx = x - xm
    sxx = float(np.dot(dx, dx))
    if sxx == 0:
        raise InsufficientDataError("trend line needs at least two distinct x values")
    slope = float(np.dot(dx, y - ym)) / sxx
    return TrendLine(slope, float(ym - slope * xm), int(x.size))


def rank_trend(values, descending=True, ranks=None):
    """Sort ``values``, pair with 1-based ranks and fit a trend line.

    Parameters
    ----------
    values : array_like
    descending : bool
        Rank 1 is the largest value when true.
    ranks : (int, int), optional
        Inclusive 1-based rank window (e.g. ``(1, 20)`` for the top 20).
        Points keep their global rank as the regressor.
    """
    y = np.sort(_values(values))
    if descending:
        y = y[::-1]
    rank = np.arange(1, y.size + 1, dtype=np.float64)
    if ranks is not None:
        lo, hi = ranks
        if lo < 1 or hi < lo:
            raise ValueError("rank window must satisfy 1 <= lo <= hi")
        y, rank = y[lo - 1:hi], rank[lo - 1:hi]
    if y.size < 2:
        raise InsufficientDataError("rank_trend needs at least 2 values")
    line = ols(rank, y)
    series = AnalysisSeries("rank-trend", {"rank": rank, "value": y, "trend": line.predict(rank)},
                            {"slope": line.slope, "intercept": line.intercept, "n": line.n,
                             "descending": bool(descending)})
    return series, line


# ---------------------------------------------------------------------------
# commit events


def normalize_name(name):
    return " ".join(name.split()).casefold()


def author_key(event):
    """Author identity: whitespace-normalized casefolded name plus lowercased email."""
    return f"{normalize_name(event.author_name)} <{event.author_email.strip().lower()}>"


def _key_fn(group_by):
    if group_by == "project":
        return lambda e: e.project
    if group_by == "author":
        return author_key
    raise ValueError(f"group_by must be 'project' or 'author', not {group_by!r}")


@dataclass(frozen=True)
class RateEntry:
    entity: str
    total_commits: int
    span_days: int
    rate: float


@dataclass
class RateTable:
    """Commit rates per entity plus the entities excluded for a single active day."""

    entries: list
    excluded: list

    @property
    def n_excluded(self):
        return len(self.excluded)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def series(self):
        """Rates sorted high to low against their rank."""
        rates = sorted((e.rate for e in self.entries), reverse=True)
        return AnalysisSeries("commit-rates", {"rank": np.arange(1, len(rates) + 1), "rate": rates},
                              {"entities": len(self.entries), "excluded": self.n_excluded})


def commit_rates(events, group_by="project", inclusive=False):
    """Commits per day of active span for each project or author.

    The span is ``last day - first day``.  Entities active on a single day
    have no span and are excluded (and listed in ``excluded``).  With
    ``inclusive=True`` the divisor becomes ``last - first + 1``; the
    single-day exclusion still applies.
    """
    key = _key_fn(group_by)
    first, last, total = {}, {}, Counter()
    for e in events:
        k = key(e)
        d = e.day
        total[k] += 1
        if k not in first or d < first[k]:
            first[k] = d
        if k not in last or d > last[k]:
            last[k] = d
    entries, excluded = [], []
    for k in sorted(total):
        span = (last[k] - first[k]).days
        if span == 0:
            excluded.append(k)
            continue
        if inclusive:
            span += 1
        entries.append(RateEntry(k, total[k], span, total[k] / span))
    return RateTable(entries, excluded)


def commit_totals(events, group_by="project"):
    """Number of commits per project or author."""
    key = _key_fn(group_by)
    return Counter(key(e) for e in events)


def weekly_profile(events):
    """Commit counts for Monday through Sunday (UTC days)."""
    counts = np.zeros(7, dtype=np.int64)
    for e in events:
        counts[e.day.weekday()] += 1
    return AnalysisSeries("weekly-profile", {"weekday": np.arange(7), "count": counts},
                          {"weekday_names": list(WEEKDAYS)})


def _period(d, granularity):
    if granularity == "day":
        return d
    if granularity == "month":
        return (d.year, d.month)
    return d.year


def _next(p, granularity):
    if granularity == "day":
        return p + timedelta(days=1)
    if granularity == "month":
        y, m = p
        return (y + 1, 1) if m == 12 else (y, m + 1)
    return p + 1


def _period_code(p, granularity):
    if granularity == "day":
        return p.year * 10000 + p.month * 100 + p.day
    if granularity == "month":
        return p[0] * 100 + p[1]
    return p


def time_series(events, granularity="month"):
    """Commit counts per period from the first to the last active period.

    Periods with no commits are filled with zero.  The ``period`` column
    holds integer codes ``YYYYMMDD``, ``YYYYMM`` or ``YYYY``.
    """
    if granularity not in GRANULARITIES:
        raise ValueError(f"granularity must be one of {GRANULARITIES}")
    counts = Counter(_period(e.day, granularity) for e in events)
    periods, values = [], []
    if counts:
        p, end = min(counts), max(counts)
        while p <= end:
            periods.append(_period_code(p, granularity))
            values.append(counts.get(p, 0))
            p = _next(p, granularity)
    return AnalysisSeries(f"time-series:{granularity}", {"period": periods, "count": values},
                          {"granularity": granularity, "total": int(sum(values))})


def peak_period(series):
    """Period code with the largest count (earliest on ties)."""
    if len(series) == 0:
        raise EmptySampleError("empty time series")
    return int(series["period"][int(np.argmax(series["count"]))])


def commits_vs_contributors(records):
    """(contributors, commits) pairs in input order, with their Pearson correlation."""
    records = list(records)
    if not records:
        raise EmptySampleError("no repository records")
    contributors = np.array([r.contributors for r in records], dtype=np.float64)
    commits = np.array([r.commits for r in records], dtype=np.float64)
    meta = {"n": len(records)}
    if len(records) > 1 and np.std(contributors) > 0 and np.std(commits) > 0:
        meta["pearson_r"] = float(np.corrcoef(contributors, commits)[0, 1])
    return AnalysisSeries("commits-vs-contributors",
                          {"contributors": contributors, "commits": commits}, meta)
