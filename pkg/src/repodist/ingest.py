"""Readers and cleaning pipelines for the raw dataset formats.

Three inputs are supported: the GitHub repository metadata CSV, the
Stack Overflow developer survey CSVs and a CSV export of the TravisTorrent
commit table.  Readers stream their input once; rows that cannot be parsed
are skipped and counted, never dropped silently.
"""
import csv
import logging
import math
import sys
from dataclasses import dataclass
from datetime import datetime, timezone

from .errors import EmptySampleError, IngestError
from .samples import Sample

log = logging.getLogger(__name__)

csv.field_size_limit(min(sys.maxsize, 2 ** 31 - 1))


# ---------------------------------------------------------------------------
# activity bands


@dataclass(frozen=True)
class ActivityBand:
    """Commit-count range ``[lower, upper)``; ``upper`` is ``None`` for the open band."""

    label: str
    lower: int
    upper: int = None

    def __contains__(self, commits):
        return commits >= self.lower and (self.upper is None or commits < self.upper)

    @property
    def last(self):
        """Largest commit count in the band, or ``inf``."""
        return math.inf if self.upper is None else self.upper - 1


# 100000 itself belongs to the 10000-100000 band
BANDS = (
    ActivityBand("<20", 0, 20),
    ActivityBand("20-100", 20, 100),
    ActivityBand("100-1000", 100, 1000),
    ActivityBand("1000-4000", 1000, 4000),
    ActivityBand("4000-10000", 4000, 10000),
    ActivityBand("10000-100000", 10000, 100001),
    ActivityBand(">100000", 100001, None),
)
_BY_LABEL = {b.label: b for b in BANDS}


def band_of(commits):
    """The activity band containing a nonnegative commit count."""
    if commits < 0:
        raise ValueError("commit count must be nonnegative")
    for band in BANDS:
        if commits in band:
            return band
    raise AssertionError("bands do not cover the input")  # unreachable


def band_by_label(label):
    try:
        return _BY_LABEL[label]
    except KeyError:
        raise ValueError(f"unknown activity band {label!r}; expected one of {list(_BY_LABEL)}") from None


# ---------------------------------------------------------------------------
# shared reader plumbing


@dataclass
class IngestResult:
    """Parsed records plus the number of rows that were skipped."""

    records: list
    malformed: int = 0
    path: str = ""

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]


def _open(path):
    try:
        return open(path, newline="", encoding="utf-8", errors="replace")
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _reader(handle, path, required, columns):
    """DictReader plus a canonical-name -> header-name map; missing columns are fatal."""
    reader = csv.DictReader(handle)
    header = reader.fieldnames
    if header is None:
        raise IngestError(f"{path}: no header row")
    header = [h.strip() for h in header]
    reader.fieldnames = header
    names = {c: (columns or {}).get(c, c) for c in required}
    missing = [n for n in names.values() if n not in header]
    if missing:
        raise IngestError(f"{path}: missing required columns {missing}")
    return reader, names


# ---------------------------------------------------------------------------
# GitHub repository metadata

REPO_COLUMNS = ("repository", "commits", "contributors", "avg_commit_length")


@dataclass(frozen=True)
class RepoRecord:
    repo_name: str
    commits: int
    contributors: int
    avg_commit_length: float


def _count(text):
    value = float(text)
    if not value.is_integer() or value < 0:
        raise ValueError(f"not a nonnegative integer: {text!r}")
    return int(value)


def parse_repo_row(row):
    """``RepoRecord`` from ``[name, commits, contributors, avg_len]`` strings."""
    name, commits, contributors, avg = (v.strip() for v in row)
    avg_len = float(avg)
    if not name or not math.isfinite(avg_len) or avg_len < 0:
        raise ValueError("bad repository row")
    return RepoRecord(name, _count(commits), _count(contributors), avg_len)


def read_repo_csv(path, columns=None):
    """Read the GitHub repository CSV.

    Parameters
    ----------
    path : str or Path
    columns : dict, optional
        Maps the canonical names ``repository, commits, contributors,
        avg_commit_length`` to the headers actually used in the file.
    """
    with _open(path) as handle:
        reader, names = _reader(handle, path, REPO_COLUMNS, columns)
        records, bad = [], 0
        for row in reader:
            try:
                records.append(parse_repo_row([row[names[c]] or "" for c in REPO_COLUMNS]))
            except (ValueError, TypeError, AttributeError):
                bad += 1
    if bad:
        log.warning("%s: skipped %d malformed rows", path, bad)
    return IngestResult(records, bad, str(path))


def band_counts(records):
    """Number of repositories per activity band, in band order."""
    counts = {b.label: 0 for b in BANDS}
    for r in records:
        counts[band_of(r.commits).label] += 1
    return counts


def repo_sample(records, band=None, source="github-repos"):
    """Commit counts as a ``Sample``, optionally restricted to one band."""
    if band is not None:
        band = band if isinstance(band, ActivityBand) else band_by_label(band)
        values = [r.commits for r in records if r.commits in band]
        return Sample(values, source, (f"band {band.label}",), band.label)
    return Sample([r.commits for r in records], source)


# ---------------------------------------------------------------------------
# developer surveys

SURVEY_COLUMNS = ("MainBranch", "YearsCodePro", "Employment", "WorkWeekHrs")
PROFESSIONAL = "I am a developer by profession"
FULL_TIME = "Employed full-time"
LESS_THAN_ONE = "Less than 1 year"
MORE_THAN_FIFTY = "More than 50 years"
NA_VALUES = frozenset({"", "NA", "N/A", "nan", "NaN"})


@dataclass(frozen=True)
class SurveyRow:
    main_branch: str
    years_code_pro: str
    employment: str = ""
    work_week_hrs: float = None


def read_survey_csv(path, columns=None, require=("MainBranch", "YearsCodePro")):
    """Read a Stack Overflow survey export.

    Only ``require`` must be present; ``Employment`` and ``WorkWeekHrs``
    are read when available (the 2020 pipeline needs them).  ``columns``
    remaps canonical names to a year's actual headers.
    """
    with _open(path) as handle:
        reader, names = _reader(handle, path, require, columns)
        for c in SURVEY_COLUMNS:
            names.setdefault(c, (columns or {}).get(c, c))
        present = set(reader.fieldnames)
        rows, bad = [], 0
        for raw in reader:
            def get(c):
                v = raw.get(names[c]) if names[c] in present else None
                return (v or "").strip()
            hrs = get("WorkWeekHrs")
            try:
                hours = None if hrs in NA_VALUES else float(hrs)
            except ValueError:
                bad += 1
                continue
            rows.append(SurveyRow(get("MainBranch"), get("YearsCodePro"), get("Employment"), hours))
    return IngestResult(rows, bad, str(path))


def _years(text):
    """Numeric years or ``None`` for NA and other non-numeric entries."""
    try:
        value = float(text)
    except (TypeError, ValueError):
        return None
    return value if math.isfinite(value) else None


def clean_2021(rows):
    """Rows surviving the 2021 rules: professional developers with 1 to 50 numeric years."""
    kept = []
    for r in rows:
        if r.main_branch != PROFESSIONAL:
            continue
        y = _years(r.years_code_pro)
        if y is None or y < 1 or y > 50:
            continue
        kept.append(r)
    return kept


def _require(values, what):
    if not values:
        raise EmptySampleError(f"{what}: no rows survive preprocessing")
    return values


def preprocess_2021(rows, source="so-survey-2021"):
    """Years of professional coding under the 2021 survey rules.

    Keeps rows whose main branch is professional development and whose
    years are numeric in ``[1, 50]``.  "Less than 1 year", "More than 50
    years" and NA entries are therefore all dropped.
    """
    values = _require([_years(r.years_code_pro) for r in clean_2021(rows)], source)
    return Sample(values, source, ("professional", "numeric years in [1, 50]"))


def preprocess_2019(rows):
    """The 2019 survey under the 2021 rules, for cross-year comparison."""
    return preprocess_2021(rows, source="so-survey-2019")


def clean_2020(rows):
    """Rows surviving the 2020 rules, with the year sentinels mapped to numbers."""
    kept = []
    for r in rows:
        text = r.years_code_pro
        if text == LESS_THAN_ONE:
            years = 0.0
        elif text == MORE_THAN_FIFTY:
            years = 51.0
        else:
            years = _years(text)
        if years is None:
            continue
        if r.employment != FULL_TIME:
            continue
        if r.work_week_hrs is None or not 30 <= r.work_week_hrs <= 90:
            continue
        kept.append((r, years))
    return kept


def preprocess_2020(rows):
    """Years of professional coding under the 2020 survey rules.

    "Less than 1 year" becomes 0 and "More than 50 years" becomes 51; NA
    years are dropped; only full-time employees working 30 to 90 hours a
    week are kept.
    """
    values = _require([y for _, y in clean_2020(rows)], "so-survey-2020")
    return Sample(values, "so-survey-2020",
                  ("sentinels mapped to 0 and 51", "drop NA", "full-time", "work week 30-90 h"))


def filter_experience_range(s, lo, hi):
    """Subsample with ``lo <= years <= hi``; an empty result is logged, not raised."""
    if lo > hi:
        raise ValueError("filter_experience_range needs lo <= hi")
    if not isinstance(s, Sample):
        s = Sample(s)
    values = s.values[(s.values >= lo) & (s.values <= hi)]
    if values.size == 0:
        log.warning("experience range [%s, %s] selects no rows", lo, hi)
    return s.derive(values, f"years in [{lo:g}, {hi:g}]")


# ---------------------------------------------------------------------------
# commit events

COMMIT_COLUMNS = ("project", "sha", "message", "date", "author_name", "author_email")


@dataclass(frozen=True)
class CommitEvent:
    project: str
    sha: str
    message: str
    date: datetime
    author_name: str
    author_email: str

    @property
    def day(self):
        """UTC calendar day."""
        return self.date.date()


def parse_timestamp(text):
    """RFC 3339 / ISO 8601 text or epoch seconds, returned as an aware UTC datetime.

    Timestamps without an offset are taken to be UTC.
    """
    text = text.strip()
    if not text:
        raise ValueError("empty timestamp")
    try:
        seconds = float(text)
    except ValueError:
        pass
    else:
        if not math.isfinite(seconds):
            raise ValueError(f"bad epoch timestamp {text!r}")
        return datetime.fromtimestamp(seconds, tz=timezone.utc)
    if text[-1] in "Zz":
        text = text[:-1] + "+00:00"
    stamp = datetime.fromisoformat(text)
    if stamp.tzinfo is None:
        return stamp.replace(tzinfo=timezone.utc)
    return stamp.astimezone(timezone.utc)


def iter_commit_events(path, columns=None, counter=None):
    """Stream ``CommitEvent`` objects; unparseable rows increment ``counter['malformed']``."""
    counter = counter if counter is not None else {}
    counter.setdefault("malformed", 0)
    with _open(path) as handle:
        reader, names = _reader(handle, path, COMMIT_COLUMNS, columns)
        for row in reader:
            try:
                sha = (row[names["sha"]] or "").strip()
                if not sha:
                    raise ValueError("empty sha")
                yield CommitEvent(
                    (row[names["project"]] or "").strip(),
                    sha,
                    row[names["message"]] or "",
                    parse_timestamp(row[names["date"]] or ""),
                    (row[names["author_name"]] or "").strip(),
                    (row[names["author_email"]] or "").strip(),
                )
            except (ValueError, TypeError, OverflowError, OSError):
                counter["malformed"] += 1


def read_commit_events(path, columns=None):
    """Read a commit-table CSV export.  Duplicate shas are kept."""
    counter = {}
    events = list(iter_commit_events(path, columns, counter))
    if counter["malformed"]:
        log.warning("%s: skipped %d malformed rows", path, counter["malformed"])
    return IngestResult(events, counter["malformed"], str(path))
