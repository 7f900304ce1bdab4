"""Synthetic coder-commit-repository graphs by inverse-transform sampling.

Repositories are drawn band first: a categorical draw over the activity
bands picks the band, then the band's commit-count distribution is
sampled truncated to the band and rounded half-up.  Coders get an
experience value and a commit rate.  Each repository picks a set of
contributors (weighted by rate, without replacement) and spreads its
commits over them (weighted by rate again).  Commit days are uniform
over the configured range, reweighted by day of week.

Random streams
--------------
All randomness derives from ``SynthConfig.seed`` through
``numpy.random.SeedSequence(seed, spawn_key=(stream, block))``:
stream 0 draws coders, stream 1 draws the band of every repository and
stream 2 serves repository blocks of ``REPO_BLOCK`` consecutive repos,
one substream per block.  Blocks are independent, so generating them
on several threads gives the same graph as a single thread.
"""
import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import date

import numpy as np

from . import __version__
from ._io import atomic_write_text
from .dist import Distribution, Family, uniforms
from .errors import ConfigError, ParameterError, TruncationError
from .ingest import BANDS, band_by_label
from .published import BAND_REPO_COUNTS, best_band_fits

REPO_BLOCK = 256
MIN_BAND_MASS = 1e-12
_STREAM_CODERS, _STREAM_BANDS, _STREAM_REPOS, _STREAM_LABELS = range(4)

DEFAULT_START = date(1998, 1, 1)
DEFAULT_END = date(2017, 1, 27)


def _stream(seed, *key):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


# ---------------------------------------------------------------------------
# truncated sampling


def truncated_sample(d, lo, hi, rng, n=None):
    """Inverse-transform draws from ``d`` restricted to ``[lo, hi]``.

    A uniform ``u`` is mapped to ``F(lo) + u (F(hi) - F(lo))`` and
    inverted.  When ``lo`` sits in the upper half of the distribution the
    same map is applied to the survival function, which keeps precision
    far in the tail.  With infinite bounds this is plain quantile
    sampling and consumes the stream identically.

    Raises
    ------
    TruncationError
        If the interval carries less than ``1e-12`` probability.
    """
    size = 1 if n is None else int(n)
    f_lo = 0.0 if lo == -math.inf else float(d.cdf(lo))
    f_hi = 1.0 if hi == math.inf else float(d.cdf(hi))
    s_lo = 1.0 if lo == -math.inf else float(d.sf(lo))
    s_hi = 0.0 if hi == math.inf else float(d.sf(hi))
    use_sf = f_lo > 0.5
    mass = (s_lo - s_hi) if use_sf else (f_hi - f_lo)
    if not mass >= MIN_BAND_MASS:
        raise TruncationError(f"{d!r} has probability {mass:.3g} in [{lo}, {hi}]")
    u = uniforms(rng, size)
    if use_sf:
        s = s_lo - u * mass
        s = np.clip(s, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0))
        x = d.isf(s)
    else:
        p = f_lo + u * mass
        p = np.clip(p, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0))
        x = d.quantile(p)
    x = np.clip(x, lo, hi)
    return float(x[0]) if n is None else x


def round_half_up(x):
    return np.floor(np.asarray(x, dtype=np.float64) + 0.5)


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class BandModel:
    """Commit-count model for one band: ``commits = offset + unit * z`` with ``z ~ distribution``.

    The published band fits describe standardized counts, so they need a
    location and unit to land inside their band.  ``for_band`` picks
    defaults that put the support's lower end at the band's lower edge;
    ``offset=0, unit=1`` uses the distribution on the raw commit scale.
    """

    distribution: Distribution
    offset: float = 0.0
    unit: float = 1.0

    @classmethod
    def for_band(cls, band, d):
        lo = band.lower - 0.5
        if band.upper is None:
            unit = 1e5
        else:
            unit = (band.upper - band.lower) / 4.0
        lb = d.lower_bound
        if math.isfinite(lb):
            offset = lo - lb * unit
        elif band.upper is None:
            offset = band.lower
        else:
            offset = 0.5 * (band.lower + band.upper)
        return cls(d, offset, unit)

    def z_bounds(self, band):
        lo = (band.lower - 0.5 - self.offset) / self.unit
        hi = math.inf if band.upper is None else (band.upper - 0.5 - self.offset) / self.unit
        return lo, hi

    def sample(self, band, rng, n):
        """Integer commit counts inside ``band``."""
        lo, hi = self.z_bounds(band)
        z = truncated_sample(self.distribution, lo, hi, rng, n)
        counts = round_half_up(self.offset + self.unit * z)
        return np.clip(counts, band.lower, band.last).astype(np.int64)

    def to_dict(self):
        return {**self.distribution.to_dict(), "offset": self.offset, "unit": self.unit}

    @classmethod
    def from_dict(cls, record):
        return cls(Distribution.from_dict(record), float(record.get("offset", 0.0)),
                   float(record.get("unit", 1.0)))


def table_band_mix():
    """Band probabilities proportional to the published repository counts."""
    total = sum(BAND_REPO_COUNTS.values())
    return tuple(BAND_REPO_COUNTS[b.label] / total for b in BANDS)


def default_band_models():
    fits = best_band_fits()
    return {b.label: BandModel.for_band(b, fits[b.label]) for b in BANDS}


@dataclass
class SynthConfig:
    """Everything that determines a synthetic graph.

    ``band_mix`` is in band order (see :data:`repodist.ingest.BANDS`) and
    must sum to one.  ``coder_rate_dist`` supplies each coder's commit
    rate; ``bug_probability`` enables the per-commit Bernoulli labeler.
    ``workers`` only sets the thread count; it never changes the output
    and is not serialized.
    """

    seed: int
    n_repos: int = 1000
    n_coders: int = 100
    band_mix: tuple = field(default_factory=table_band_mix)
    commits_per_repo_dist: dict = field(default_factory=default_band_models)
    coder_experience_dist: Distribution = field(
        default_factory=lambda: Distribution(Family.NEG_BINOMIAL, (1.59, 8.33)))
    coder_rate_dist: Distribution = field(
        default_factory=lambda: Distribution(Family.EXPONENTIAL, (0.0, 1.0)))
    contributors_per_repo_dist: Distribution = field(
        default_factory=lambda: Distribution(Family.NEG_BINOMIAL, (0.8, 3.0)))
    commit_msg_len_dist: Distribution = field(
        default_factory=lambda: Distribution(Family.LOGNORMAL, (0.8, 0.0, 40.0)))
    time_range: tuple = (DEFAULT_START, DEFAULT_END)
    weekly_weights: tuple = (1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0)
    stratified_experience: bool = True
    bug_probability: float = None
    workers: int = 1

    def __post_init__(self):
        self.band_mix = tuple(float(p) for p in self.band_mix)
        self.weekly_weights = tuple(float(w) for w in self.weekly_weights)
        self.time_range = tuple(_as_date(d) for d in self.time_range)
        self.commits_per_repo_dist = {
            k: v if isinstance(v, BandModel) else BandModel(v) for k, v in self.commits_per_repo_dist.items()}

    def problems(self):
        """Validation problems as ``(field, message)`` pairs; empty when valid."""
        out = []
        if not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            out.append(("seed", "must be a nonnegative integer"))
        for name in ("n_repos", "n_coders", "workers"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 1:
                out.append((name, "must be an integer >= 1"))
        mix = self.band_mix
        if len(mix) != len(BANDS):
            out.append(("band_mix", f"needs {len(BANDS)} entries, got {len(mix)}"))
        elif any(not (p >= 0) for p in mix):
            out.append(("band_mix", "entries must be nonnegative"))
        elif abs(math.fsum(mix) - 1.0) > 1e-12:
            out.append(("band_mix", f"must sum to 1 (got {math.fsum(mix)!r})"))
        else:
            for band, p in zip(BANDS, mix):
                if p == 0:
                    continue
                model = self.commits_per_repo_dist.get(band.label)
                if model is None:
                    out.append((f"commits_per_repo_dist.{band.label}", "missing for a band with positive mix"))
                    continue
                lo, hi = model.z_bounds(band)
                try:
                    truncated_sample(model.distribution, lo, hi, np.random.default_rng(0), 1)
                except TruncationError as exc:
                    out.append((f"commits_per_repo_dist.{band.label}", f"negligible mass in band: {exc}"))
        start, end = self.time_range
        if start > end:
            out.append(("time_range", "start must not be after end"))
        w = self.weekly_weights
        if len(w) != 7 or any(not (x >= 0) or not math.isfinite(x) for x in w):
            out.append(("weekly_weights", "needs 7 finite nonnegative weights"))
        elif sum(w) <= 0:
            out.append(("weekly_weights", "must not all be zero"))
        elif end >= start and _day_weights(start, end, w).sum() <= 0:
            out.append(("weekly_weights", "time_range contains no day with positive weight"))
        if self.coder_experience_dist.cdf(-1e-9) > 1e-9:
            out.append(("coder_experience_dist", "puts mass on negative years"))
        if self.coder_rate_dist.cdf(-1e-12) > 0:
            out.append(("coder_rate_dist", "puts mass on negative rates"))
        if self.bug_probability is not None and not 0 <= self.bug_probability <= 1:
            out.append(("bug_probability", "must lie in [0, 1]"))
        return out

    def validate(self):
        problems = self.problems()
        if problems:
            raise ConfigError(problems)
        return self

    def to_dict(self):
        return {
            "seed": int(self.seed),
            "n_repos": int(self.n_repos),
            "n_coders": int(self.n_coders),
            "band_mix": {b.label: p for b, p in zip(BANDS, self.band_mix)},
            "commits_per_repo_dist": {k: v.to_dict() for k, v in self.commits_per_repo_dist.items()},
            "coder_experience_dist": self.coder_experience_dist.to_dict(),
            "coder_rate_dist": self.coder_rate_dist.to_dict(),
            "contributors_per_repo_dist": self.contributors_per_repo_dist.to_dict(),
            "commit_msg_len_dist": self.commit_msg_len_dist.to_dict(),
            "time_range": [d.isoformat() for d in self.time_range],
            "weekly_weights": list(self.weekly_weights),
            "stratified_experience": self.stratified_experience,
            "bug_probability": self.bug_probability,
        }

    @classmethod
    def from_dict(cls, record, seed=None):
        """Build and validate a config; every bad field is reported at once.

        Missing keys take their defaults.  ``seed`` overrides the record.
        """
        record = dict(record)
        if seed is not None:
            record["seed"] = seed
        problems, kwargs = [], {}
        known = set(cls.__dataclass_fields__)
        for key in record:
            if key not in known:
                problems.append((key, "unknown field"))
        if "seed" not in record:
            problems.append(("seed", "required"))

        def convert(name, fn):
            if name in record:
                try:
                    kwargs[name] = fn(record[name])
                except (KeyError, TypeError, ValueError, ParameterError) as exc:
                    problems.append((name, str(exc) or type(exc).__name__))

        for name in ("seed", "n_repos", "n_coders", "workers"):
            convert(name, _as_int)
        convert("band_mix", _mix_from)
        convert("commits_per_repo_dist", _band_models_from)
        for name in ("coder_experience_dist", "coder_rate_dist", "contributors_per_repo_dist",
                     "commit_msg_len_dist"):
            convert(name, Distribution.from_dict)
        convert("time_range", lambda v: tuple(_as_date(x) for x in v))
        convert("weekly_weights", lambda v: tuple(float(x) for x in v))
        convert("stratified_experience", _as_bool)
        convert("bug_probability", lambda v: None if v is None else float(v))
        # validate what did parse so every bad field is reported in one go
        failed = {name for name, _ in problems}
        try:
            cfg = cls(**{"seed": 0, **kwargs})
        except (TypeError, ValueError, ParameterError) as exc:
            raise ConfigError(problems + [("config", str(exc))]) from exc
        problems += [p for p in cfg.problems() if p[0].split(".")[0] not in failed]
        if problems:
            raise ConfigError(problems)
        return cfg

    @classmethod
    def from_json(cls, path, seed=None):
        try:
            with open(path, encoding="utf-8") as handle:
                record = json.load(handle)
        except OSError as exc:
            raise ConfigError([("path", f"cannot read {path}: {exc.strerror or exc}")]) from exc
        except json.JSONDecodeError as exc:
            raise ConfigError([("path", f"{path} is not valid JSON: {exc}")]) from exc
        if not isinstance(record, dict):
            raise ConfigError([("path", "config must be a JSON object")])
        return cls.from_dict(record, seed)


def _as_int(v):
    if isinstance(v, bool) or not float(v).is_integer():
        raise ValueError(f"expected an integer, got {v!r}")
    return int(v)


def _as_bool(v):
    if not isinstance(v, bool):
        raise ValueError(f"expected true or false, got {v!r}")
    return v


def _as_date(v):
    if isinstance(v, date):
        return v
    return date.fromisoformat(str(v))


def _mix_from(v):
    if isinstance(v, dict):
        unknown = [k for k in v if k not in {b.label for b in BANDS}]
        if unknown:
            raise ValueError(f"unknown bands {unknown}")
        return tuple(float(v.get(b.label, 0.0)) for b in BANDS)
    return tuple(float(x) for x in v)


def _band_models_from(v):
    out = default_band_models()
    for label, rec in v.items():
        band_by_label(label)
        out[label] = BandModel.from_dict(rec)
    return out


# ---------------------------------------------------------------------------
# graph


@dataclass(frozen=True)
class CoderNode:
    id: int
    experience_years: float
    commit_rate: float


@dataclass(frozen=True)
class CommitNode:
    id: int
    coder_id: int
    repo_id: int
    timestamp: date
    msg_len: int


@dataclass(frozen=True)
class RepoNode:
    id: int
    band: str
    total_commits: int
    contributors: int


@dataclass
class TripartiteGraph:
    """Coders, commits and repositories stored column-wise.

    Edges are implicit: each commit row holds one ``coder_id`` and one
    ``repo_id``.  ``commit_day`` is a proleptic Gregorian ordinal; use
    :meth:`commits` for ``date`` objects.  ``buggy`` is only set
    when the labeler is enabled.
    """

    coder_experience: np.ndarray
    coder_rate: np.ndarray
    commit_coder: np.ndarray
    commit_repo: np.ndarray
    commit_day: np.ndarray
    commit_msg_len: np.ndarray
    repo_band: np.ndarray
    repo_commits: np.ndarray
    repo_contributors: np.ndarray
    buggy: np.ndarray = None

    @property
    def n_coders(self):
        return self.coder_experience.size

    @property
    def n_commits(self):
        return self.commit_coder.size

    @property
    def n_repos(self):
        return self.repo_commits.size

    def coders(self):
        return [CoderNode(i, float(e), float(r))
                for i, (e, r) in enumerate(zip(self.coder_experience, self.coder_rate))]

    def commits(self):
        return [CommitNode(i, int(c), int(r), date.fromordinal(int(d)), int(m))
                for i, (c, r, d, m) in enumerate(zip(self.commit_coder, self.commit_repo,
                                                     self.commit_day, self.commit_msg_len))]

    def repos(self):
        return [RepoNode(i, BANDS[int(b)].label, int(t), int(c))
                for i, (b, t, c) in enumerate(zip(self.repo_band, self.repo_commits, self.repo_contributors))]

    def integrity_violations(self):
        """Count of commits pointing at a coder or repository that does not exist."""
        bad_coder = (self.commit_coder < 0) | (self.commit_coder >= self.n_coders)
        bad_repo = (self.commit_repo < 0) | (self.commit_repo >= self.n_repos)
        return int(np.sum(bad_coder | bad_repo))

    def band_counts(self):
        return np.bincount(self.repo_band, minlength=len(BANDS))

    def weekday_counts(self):
        # ordinal 1 (0001-01-01) is a Monday
        return np.bincount((self.commit_day - 1) % 7, minlength=7)

    def equals(self, other):
        names = [f for f in self.__dataclass_fields__ if f != "buggy"]
        same = all(np.array_equal(getattr(self, n), getattr(other, n)) for n in names)
        if (self.buggy is None) != (other.buggy is None):
            return False
        return same and (self.buggy is None or np.array_equal(self.buggy, other.buggy))


def _day_weights(start, end, weekly):
    days = np.arange(start.toordinal(), end.toordinal() + 1)
    return np.asarray(weekly, dtype=np.float64)[(days - 1) % 7]


def _stratified_uniforms(rng, n):
    """One uniform in each of the ``n`` equal strata of (0, 1), in random order."""
    v = uniforms(rng, n)
    return (rng.permutation(n) + v) / n


def _generate_coders(cfg):
    rng = _stream(cfg.seed, _STREAM_CODERS)
    n = cfg.n_coders
    u = _stratified_uniforms(rng, n) if cfg.stratified_experience else uniforms(rng, n)
    u = np.clip(u, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0))
    experience = np.maximum(cfg.coder_experience_dist.quantile(u), 0.0)
    rate = np.maximum(cfg.coder_rate_dist.sample(rng, n), 0.0)
    return experience, rate


def _generate_block(cfg, block, bands, rates, day_cdf, first_day):
    rng = _stream(cfg.seed, _STREAM_REPOS, block)
    n = bands.size
    totals = np.zeros(n, dtype=np.int64)
    for b in np.unique(bands):
        idx = np.flatnonzero(bands == b)
        band = BANDS[int(b)]
        totals[idx] = cfg.commits_per_repo_dist[band.label].sample(band, rng, idx.size)
    wanted = round_half_up(cfg.contributors_per_repo_dist.sample(rng, n)).astype(np.int64)
    wanted = np.clip(wanted, 1, cfg.n_coders)
    weights = rates / rates.sum() if rates.sum() > 0 else np.full(rates.size, 1.0 / rates.size)
    coder_parts, contributors = [], np.zeros(n, dtype=np.int64)
    for i in range(n):
        if totals[i] == 0:
            coder_parts.append(np.empty(0, dtype=np.int64))
            continue
        chosen = _choose_without_replacement(rng, weights, int(wanted[i]))
        w = rates[chosen]
        w = w / w.sum() if w.sum() > 0 else np.full(chosen.size, 1.0 / chosen.size)
        assigned = chosen[rng.choice(chosen.size, size=int(totals[i]), p=w)]
        contributors[i] = np.unique(assigned).size
        coder_parts.append(assigned)
    total = int(totals.sum())
    coders = np.concatenate(coder_parts) if coder_parts else np.empty(0, dtype=np.int64)
    if total:
        days = first_day + np.searchsorted(day_cdf, uniforms(rng, total) * day_cdf[-1], side="left")
        msg = round_half_up(cfg.commit_msg_len_dist.sample(rng, total))
        msg = np.maximum(msg, 0).astype(np.int64)
    else:
        days = np.empty(0, dtype=np.int64)
        msg = np.empty(0, dtype=np.int64)
    return totals, contributors, coders, days.astype(np.int64), msg


def _choose_without_replacement(rng, weights, k):
    """``k`` distinct indices drawn with probability proportional to ``weights``."""
    positive = np.count_nonzero(weights)
    if positive < k:
        return rng.choice(weights.size, size=k, replace=False)
    return rng.choice(weights.size, size=k, replace=False, p=weights)


def generate(cfg):
    """Generate a :class:`TripartiteGraph` from a validated :class:`SynthConfig`.

    Raises
    ------
    ConfigError
        For an invalid configuration, including a band whose distribution
        has negligible mass inside the band (the field names the band).
    """
    cfg.validate()
    experience, rates = _generate_coders(cfg)
    band_rng = _stream(cfg.seed, _STREAM_BANDS)
    bands = band_rng.choice(len(BANDS), size=cfg.n_repos, p=np.asarray(cfg.band_mix) / math.fsum(cfg.band_mix))
    start, end = cfg.time_range
    day_cdf = np.cumsum(_day_weights(start, end, cfg.weekly_weights))
    first_day = start.toordinal()

    starts = range(0, cfg.n_repos, REPO_BLOCK)
    jobs = [(cfg, i, bands[s:s + REPO_BLOCK], rates, day_cdf, first_day) for i, s in enumerate(starts)]
    if cfg.workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(lambda job: _generate_block(*job), jobs))
    else:
        parts = [_generate_block(*job) for job in jobs]

    totals = np.concatenate([p[0] for p in parts])
    contributors = np.concatenate([p[1] for p in parts])
    commit_coder = np.concatenate([p[2] for p in parts]).astype(np.int64)
    commit_day = np.concatenate([p[3] for p in parts]).astype(np.int64)
    commit_msg = np.concatenate([p[4] for p in parts]).astype(np.int64)
    commit_repo = np.repeat(np.arange(cfg.n_repos, dtype=np.int64), totals)
    buggy = None
    if cfg.bug_probability is not None:
        label_rng = _stream(cfg.seed, _STREAM_LABELS)
        buggy = (label_rng.random(commit_coder.size) < cfg.bug_probability).astype(np.int64)
    return TripartiteGraph(experience, rates, commit_coder, commit_repo, commit_day, commit_msg,
                           bands.astype(np.int64), totals, contributors, buggy)


# ---------------------------------------------------------------------------
# reporting and export


def band_frequency_report(g, band_mix):
    """Observed band counts against the multinomial expectation and a 3-sigma bound."""
    n = g.n_repos
    counts = g.band_counts()
    rows = []
    for band, p, c in zip(BANDS, band_mix, counts):
        expected = n * p
        sigma = math.sqrt(n * p * (1.0 - p))
        rows.append({"band": band.label, "probability": p, "observed": int(c), "expected": expected,
                     "sigma": sigma, "within_3sigma": bool(abs(c - expected) <= 3.0 * sigma)})
    return rows


def weekday_report(g, cfg):
    start, end = cfg.time_range
    w = _day_weights(start, end, cfg.weekly_weights)
    days = np.arange(start.toordinal(), end.toordinal() + 1)
    probs = np.bincount((days - 1) % 7, weights=w, minlength=7) / w.sum()
    counts = g.weekday_counts()
    n = g.n_commits
    rows = []
    for d in range(7):
        expected = n * probs[d]
        sigma = math.sqrt(n * probs[d] * (1.0 - probs[d]))
        rows.append({"weekday": d, "observed": int(counts[d]), "expected": float(expected),
                     "within_3sigma": bool(abs(counts[d] - expected) <= 3.0 * sigma + 1e-9)})
    return rows


def _fmt(v):
    v = float(v)
    if v.is_integer() and abs(v) < 2 ** 53:
        return str(int(v))
    return repr(v)


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


CODER_HEADER = ("id", "experience_years", "commit_rate")
COMMIT_HEADER = ("id", "coder_id", "repo_id", "date", "msg_len")
REPO_HEADER = ("id", "band", "total_commits", "contributors")


def export_graph(g, directory, cfg=None):
    """Write ``coders.csv``, ``commits.csv``, ``repos.csv`` and ``manifest.json``.

    Output is a pure function of the graph and config, so replaying a
    manifest's config reproduces the files byte for byte.
    """
    os.makedirs(directory, exist_ok=True)
    coders = _csv_text(CODER_HEADER, ((i, _fmt(e), _fmt(r)) for i, (e, r)
                                      in enumerate(zip(g.coder_experience, g.coder_rate))))
    header = COMMIT_HEADER + (("buggy",) if g.buggy is not None else ())
    ordinals = g.commit_day
    day_text = {}

    def day(o):
        o = int(o)
        if o not in day_text:
            day_text[o] = date.fromordinal(o).isoformat()
        return day_text[o]

    def commit_rows():
        for i in range(g.n_commits):
            row = [i, int(g.commit_coder[i]), int(g.commit_repo[i]), day(ordinals[i]), int(g.commit_msg_len[i])]
            if g.buggy is not None:
                row.append(int(g.buggy[i]))
            yield row

    commits = _csv_text(header, commit_rows())
    repos = _csv_text(REPO_HEADER, ((i, BANDS[int(b)].label, int(t), int(c)) for i, (b, t, c)
                                    in enumerate(zip(g.repo_band, g.repo_commits, g.repo_contributors))))
    manifest = {
        "schema": 1,
        "tool": "repodist",
        "version": __version__,
        "files": {"coders": "coders.csv", "commits": "commits.csv", "repos": "repos.csv"},
        "counts": {"coders": g.n_coders, "commits": g.n_commits, "repos": g.n_repos},
    }
    if cfg is not None:
        manifest["seed"] = int(cfg.seed)
        manifest["config"] = cfg.to_dict()
        manifest["band_frequency"] = band_frequency_report(g, cfg.band_mix)
    paths = {}
    for name, text in (("coders.csv", coders), ("commits.csv", commits), ("repos.csv", repos),
                       ("manifest.json", json.dumps(manifest, indent=2) + "\n")):
        paths[name] = os.path.join(directory, name)
        atomic_write_text(paths[name], text)
    return paths


def _read_rows(path, header):
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        got = next(reader)
        if tuple(got[:len(header)]) != header:
            raise ValueError(f"{path}: expected header {','.join(header)}")
        return got, list(reader)


def import_graph(directory):
    """Read a graph written by :func:`export_graph`; returns ``(graph, manifest)``."""
    _, coder_rows = _read_rows(os.path.join(directory, "coders.csv"), CODER_HEADER)
    commit_header, commit_rows = _read_rows(os.path.join(directory, "commits.csv"), COMMIT_HEADER)
    _, repo_rows = _read_rows(os.path.join(directory, "repos.csv"), REPO_HEADER)
    with open(os.path.join(directory, "manifest.json"), encoding="utf-8") as handle:
        manifest = json.load(handle)
    label_index = {b.label: i for i, b in enumerate(BANDS)}

    def column(rows, i, fn, dtype):
        return np.array([fn(r[i]) for r in rows], dtype=dtype)

    def ordinal(text):
        return date.fromisoformat(text).toordinal()

    buggy = None
    if "buggy" in commit_header:
        buggy = column(commit_rows, commit_header.index("buggy"), int, np.int64)
    g = TripartiteGraph(
        column(coder_rows, 1, float, np.float64),
        column(coder_rows, 2, float, np.float64),
        column(commit_rows, 1, int, np.int64),
        column(commit_rows, 2, int, np.int64),
        column(commit_rows, 3, ordinal, np.int64),
        column(commit_rows, 4, int, np.int64),
        column(repo_rows, 1, label_index.__getitem__, np.int64),
        column(repo_rows, 2, int, np.int64),
        column(repo_rows, 3, int, np.int64),
        buggy,
    )
    return g, manifest
