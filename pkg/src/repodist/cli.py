"""The ``repodist`` command: fit, analyze, synth and sample.

Failures print one JSON error record on stderr,
``{"error": {"kind": ..., "message": ...}}``, and exit with status 1
(status 2 for usage errors).  Output files are written atomically.
Set ``REPODIST_LOG`` (e.g. ``INFO``) to see progress logging.
"""
import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__, analyze, ingest, synth
from ._io import atomic_write_text
from .dist import Distribution, Family
from .errors import RepodistError
from .fit import (
    Criterion,
    FitResult,
    Ranking,
    cdf_compare_series,
    density_compare_series,
    moments,
    pp_series,
    rank_fits,
)
from .samples import Sample

log = logging.getLogger("repodist")

KINDS = ("github-repos", "so-survey-2019", "so-survey-2020", "so-survey-2021", "travis-commits")
REPORT_SCHEMA = 1
COUNT_FAMILIES = ("Normal", "Poisson", "NegBinomial")
CONTINUOUS_FAMILIES = ("LogNormal", "Exponential", "WeibullMin", "Gamma", "InverseGaussian")
ANALYSES = ("histogram", "trend", "rates", "weekly", "timeseries", "contributors")


class UsageError(RepodistError):
    kind = "usage"


# ---------------------------------------------------------------------------
# fit report


@dataclass
class FitReport:
    """Everything one ``fit`` run produced, in a lossless JSON form."""

    dataset: str
    kind: str
    preprocessing: dict
    n: int
    results: list
    criterion: Criterion
    moments: dict = None
    malformed: dict = field(default_factory=dict)
    schema: int = REPORT_SCHEMA

    @property
    def ranking(self):
        return Ranking(self.results, self.criterion)

    def to_dict(self):
        return {
            "schema": self.schema,
            "tool_version": __version__,
            "dataset": self.dataset,
            "kind": self.kind,
            "preprocessing": self.preprocessing,
            "n": self.n,
            "criterion": self.criterion.value,
            "ranking": [r.family.value for r in self.results],
            "results": [r.to_dict() for r in self.results],
            "moments": self.moments,
            "malformed": self.malformed,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, r):
        if r.get("schema") != REPORT_SCHEMA:
            raise UsageError(f"unsupported fit report schema {r.get('schema')!r}")
        return cls(r["dataset"], r["kind"], r["preprocessing"], r["n"],
                   [FitResult.from_dict(x) for x in r["results"]], Criterion.parse(r["criterion"]),
                   r.get("moments"), r.get("malformed", {}), r["schema"])


# ---------------------------------------------------------------------------
# dataset loading


def load_sample(kind, path, year_range=None, band=None, group_by="project"):
    """Read ``path`` as ``kind`` and return ``(Sample, malformed counts)``."""
    if kind == "github-repos":
        data = ingest.read_repo_csv(path)
        sample = ingest.repo_sample(data.records, band)
        malformed = {"repos": data.malformed}
    elif kind == "travis-commits":
        data = ingest.read_commit_events(path)
        totals = analyze.commit_totals(data.records, group_by)
        sample = Sample(sorted(totals.values(), reverse=True), kind, (f"commits per {group_by}",))
        malformed = {"commits": data.malformed}
    else:
        data = ingest.read_survey_csv(path)
        if kind == "so-survey-2020":
            sample = ingest.preprocess_2020(data.records)
        elif kind == "so-survey-2019":
            sample = ingest.preprocess_2019(data.records)
        else:
            sample = ingest.preprocess_2021(data.records)
        malformed = {"survey": data.malformed}
    if year_range is not None:
        sample = ingest.filter_experience_range(sample, *year_range)
    return sample, malformed


def _families(text, kind):
    if text is None:
        return list(COUNT_FAMILIES if kind == "so-survey-2020" else CONTINUOUS_FAMILIES)
    try:
        return [Family.parse(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        atomic_write_text(path, text)


def _series_text(series, fmt):
    return series.to_json() + "\n" if fmt == "json" else series.to_csv()


def _sibling(out, suffix):
    stem = out[:-5] if out.endswith(".json") else out
    return f"{stem}.{suffix}"


# ---------------------------------------------------------------------------
# commands


def cmd_fit(args):
    sample, malformed = load_sample(args.kind, args.input, args.range, args.band, args.group_by)
    families = _families(args.families, args.kind)
    ranking = rank_fits(sample, families, args.criterion, standardize_first=args.standardize)
    try:
        summary = moments(sample).to_dict()
    except RepodistError as exc:
        summary = {"error": str(exc)}
    report = FitReport(
        dataset=os.path.basename(args.input),
        kind=args.kind,
        preprocessing={**sample.provenance(), "standardized": args.standardize,
                       "range": args.range, "band": args.band},
        n=len(sample),
        results=ranking.results,
        criterion=ranking.criterion,
        moments=summary,
        malformed=malformed,
    )
    _write(args.out, report.to_json())
    if args.series:
        if args.out in (None, "-"):
            raise UsageError("--series needs --out to name the series files")
        best = ranking.best
        values = sample.values
        if best.transform is not None:
            values = (values - best.transform[0]) / best.transform[1]
        makers = {"pp": lambda: pp_series(best.distribution, values),
                  "cdf": lambda: cdf_compare_series(best.distribution, values),
                  "density": lambda: density_compare_series(best.distribution, values, args.bins)}
        for name in args.series:
            _write(_sibling(args.out, f"{name}.{args.format}"), _series_text(makers[name](), args.format))
    return 0


def cmd_analyze(args):
    analyses = args.analysis or ["histogram"]
    outputs = []
    events = records = None
    for name in analyses:
        if name in ("rates", "weekly", "timeseries"):
            if args.kind != "travis-commits":
                raise UsageError(f"analysis {name!r} needs --kind travis-commits")
            if events is None:
                data = ingest.read_commit_events(args.input)
                events = data.records
                log.info("read %d commit events (%d malformed)", len(events), data.malformed)
            if name == "rates":
                table = analyze.commit_rates(events, args.group_by, inclusive=args.inclusive_span)
                series = table.series()
            elif name == "weekly":
                series = analyze.weekly_profile(events)
            else:
                series = analyze.time_series(events, args.granularity)
                if len(series):
                    series.meta["peak_period"] = analyze.peak_period(series)
        elif name == "contributors":
            if args.kind != "github-repos":
                raise UsageError("analysis 'contributors' needs --kind github-repos")
            if records is None:
                records = ingest.read_repo_csv(args.input).records
            series = analyze.commits_vs_contributors(records)
        else:
            sample, _ = load_sample(args.kind, args.input, args.range, args.band, args.group_by)
            if name == "trend":
                series, _ = analyze.rank_trend(sample, descending=True, ranks=args.ranks)
            else:
                bins = "integer" if args.bins is None else args.bins
                series = analyze.histogram(sample, bins, density=args.density)
        outputs.append((name, series))

    if len(outputs) == 1 and not (args.out and os.path.isdir(args.out)):
        _write(args.out, _series_text(outputs[0][1], args.format))
    else:
        if args.out in (None, "-"):
            raise UsageError("several analyses need --out naming a directory")
        os.makedirs(args.out, exist_ok=True)
        for name, series in outputs:
            _write(os.path.join(args.out, f"{name}.{args.format}"), _series_text(series, args.format))
    return 0


def cmd_synth(args):
    cfg = synth.SynthConfig.from_json(args.config, seed=args.seed)
    if args.workers:
        cfg.workers = args.workers
    if args.out in (None, "-"):
        raise UsageError("synth needs --out naming the output directory")
    graph = synth.generate(cfg)
    synth.export_graph(graph, args.out, cfg)
    summary = {"out": args.out, "coders": graph.n_coders, "commits": graph.n_commits,
               "repos": graph.n_repos, "seed": cfg.seed}
    sys.stdout.write(json.dumps(summary) + "\n")
    return 0


def _params(text):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise UsageError(f"--params must be comma-separated numbers: {exc}") from exc


def cmd_sample(args):
    d = Distribution(Family.parse(args.family), _params(args.params))
    if args.n < 1:
        raise UsageError("-n must be at least 1")
    draws = d.sample(np.random.default_rng(args.seed), args.n)
    if args.format == "json":
        text = json.dumps({"distribution": d.to_dict(), "seed": args.seed, "n": args.n,
                           "values": draws.tolist()}) + "\n"
    else:
        text = "value\n" + "".join(f"{v!r}\n" for v in draws.tolist())
    _write(args.out, text)
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _range(text):
    lo, sep, hi = text.partition("-")
    if not sep:
        raise argparse.ArgumentTypeError("expected LO-HI, e.g. 0-50")
    try:
        return (float(lo), float(hi))
    except ValueError:
        raise argparse.ArgumentTypeError("expected LO-HI, e.g. 0-50") from None


def _ranks(text):
    lo, hi = _range(text)
    return (int(lo), int(hi))


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="seed for every random draw")
    common.add_argument("--out", help="output path (stdout when omitted)")
    common.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="format of series and sample output (default csv)")

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("input", help="dataset CSV")
    data.add_argument("--kind", choices=KINDS, required=True, help="dataset format")
    data.add_argument("--range", type=_range, metavar="LO-HI",
                      help="keep experience years in [LO, HI] (surveys)")
    data.add_argument("--band", help="activity band label, e.g. 100-1000 (github-repos)")
    data.add_argument("--group-by", choices=("project", "author"), default="project",
                      help="grouping for commit tables (default project)")

    parser = argparse.ArgumentParser(prog="repodist", description=__doc__.splitlines()[0].replace("``", ""))
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", parents=[common, data], help="fit and rank distribution families")
    p.add_argument("--families", help="comma-separated families (default depends on --kind)")
    p.add_argument("--criterion", choices=[c.value for c in Criterion], default="AIC")
    p.add_argument("--standardize", action="store_true", help="fit the z-scored sample")
    p.add_argument("--series", nargs="+", choices=("pp", "cdf", "density"),
                   help="also write diagnostic series for the best fit")
    p.add_argument("--bins", type=int, default=30, help="bins for the density series")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("analyze", parents=[common, data], help="descriptive analyses")
    p.add_argument("--analysis", action="append", choices=ANALYSES,
                   help="analysis to run; repeat for several (default histogram)")
    p.add_argument("--granularity", choices=analyze.GRANULARITIES, default="year")
    p.add_argument("--ranks", type=_ranks, metavar="LO-HI", help="rank window for the trend line")
    p.add_argument("--bins", type=int, help="histogram bin count (default: unit bins)")
    p.add_argument("--density", action="store_true", help="unit-area histogram")
    p.add_argument("--inclusive-span", action="store_true",
                   help="divide commit counts by last - first + 1 days")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("synth", parents=[common], help="generate a synthetic graph")
    p.add_argument("config", help="SynthConfig JSON file")
    p.add_argument("--workers", type=int, help="threads for repository blocks")
    p.set_defaults(func=cmd_synth, needs_seed=True)

    p = sub.add_parser("sample", parents=[common], help="draw from one distribution")
    p.add_argument("family")
    p.add_argument("--params", required=True, help="comma-separated parameters in family order")
    p.add_argument("-n", type=int, default=1, help="number of draws")
    p.set_defaults(func=cmd_sample, needs_seed=True)
    return parser


def _error_record(exc):
    record = {"kind": getattr(exc, "kind", "error"), "message": str(exc)}
    problems = getattr(exc, "problems", None)
    if problems:
        record["problems"] = [{"field": f, "message": m} for f, m in problems]
    return {"error": record}


def main(argv=None):
    level = os.environ.get("REPODIST_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "needs_seed", False) and args.seed is None:
            raise UsageError(f"{args.command} requires --seed")
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(json.dumps(_error_record(exc)) + "\n")
        return 2
    except RepodistError as exc:
        sys.stderr.write(json.dumps(_error_record(exc)) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
